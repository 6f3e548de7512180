"""Best-known-solution registry bundled with the package."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources


@dataclass(frozen=True)
class BksEntry:
    previous_bks: int
    new_best: int
    source: str
    results: tuple[dict, ...] = ()


class BksRegistry(dict):
    """Instance name -> BksEntry."""

    @classmethod
    def from_json(cls, data: dict) -> "BksRegistry":
        reg = cls()
        for name, e in data.items():
            reg[name] = BksEntry(
                int(e["previous_bks"]),
                int(e["new_best"]),
                e.get("source", ""),
                tuple(e.get("results", ())),
            )
        return reg

    @classmethod
    def load(cls, path=None) -> "BksRegistry":
        if path is None:
            text = resources.files(__package__).joinpath("bks.json").read_text()
        else:
            with open(path) as fh:
                text = fh.read()
        return cls.from_json(json.loads(text))


def bundled_registry() -> BksRegistry:
    return BksRegistry.load()
