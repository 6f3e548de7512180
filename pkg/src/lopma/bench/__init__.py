"""Experiment harness: instance generation, oracle, registry, reports."""
