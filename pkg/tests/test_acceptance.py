"""Exit criteria. Run with ``pytest tests/test_acceptance.py``; a PASS/FAIL line
per criterion is printed in the terminal summary."""

import itertools
import time

import networkx as nx
import numpy as np
import pytest

from lopma.bench.instances import generate_instance
from lopma.bench.oracle import brute_force_optimum
from lopma.bench.registry import BksRegistry
from lopma.budget import Budget
from lopma.core import Individual, evaluate, is_permutation
from lopma.engine import Algorithm, EngineConfig, run
from lopma.evolution import (
    DiversitySchedule,
    bnp_replacement,
    cycle_crossover,
    init_d0,
    kendall_tau,
    threshold,
)
from lopma.ils import IlsConfig, ils_run
from lopma.localsearch import InsertMove, apply_insert, insert_delta, local_search
from lopma.parallel import PoolExecutor, SequentialExecutor

from conftest import naive_evaluate, naive_kendall, random_instance


@pytest.fixture
def criterion(record_property):
    def label(text):
        record_property("criterion", text)

    return label


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def batch_evaluate(weights, perms):
    perms = np.asarray(perms)
    total = np.zeros(len(perms), dtype=np.int64)
    for i, j in itertools.combinations(range(perms.shape[1]), 2):
        total += weights[perms[:, i], perms[:, j]]
    return total


def test_c01_objective_oracle(criterion):
    criterion("1. evaluate == naive double loop, 200 instances x 1000 perms, n in [2,8], < 30 s")
    rng = np.random.default_rng(1)
    with Clock() as clk:
        for _ in range(200):
            n = int(rng.integers(2, 9))
            inst = random_instance(rng, n, low=-1000, high=1000)
            for _ in range(1000):
                p = rng.permutation(n)
                assert evaluate(inst, p) == naive_evaluate(inst.weights, p)
    assert clk.seconds < 30


def test_c02_delta_exactness(criterion):
    criterion("2. insert_delta == re-evaluation difference, 1000 triples, n <= 50, < 10 s")
    rng = np.random.default_rng(2)
    with Clock() as clk:
        for _ in range(1000):
            n = int(rng.integers(2, 51))
            inst = random_instance(rng, n)
            p = rng.permutation(n)
            mv = InsertMove(int(rng.integers(n)), int(rng.integers(n)))
            assert insert_delta(inst, p, mv) == naive_evaluate(inst.weights, apply_insert(p, mv)) - naive_evaluate(inst.weights, p)
    assert clk.seconds < 10


def test_c03_local_optimality(criterion):
    criterion("3. no improving insertion after local_search, 20 instances x 100 starts, n <= 50, < 60 s")
    rng = np.random.default_rng(3)
    with Clock() as clk:
        for _ in range(20):
            n = int(rng.integers(5, 51))
            inst = random_instance(rng, n)
            moves = [InsertMove(i, j) for i in range(n) for j in range(n) if i != j]
            for _ in range(100):
                out = local_search(inst, Individual.from_perm(inst, rng.permutation(n)), rng)
                assert out.fitness == naive_evaluate(inst.weights, out.perm)
                neighbours = np.array([apply_insert(out.perm, m) for m in moves])
                assert batch_evaluate(inst.weights, neighbours).max() <= out.fitness
    assert clk.seconds < 60


def test_c04_ils_reaches_exhaustive_optimum(criterion):
    criterion("4. ILS (1e4 iters) hits 8! optimum on >= 29/30 instances per seed, 30/30 best-of-3, < 5 min")
    with Clock() as clk:
        instances = [generate_instance(8, 0, 100, seed=400 + k) for k in range(30)]
        optima = [brute_force_optimum(inst)[0] for inst in instances]
        hits = np.zeros((3, 30), dtype=bool)
        for s in range(3):
            for k, inst in enumerate(instances):
                rng = np.random.default_rng([s, k])
                start = Individual.from_perm(inst, rng.permutation(8))
                got = ils_run(inst, start, IlsConfig(Budget.iterations(10_000)), rng)
                hits[s, k] = got.fitness == optima[k]
    print("hits per seed:", hits.sum(axis=1).tolist())
    assert all(h >= 29 for h in hits.sum(axis=1))
    assert hits.any(axis=0).all()
    assert clk.seconds < 300


def test_c05_memetic_beats_multistart(criterion):
    criterion("5. mean MA_EDM_EI > mean LS_MULTISTART at equal sweeps, 3 instances n=100, 10 seeds, < 15 min")
    with Clock() as clk:
        for k in range(3):
            inst = generate_instance(100, 0, 100, seed=500 + k)
            ma, ms = [], []
            for seed in range(10):
                r = run(inst, EngineConfig(
                    algorithm=Algorithm.MA_EDM_EI, population_size=10, run_budget=Budget.sweeps(20_000),
                    ils_config=IlsConfig(Budget.iterations(50)), seed=seed,
                ))
                # the baseline gets every sweep the memetic run actually spent
                b = run(inst, EngineConfig(algorithm=Algorithm.LS_MULTISTART, run_budget=Budget.sweeps(r.sweeps), seed=seed))
                assert b.sweeps >= r.sweeps
                ma.append(r.best.fitness)
                ms.append(b.best.fitness)
            print(f"instance {k}: MA_EDM_EI {np.mean(ma):.1f}  LS_MULTISTART {np.mean(ms):.1f}")
            assert np.mean(ma) > np.mean(ms)
    assert clk.seconds < 900


def test_c06_schedule_boundaries(criterion):
    criterion("6. threshold(0) == D0, threshold(1) == 0, non-increasing on 1000 points")
    rng = np.random.default_rng(6)
    inst = random_instance(rng, 30)
    pop = [Individual.from_perm(inst, rng.permutation(30)) for _ in range(20)]
    sched = DiversitySchedule(init_d0(pop))
    assert sched.d0 > 0
    assert threshold(sched, 0.0) == sched.d0
    assert threshold(sched, 1.0) == 0.0
    grid = np.sort(np.concatenate([[0.0, 1.0], rng.uniform(0, 1, 998)]))
    vals = [threshold(sched, float(p)) for p in grid]
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def _bnp_cases():
    rng = np.random.default_rng(7)
    for _ in range(500):
        n = int(rng.integers(2, 21))
        size = int(rng.integers(2, 41))
        keep = int(rng.integers(1, min(10, size) + 1))
        inst = random_instance(rng, n)
        union = [Individual.from_perm(inst, rng.permutation(n)) for _ in range(size)]
        d = float(rng.uniform(0, n * (n - 1) / 2))
        yield union, keep, d


def test_c07a_bnp_elitism_and_size(criterion):
    criterion("7a. BNP keeps the global best and returns exactly N, 500 unions, < 60 s")
    with Clock() as clk:
        for union, keep, d in _bnp_cases():
            out = bnp_replacement(union[:keep], union[keep:], d)
            assert len(out) == keep
            best = max(range(len(union)), key=lambda i: (union[i].fitness, -i))
            assert any(o is union[best] for o in out)
    assert clk.seconds < 60


def test_c07b_bnp_diversity_guarantee(criterion):
    criterion("7b. if >= N members are pairwise >= d apart, survivors are pairwise >= d apart, 500 unions")
    violations = []
    for case, (union, keep, d) in enumerate(_bnp_cases()):
        out = bnp_replacement(union[:keep], union[keep:], d)
        far = nx.Graph()
        far.add_nodes_from(range(len(union)))
        far.add_edges_from(
            (i, j) for i, j in itertools.combinations(range(len(union)), 2)
            if kendall_tau(union[i].perm, union[j].perm) >= d
        )
        if max(len(c) for c in nx.find_cliques(far)) < keep:
            continue
        if any(kendall_tau(a.perm, b.perm) < d for a, b in itertools.combinations(out, 2)):
            violations.append(case)
    print("violating cases:", violations)
    assert not violations


def test_c08_executor_independence(criterion):
    criterion("8. MA_EDM_EI N=8, 20 generations: identical RunResults for W in {1,2,4,7}, < 5 min")
    inst = generate_instance(40, 0, 100, seed=8)
    with Clock() as clk:
        results = []
        for executor in [SequentialExecutor()] + [PoolExecutor(w) for w in (1, 2, 4, 7)] + [PoolExecutor(4, "static")]:
            results.append(run(inst, EngineConfig(
                algorithm=Algorithm.MA_EDM_EI, population_size=8, run_budget=Budget.generations(20),
                ils_config=IlsConfig(Budget.iterations(40)), seed=88, intensify_executor=executor,
            )))
    ref = results[0]
    assert ref.generations == 20
    for other in results[1:]:
        assert other.same_outcome(ref)
    assert clk.seconds < 300


def test_c09_kendall_equivalence_and_axioms(criterion):
    criterion("9. kendall_tau == O(n^2) oracle on 1000 pairs; symmetry + triangle on 1000 triples, n <= 100, < 30 s")
    rng = np.random.default_rng(9)
    with Clock() as clk:
        for _ in range(1000):
            n = int(rng.integers(1, 101))
            a, b = rng.permutation(n), rng.permutation(n)
            assert kendall_tau(a, b) == naive_kendall(a, b)
        for _ in range(1000):
            n = int(rng.integers(1, 101))
            a, b, c = rng.permutation(n), rng.permutation(n), rng.permutation(n)
            assert kendall_tau(a, b) == kendall_tau(b, a)
            assert kendall_tau(a, a) == 0
            assert kendall_tau(a, c) <= kendall_tau(a, b) + kendall_tau(b, c)
    assert clk.seconds < 30


def test_c10_registry_fidelity(criterion):
    criterion("10. bundled BKS registry equals the published 26 h / 120 h tables")
    reg = BksRegistry.load()
    assert len(reg) == 18
    assert (reg["N-be75eec_500"].new_best, reg["N-be75eec_500"].previous_bks) == (33489269, 33464804)
    assert (reg["N-t70b11xx_1000"].new_best, reg["N-t70b11xx_1000"].previous_bks) == (314989031, 314603886)
    assert (reg["N-t65w11xx_1000"].new_best, reg["N-t65w11xx_1000"].previous_bks) == (72127664540, 72045429648)
    assert (reg["N-stabu75_750"].new_best, reg["N-stabu75_750"].previous_bks) == (91150565, 91056055)
    assert (reg["N-t70k11xx_1000"].new_best, reg["N-t70k11xx_1000"].previous_bks) == (28558080100, 28520983800)
    assert all(e.new_best > e.previous_bks for e in reg.values())


def test_c11_cycle_crossover(criterion):
    criterion("11. CX children valid, position-preserving and complementary on 1e4 pairs, n <= 64, < 30 s")
    rng = np.random.default_rng(11)
    with Clock() as clk:
        for _ in range(10_000):
            n = int(rng.integers(1, 65))
            p1, p2 = rng.permutation(n), rng.permutation(n)
            a, b = cycle_crossover(p1, p2)
            assert is_permutation(a, n) and is_permutation(b, n)
            assert np.all((a == p1) | (a == p2)) and np.all((b == p1) | (b == p2))
            assert np.array_equal(a == p1, b == p2)
            same_a, same_b = cycle_crossover(p1, p1)
            assert np.array_equal(same_a, p1) and np.array_equal(same_b, p1)
    assert clk.seconds < 30


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v"]))
