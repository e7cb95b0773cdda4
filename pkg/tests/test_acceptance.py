"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The figure sweeps default to 2,000 epochs; set ILIFC_ACCEPTANCE_EPOCHS=10000
for the full-length runs.
"""

import math
import os
import time

import pytest

from conftest import ACCEPTANCE_LINES
from ilifc import CodeParams, WriteStrategy
from ilifc import bounds as B
from ilifc import sim
from ilifc import verify as V
from ilifc.cli import main

USUAL, UNUSUAL = WriteStrategy.USUAL_ONLY, WriteStrategy.ALLOW_UNUSUAL
SWEEP_EPOCHS = int(os.environ.get("ILIFC_ACCEPTANCE_EPOCHS", "2000"))
AUDIT_EPOCHS = 400  # per workload, three workloads
AUDIT_WORKLOADS = (sim.UNIFORM, sim.ALTERNATING, sim.Workload("distance", 9))


def report(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def parity_valid(k, q):
    return k % 2 == 0 or (q - 1) % 2 == 0


@pytest.fixture(scope="module")
def audits():
    out = {}
    for strategy, r in ((USUAL, B.r1_star(640, 16, 4)), (UNUSUAL, B.r2_star(640, 16, 4))):
        out[strategy] = sim.bound_audit(
            CodeParams(640, 16, 4, r), strategy, trials=AUDIT_EPOCHS, workloads=AUDIT_WORKLOADS, seed=2024
        )
    return out


def test_criterion_01_mode_rule():
    start = time.perf_counter()
    pairs = sum(2**k * (2**k - 1) for k in range(2, 11))
    ok = all(V.oracle_mode_rule(k) for k in range(2, 11))
    elapsed = time.perf_counter() - start
    report(1, ok and elapsed < 60, f"{pairs} ordered pairs for k=2..10 in {elapsed:.1f}s")


def test_criterion_02_delta():
    mismatches = [k for k in range(2, 65) if B.delta(k) != V.oracle_delta(k)]
    report(2, not mismatches, f"k=2..64, mismatches={mismatches}")


def test_criterion_03_erasure_condition():
    checked, failed = 0, []
    for k in (2, 4, 5):
        for q in (2, 3):
            if not parity_valid(k, q):
                continue
            for m in range(k, k + 4):
                for a1, a2 in V.realizable_occupancies(k, m):
                    for strategy in (USUAL, UNUSUAL):
                        checked += 1
                        if not V.oracle_erasure_condition(k, q, (m, a1, a2), strategy, random_passes=2, seed=checked):
                            failed.append((k, q, m, a1, a2, strategy.value))
    report(3, not failed, f"{checked} occupancy/strategy cases, failures={failed[:5]}")


def test_criterion_04_capacity():
    grid = [(n, k, q) for k, q in ((2, 2), (3, 3), (4, 2), (4, 3), (6, 4), (8, 2), (5, 5)) for n in (k * k, k * k + k + 1, 3 * k * k)]
    grid = [(n, k, q) for n, k, q in grid if parity_valid(k, q)]
    bad = []
    for index, (n, k, q) in enumerate(grid):
        res = sim.run_average(CodeParams(n, k, q), sim.ALTERNATING, epochs=5, seed=index)
        bad += [(n, k, q, t) for t in res.writes_per_epoch if k * t > n * (q - 1)]
    report(4, len(grid) >= 20 and not bad, f"{len(grid)} parameter sets, violations={bad[:5]}")


def test_criterion_05_usual_lower_bound(audits):
    rep = audits[USUAL]
    writes_ok = not [v for v in rep.violations if "guaranteed" in v]
    report(5, rep.epochs >= 1000 and writes_ok and rep.min_writes >= rep.guaranteed_writes,
           f"r1*={rep.params.r}, {rep.epochs} epochs, min writes {rep.min_writes} >= t1 {rep.guaranteed_writes}")


def test_criterion_06_unusual_lower_bound(audits):
    rep = audits[UNUSUAL]
    writes_ok = not [v for v in rep.violations if "guaranteed" in v]
    report(6, rep.epochs >= 1000 and writes_ok and rep.min_writes >= rep.guaranteed_writes,
           f"r2*={rep.params.r}, {rep.epochs} epochs, min writes {rep.min_writes} >= t1+t2 {rep.guaranteed_writes}")


def test_criterion_07_unused_levels(audits):
    bad = [v for rep in audits.values() for v in rep.violations if "unused" in v or "used=" in v]
    limits = {s.value: rep.max_unused for s, rep in audits.items()}
    report(7, not bad, f"unused limits {limits}, violations={bad[:3]}")


def sweep(n, k, q):
    return sim.sweep_r(n, k, q, sim.UNIFORM, epochs=SWEEP_EPOCHS, seed=1, jobs=os.cpu_count() or 1)


@pytest.mark.slow
def test_criterion_08_sweep_640_16_4():
    results = sweep(640, 16, 4)
    best = sim.best_r(results)
    means = {res.r: res.mean for res in results}
    ok = abs(best - 32) <= 16 and means[best] > means[0]
    report(8, ok, f"{SWEEP_EPOCHS} epochs, argmax r={best} (mean {means[best]:.2f}), r=0 mean {means[0]:.2f}")


@pytest.mark.slow
def test_criterion_09_sweep_192_8_8():
    results = sweep(192, 8, 8)
    best = sim.best_r(results)
    report(9, abs(best - 24) <= 8, f"{SWEEP_EPOCHS} epochs, argmax r={best} (mean {max(r.mean for r in results):.2f})")


@pytest.mark.slow
def test_criterion_10_sweep_288_12_4():
    results = sweep(288, 12, 4)
    base = results[0]
    assert base.r == 0
    worse = [
        res.r for res in results[1:]
        if base.mean < res.mean - math.sqrt(base.stderr**2 + res.stderr**2)
    ]
    report(10, not worse, f"{SWEEP_EPOCHS} epochs, r=0 mean {base.mean:.2f}, r values beating it: {worse}")


def n_grid(k, q, points=10):
    lo = k * k + 1
    while not (B.length_ok_1(lo, k, q) and B.length_ok_2(lo, k, q)):
        lo += 1
    hi = max(lo + points, math.ceil(2 * B.p1(k, q)))
    grid = {lo + (hi - lo) * i // (points - 1) for i in range(points)}
    grid |= {math.floor(B.p1(k, q)), math.ceil(B.p1(k, q)), math.floor(B.p2(k, q)), math.ceil(B.p2(k, q))}
    return sorted(n for n in grid if n >= lo)


def sign(x):
    return (x > 0) - (x < 0)


def test_criterion_11_thresholds():
    pairs, checks, bad = 0, 0, []
    for k in range(4, 33):
        for q in range(2, 9):
            if not parity_valid(k, q):
                continue
            pairs += 1
            p1, p2 = B.p1(k, q), B.p2(k, q)
            if not p1 > p2:
                bad.append((k, q, "p1<=p2"))
            for n in n_grid(k, q):
                ub = B.t_ub(n, k, q)
                checks += 2
                if sign(B.t_lb1_star(n, k, q) - ub) != sign(n - p1):
                    bad.append((k, q, n, 1))
                if sign(B.t_lb2_star(n, k, q) - ub) != sign(n - p2):
                    bad.append((k, q, n, 2))
    report(11, not bad, f"{pairs} (k,q) pairs, {checks} sign checks, failures={bad[:5]}")


def test_criterion_12_worst_case_example(capsys):
    t_lb, t_ub = B.t_lb1_star(640, 16, 4), B.t_ub(640, 16, 4)
    code = main(["bounds", "--n", "640", "--k", "16", "--q", "4"])
    out = capsys.readouterr().out
    printed = "127.736" in out and "120.000" in out
    ok = code == 0 and printed and abs(float(t_lb) - 127.7) < 0.05 and t_ub == 120 and t_lb > t_ub
    report(12, ok, f"t_lb1*={float(t_lb):.3f} > t_ub={float(t_ub):.3f}, printed to 3 decimals: {printed}")


def test_criterion_13_toy_worst_case():
    rows, bad, toys = [], [], 0
    for n, k, q, r, strategy in V.WORSTCASE_INSTANCES:
        worst, failures = V.worstcase_checks(n, k, q, r, strategy)
        toys += r > 0
        rows.append(f"({n},{k},{q},{r},{strategy.value})={worst}")
        bad += failures
    ilifc_422 = V.oracle_worstcase_small(4, 2, 2, 0)
    ok = not bad and toys >= 2 and ilifc_422 == 2
    report(13, ok, f"worst cases {' '.join(rows)}, failures={bad}")
