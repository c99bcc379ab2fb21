"""Acceptance criteria, one test each.

Every test records a PASS/FAIL/SKIP line; the lines are printed in the pytest
terminal summary (see conftest.py) and directly when this file is executed as
a script.  Timing budgets in the criteria assume 4 cores; measured wall times
are reported alongside so they can be compared on other machines.
"""
from __future__ import annotations

import os
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from oracles import golay_pairs_hash_join, random_3cnf, truth_table
from satcas import designs as D
from satcas import orchestrator as R
from satcas.config import SearchConfig
from satcas.sat import SAT, Solver, check_model

RESULTS: list[str] = []
LONG = os.environ.get("SATCAS_LONG") == "1"


def record(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS.append(line)
    print(line, flush=True)
    assert ok, line


def test_1_oracle_equivalence():
    cases = ([("williamson", {"n": n}) for n in (1, 3, 5, 7)]
             + [("good", {"n": n}) for n in (1, 3, 5, 7, 9)]
             + [("best", {"n": n}) for n in (3, 7)]
             + [("golay", {"n": n}) for n in range(1, 7)]
             + [(f, {"d": d}) for f in ("ruskey-savage", "norine") for d in (2, 3)])
    t0 = time.monotonic()
    bad = []
    for fam, p in cases:
        run, oracle = R.run(fam, p), R.brute_force(fam, p)
        if R.solution_set(run) != R.solution_set(oracle) or run.verdict != oracle.verdict:
            bad.append((fam, p))
    # hypercube verdicts compare counterexample sets; also compare the full
    # enumerated object sets in plain mode against the oracle's objects
    from satcas import oracle as O
    for d in (2, 3):
        rs = R.run("ruskey-savage", {"d": d}, SearchConfig(hypercube_blocking="plain"))
        if sorted(map(tuple, rs.objects)) != sorted(tuple(sorted(m)) for m in O.maximal_matchings(d)):
            bad.append(("ruskey-savage objects", d))
        nr = R.run("norine", {"d": d}, SearchConfig(hypercube_blocking="plain"))
        want = sorted(tuple(e for e, c in enumerate(col) if c) for col in O.antipodal_colourings(d))
        if sorted(map(tuple, nr.objects)) != want:
            bad.append(("norine objects", d))
    wall = time.monotonic() - t0
    record(1, not bad and wall < 600, f"{len(cases)} instances equal to brute force, {wall:.1f}s (budget 600s) {bad or ''}")


def test_2_even_williamson():
    rows = []
    ok = True
    for n in range(2, 17, 2):
        t = time.monotonic()
        rep = R.run("williamson", {"n": n}, SearchConfig(max_solutions=1))
        dt = time.monotonic() - t
        good = (rep.status == "complete" and len(rep.solutions) >= 1 and dt < 300
                and all(D.verify_williamson(D.WilliamsonCandidate(s)) for s in rep.solutions))
        ok &= good
        rows.append(f"n={n}:{dt:.2f}s")
    record(2, ok, "verified set found for every even n <= 16 (" + ", ".join(rows) + ")")


@pytest.mark.skipif(not LONG, reason="long run; set SATCAS_LONG=1")
def test_3_williamson_35():
    cfg = SearchConfig(split_depth=10, prune=False, workers=os.cpu_count() or 1, timeout=48 * 3600)
    t = time.monotonic()
    rep = R.run("williamson", {"n": 35}, cfg)
    dt = time.monotonic() - t
    record(3, rep.status == "complete" and not rep.solutions,
           f"n=35 status={rep.status} solutions={len(rep.solutions)} wall={dt:.0f}s cpu={rep.timing['cpu']:.0f}s")


def test_4_ruskey_savage_d4():
    t = time.monotonic()
    rep = R.run("ruskey-savage", {"d": 4})
    dt = time.monotonic() - t
    record(4, rep.verdict == "holds" and dt < 1800,
           f"d=4 verdict={rep.verdict} extension checks={rep.checked} {dt:.2f}s (budget 1800s)")


def test_5_norine_d5():
    t = time.monotonic()
    rep = R.run("norine", {"d": 5})
    dt = time.monotonic() - t
    record(5, rep.verdict == "holds" and dt < 12 * 3600,
           f"d=5 verdict={rep.verdict} path checks={rep.checked} {dt:.2f}s (budget 43200s)")


def test_6_golay():
    t0 = time.monotonic()
    counts, bad = {}, []
    for n in range(1, 9):
        rep = R.run("golay", {"n": n})
        counts[n] = len(rep.solutions)
        if rep.status != "complete":
            bad.append(n)
        # n <= 6 against the exhaustive oracle; every n against the hash join
        if n <= 6 and R.solution_set(rep) != R.solution_set(R.brute_force("golay", {"n": n})):
            bad.append(n)
        if {tuple(s) for s in rep.solutions} != golay_pairs_hash_join(n):
            bad.append(n)
    wall = time.monotonic() - t0
    record(6, not bad and wall < 3600, f"pair counts {counts}, {wall:.1f}s (budget 3600s) {bad or ''}")


def test_7_filter_rejection_rate():
    rng = random.Random(0)
    n, h, trials = 35, 17, 100_000
    rejected = 0
    for _ in range(trials):
        bits = [rng.choice((1, -1)) for _ in range(h + 1)]
        rejected += not D.psd_filter([bits[min(j, n - j)] for j in range(n)]).passed
    rate = rejected / trials
    record(7, rate > 0.5, f"psd_filter rejects {rate:.2%} of {trials} random symmetric rows at n=35")


INVARIANT_TESTS = [
    "tests/test_seq_kernel.py::test_parseval",
    "tests/test_seq_kernel.py::test_paf_psd_link_1000_random",
    "tests/test_seq_kernel.py::test_npaf_symmetries",
    "tests/test_seq_kernel.py::test_unit_circle_max_is_an_upper_bound",
    "tests/test_designs.py::test_psd_sum_identity_and_filter_soundness",
    "tests/test_designs.py::test_canonical_idempotent_and_orbit_constant",
    "tests/test_designs.py::test_canonical_amicable_idempotent",
    "tests/test_sat.py::test_enumeration_completeness",
    "tests/test_sat.py::test_learned_clauses_are_implied",
    "tests/test_sat.py::test_deletion_never_changes_answers",
    "tests/test_orchestrator.py::test_determinism",
    "tests/test_orchestrator.py::test_soundness_gate_aborts_on_corrupt_model",
    "tests/test_orchestrator.py::test_soundness_gate_golay",
    "tests/test_orchestrator.py::test_soundness_gate_hypercube",
]


def test_8_invariant_suites():
    root = Path(__file__).resolve().parent.parent
    out = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *INVARIANT_TESTS],
                         cwd=root, capture_output=True, text=True, check=False)
    tail = out.stdout.strip().splitlines()[-1] if out.stdout.strip() else out.stderr[-200:]
    record(8, out.returncode == 0, f"{len(INVARIANT_TESTS)} invariant tests: {tail}")


def test_9_sat_differential():
    rng = random.Random(12345)
    t0 = time.monotonic()
    disagree = 0
    for _ in range(500):
        clauses = random_3cnf(rng, 20, 85)
        want = bool(truth_table(20, clauses).any())
        s = Solver(20)
        for c in clauses:
            s.add_clause(c)
        got = s.solve() == SAT
        if got != want or (got and not check_model(clauses, s.model)):
            disagree += 1
    wall = time.monotonic() - t0
    record(9, disagree == 0 and wall < 120,
           f"500 random 3-CNF (20 vars, 85 clauses): {disagree} disagreements, {wall:.1f}s incl. oracle (budget 120s)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
