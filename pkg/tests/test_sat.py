import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import projected_solutions, random_3cnf, truth_table
from satcas import encoder as E
from satcas.config import SearchConfig
from satcas.sat import (
    SAT,
    UNSAT,
    BlockingContractError,
    CallbackContractError,
    ClauseSet,
    DimacsError,
    Reject,
    Solver,
    SolverTimeout,
    Stats,
    check_model,
    dimacs_read,
    dimacs_write,
    enumerate_models,
    luby,
    normalize,
    solve,
)
from satcas.sat.solver import _elit


def make(nvars, clauses, **kw):
    s = Solver(nvars, **kw)
    for c in clauses:
        s.add_clause(c)
    return s


# -- DIMACS ----------------------------------------------------------------

def test_dimacs_example():
    cs = dimacs_read("p cnf 2 1\n1 -2 0\n")
    assert cs.nvars == 2 and cs.clauses == [[1, -2]]


def test_dimacs_empty_clause_is_unsat():
    cs = dimacs_read("p cnf 0 1\n0\n")
    assert cs.clauses == [[]]
    assert solve(cs)[0] == UNSAT


@pytest.mark.parametrize("text,line", [
    ("p cnf 2\n1 0\n", 1),
    ("p cnf 2 1\n1 x 0\n", 2),
    ("p cnf 2 1\n1 3 0\n", 2),
    ("c hi\np cnf 2 1\n1 2\n", 3),
    ("1 2 0\n", 1),
    ("p cnf 2 2\n1 2 0\n", 2),
])
def test_dimacs_errors_carry_line_numbers(text, line):
    with pytest.raises(DimacsError) as exc:
        dimacs_read(text)
    assert exc.value.lineno == line


def test_dimacs_round_trip_random():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(1, 30)
        clauses = [[rng.choice((1, -1)) * rng.randint(1, n) for _ in range(rng.randint(1, 5))]
                   for _ in range(rng.randint(0, 40))]
        # messy but legal input: comments, odd spacing, clauses across lines
        body = "\n".join("  ".join(map(str, c)) + "\n 0" for c in clauses)
        text = f"c generated\np cnf {n} {len(clauses)}\n{body}\n"
        cs = dimacs_read(text)
        assert dimacs_write(cs) == normalize(text)
        assert normalize(dimacs_write(cs)) == dimacs_write(cs)
        assert cs.comments == ["generated"]


def test_clause_set_drops_tautologies():
    cs = ClauseSet(3)
    cs.add([1, -1, 2])
    cs.add([2, 2, 3])
    assert cs.clauses == [[2, 3]]


# -- solving ---------------------------------------------------------------

def test_solve_examples():
    st_, model = solve(ClauseSet(2, [[1, 2], [-1]]))
    assert st_ == SAT and model[1] is False and model[2] is True
    assert solve(ClauseSet(1, [[1], [-1]]))[0] == UNSAT


def test_luby_prefix():
    assert [luby(i) for i in range(15)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


def test_random_3cnf_against_truth_table():
    rng = random.Random(2024)
    for _ in range(60):
        clauses = random_3cnf(rng, 20, 85)
        want = truth_table(20, clauses).any()
        s = make(20, clauses)
        got = s.solve()
        assert (got == SAT) == want
        if got == SAT:
            assert check_model(clauses, s.model)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 10), st.data())
def test_small_random_cnf(nvars, data):
    lit = st.integers(1, nvars).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = data.draw(st.lists(st.lists(lit, min_size=1, max_size=4), max_size=40))
    want = truth_table(nvars, clauses).any()
    s = make(nvars, clauses)
    got = s.solve()
    assert (got == SAT) == want
    if got == SAT:
        assert check_model(clauses, s.model)


def test_assumptions():
    s = make(3, [[1, 2], [-1, 3]])
    assert s.solve([1, -3]) == UNSAT
    assert s.solve([1]) == SAT and s.value(3)
    # assumptions leave no trace
    assert s.solve([-1]) == SAT and s.value(2)


def test_timeout():
    # pigeonhole 8 into 7 is hard enough to outlast a zero deadline
    P, H = 8, 7
    var = lambda p, h: p * H + h + 1
    clauses = [[var(p, h) for h in range(H)] for p in range(P)]
    for h in range(H):
        for p in range(P):
            for q in range(p + 1, P):
                clauses.append([-var(p, h), -var(q, h)])
    s = make(P * H, clauses)
    with pytest.raises(SolverTimeout):
        s.solve(deadline=0.0)


def test_stats_json_and_merge():
    a, b = Stats(conflicts=2), Stats(conflicts=3, decisions=1)
    a.merge(b)
    assert a.conflicts == 5 and '"decisions": 1' in a.to_json()


# -- learned clauses -------------------------------------------------------

def _learned_external(s):
    return [[_elit(x) for x in c] for c in s.learnts]


def test_learned_clauses_are_implied():
    rng = random.Random(8)
    for _ in range(40):
        clauses = random_3cnf(rng, 16, 70)
        ok = truth_table(16, clauses)
        s = make(16, clauses)
        s.solve()
        for c in _learned_external(s):
            # every model of the formula satisfies the learned clause
            assert not (ok & ~truth_table(16, [c])).any()


def test_deletion_never_changes_answers():
    rng = random.Random(9)
    for _ in range(200):
        clauses = random_3cnf(rng, 20, rng.randint(70, 95))
        a = make(20, clauses).solve()
        s = make(20, clauses, max_learnts=2, restart_unit=2)
        b = s.solve()
        assert a == b
        if b == SAT:
            assert check_model(clauses, s.model)


@pytest.mark.parametrize("family,n", [("williamson", 5), ("good", 5), ("best", 7), ("golay", 4)])
def test_deletion_on_desk_encodings(family, n):
    cfg = SearchConfig()
    counts = []
    for kw in ({}, {"max_learnts": 2, "restart_unit": 2}):
        if family == "golay":
            enc = E.encode_golay(n)
            s = Solver(**kw)
            E.install_golay(s, enc, cfg)
        else:
            enc = E.encode_williamson(n) if family == "williamson" else E.encode_amicable(n, family)
            s = Solver(**kw)
            E.install_matrix(s, enc, cfg)
        counts.append(sorted(map(tuple, enumerate_models(s, enc.varmap.domain_vars))))
    assert counts[0] == counts[1]


# -- callbacks -------------------------------------------------------------

def test_always_pass_callback_is_neutral():
    rng = random.Random(4)
    for _ in range(100):
        clauses = random_3cnf(rng, 12, 52)
        plain = make(12, clauses).solve()
        s = make(12, clauses)
        s.attach_filter(range(1, 6), lambda vals: None)
        assert s.solve() == plain


def test_rejecting_callback_blocks_group_pattern():
    group = [1, 2, 3, 4, 5]

    def cb(vals):
        return [-v for v in group] if all(vals) else None

    s = Solver(8)
    s.attach_filter(group, cb)
    models = list(enumerate_models(s, list(range(1, 9))))
    assert len(models) == 2 ** 8 - 2 ** 3
    assert not any(all(l > 0 for l in m[:5]) for m in models)
    assert s.stats.callback_rejections >= 1


def test_callback_clause_must_be_falsified():
    s = Solver(2)
    s.attach_filter([1, 2], lambda vals: [1, 2] if vals[0] else None)
    s.add_clause([1])
    with pytest.raises(CallbackContractError):
        s.solve()


def test_reject_lemmas_are_added():
    s = Solver(3)
    s.attach_filter([1], lambda vals: Reject([-1], [[-2]]) if vals[0] else None)
    s.add_clause([1, 3])
    assert s.solve() == SAT
    assert not s.value(1) and not s.value(2) and s.value(3)


def test_duplicate_or_empty_group():
    s = Solver(3)
    s.attach_filter([1, 2], lambda v: None)
    with pytest.raises(ValueError):
        s.attach_filter([2, 1], lambda v: None)
    with pytest.raises(ValueError):
        s.attach_filter([], lambda v: None)


def test_callback_theory_against_truth_table():
    # theory: at most 2 of variables 1..6 are true, as a callback
    rng = random.Random(6)
    group = list(range(1, 7))

    def cb(vals):
        on = [v for v, b in zip(group, vals) if b]
        return [-v for v in on[:3]] if len(on) > 2 else None

    theory = [[-a, -b, -c] for a in group for b in group for c in group if a < b < c]
    for _ in range(40):
        clauses = random_3cnf(rng, 12, 30)
        want = projected_solutions(12, clauses + theory, range(1, 13))
        s = make(12, clauses)
        s.attach_filter(group, cb)
        got = {tuple(m) for m in enumerate_models(s, list(range(1, 13)))}
        assert got == want
        for m in got:
            assert s.check_callbacks([False] + [l > 0 for l in m])


# -- enumeration -----------------------------------------------------------

def test_enumerate_example():
    s = make(2, [[1, 2]])
    assert len(list(enumerate_models(s, [1, 2]))) == 3


def test_enumeration_completeness():
    rng = random.Random(10)
    for _ in range(30):
        n = rng.randint(4, 14)
        clauses = random_3cnf(rng, n, rng.randint(n, 3 * n))
        proj = sorted(rng.sample(range(1, n + 1), rng.randint(1, n)))
        want = projected_solutions(n, clauses, proj)
        got = [tuple(m) for m in enumerate_models(make(n, clauses), proj)]
        assert len(got) == len(set(got))
        assert set(got) == want


def test_enumerate_blocking_contract():
    s = Solver(2)
    with pytest.raises(BlockingContractError):
        list(enumerate_models(s, [1, 2], block_fn=lambda m: [l for l in m]))
    with pytest.raises(ValueError):
        list(enumerate_models(Solver(1), []))


def test_enumerate_limit():
    assert len(list(enumerate_models(Solver(4), [1, 2, 3, 4], limit=5))) == 5


def test_truth_table_oracle_sanity():
    assert truth_table(2, [[1, 2]]).tolist() == [False, True, True, True]
    assert np.count_nonzero(truth_table(3, [])) == 8
