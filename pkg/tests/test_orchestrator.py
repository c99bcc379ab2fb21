import json

import pytest

from satcas import designs as D
from satcas import encoder as E
from satcas import orchestrator as R
from satcas.config import SearchConfig


def test_split_depth_zero_is_singleton():
    subs = R.split("williamson", {"n": 5}, 0)
    assert len(subs) == 1 and subs[0].cube == ()


def test_split_cubes_are_disjoint_and_exhaustive():
    subs = R.split("williamson", {"n": 5}, 3)
    assert len(subs) == 8
    vs = {abs(l) for l in subs[0].cube}
    assert all({abs(l) for l in s.cube} == vs for s in subs)
    signs = {tuple(l > 0 for l in s.cube) for s in subs}
    assert len(signs) == 8
    for a in subs:
        for b in subs:
            if a is not b:
                assert any(-l in b.cube for l in a.cube)
    with pytest.raises(R.ParameterError):
        R.split("williamson", {"n": 5}, 13)


def test_split_union_equals_unsplit():
    base = R.run("williamson", {"n": 5})
    r = R.run("williamson", {"n": 5}, SearchConfig(split_depth=3, prune=False))
    assert R.solution_set(r) == R.solution_set(base)
    assert sum(s["found"] for s in r.subinstances) == len(r.solutions)


def test_prune_example_n3():
    subs = R.split("williamson", {"n": 3}, 2)
    kept, mapping = R.prune_equivalent(subs, "williamson")
    enc = R.encode("williamson", {"n": 3}, SearchConfig())
    rows = {}
    for s in subs:
        val = {abs(l): l > 0 for l in s.cube}
        rows[s.id] = enc.varmap.layout.decode(lambda v: val[v], (0,))[0]
    kept_rows = {rows[s.id] for s in kept}
    # [-1,1,1] and its negation [1,-1,-1] collapse to one cube
    assert not ({(-1, 1, 1), (1, -1, -1)} <= kept_rows)
    assert len(kept) + len(mapping) == 4
    assert R.prune_equivalent(R.split("williamson", {"n": 3}, 0), "williamson") == (R.split("williamson", {"n": 3}, 0), {})


def test_prune_falls_back_with_warning(caplog):
    subs = R.split("williamson", {"n": 7}, 2)
    with caplog.at_level("WARNING"):
        kept, mapping = R.prune_equivalent(subs, "williamson")
    assert kept == subs and mapping == {}
    assert "pruning skipped" in caplog.text


@pytest.mark.parametrize("family,n,depth", [("williamson", 5, 3), ("williamson", 7, 4), ("good", 7, 3),
                                            ("good", 9, 4), ("best", 7, 3)])
def test_split_prune_neutrality(family, n, depth):
    base = R.run(family, {"n": n})
    for prune in (False, True):
        r = R.run(family, {"n": n}, SearchConfig(split_depth=depth, prune=prune))
        assert r.inequivalent == base.inequivalent
        assert R.expand_solutions(family, r.solutions) == R.solution_set(base)
    assert r.pruned  # the first row was fixed, so something was pruned


@pytest.mark.parametrize("family,params", [("williamson", {"n": 5}), ("good", {"n": 5}), ("golay", {"n": 4}),
                                           ("norine", {"d": 3}), ("ruskey-savage", {"d": 3})])
def test_determinism(family, params):
    cfg = SearchConfig(split_depth=0 if family in ("golay",) else 2)
    a = R.strip_timing(R.run(family, params, cfg).to_dict())
    b = R.strip_timing(R.run(family, params, cfg).to_dict())
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_report_schema_and_consistency():
    rep = R.run("williamson", {"n": 3}, SearchConfig(split_depth=2, prune=False))
    d = json.loads(rep.to_json())
    assert d["schema"] == R.SCHEMA and d["solution_count"] == len(d["solutions"]) == 64
    assert sum(s["found"] for s in d["subinstances"]) == 64
    assert d["config"]["seed"] == 0 and d["config"]["tol"]["rel"] == 1e-6
    assert d["group"]
    for rows in d["solutions"]:
        assert D.verify_williamson(D.WilliamsonCandidate(rows))
    g = R.run("golay", {"n": 2})
    assert ["++", "+-"] in g.solutions


def test_soundness_gate_aborts_on_corrupt_model(monkeypatch):
    real = R._decode

    def corrupt(family, enc, lits):
        rows = real(family, enc, lits)
        return (rows[0],) * 4 if family in R.MATRIX_FAMILIES else rows

    monkeypatch.setattr(R, "_decode", corrupt)
    with pytest.raises(R.SoundnessError):
        R.run("williamson", {"n": 3})


def test_soundness_gate_golay(monkeypatch):
    real = R._decode
    monkeypatch.setattr(R, "_decode", lambda fam, enc, lits: D.parse_quaternary("+" * len(real(fam, enc, lits))))
    with pytest.raises(R.SoundnessError):
        R.run("golay", {"n": 3})


def test_soundness_gate_hypercube(monkeypatch):
    # pretend a checked colouring came back as a counterexample
    monkeypatch.setattr(E, "install_hypercube", lambda s, enc, cfg: None)
    with pytest.raises(R.SoundnessError):
        R.run("norine", {"d": 2})


def test_worker_crash_marks_subinstance(monkeypatch):
    real = R.install

    def flaky(solver, family, enc, cfg):
        if solver.seed == 99:
            raise RuntimeError("boom")
        return real(solver, family, enc, cfg)

    monkeypatch.setattr(R, "install", flaky)
    rep = R.run("williamson", {"n": 3}, SearchConfig(seed=99))
    assert rep.status == "incomplete" and rep.verdict == "incomplete" and rep.exit_code == 2
    assert rep.subinstances[0]["status"] == "error" and "boom" in rep.subinstances[0]["error"]


def test_timeout_is_incomplete_not_unsat():
    rep = R.run("williamson", {"n": 15}, SearchConfig(timeout=1e-9))
    assert rep.status == "incomplete" and rep.verdict == "incomplete"
    assert rep.subinstances[0]["status"] == "timeout"


def test_parallel_workers_match_inline():
    a = R.run("williamson", {"n": 5}, SearchConfig(split_depth=3, workers=1))
    b = R.run("williamson", {"n": 5}, SearchConfig(split_depth=3, workers=2))
    assert R.strip_timing(a.to_dict())["solutions"] == R.strip_timing(b.to_dict())["solutions"]
    assert [s["id"] for s in a.subinstances] == [s["id"] for s in b.subinstances]


def test_validate_rejects_bad_params():
    for fam, p in [("good", {"n": 4}), ("best", {"n": 5}), ("williamson", {"n": 0}), ("norine", {"d": 7}),
                   ("nope", {"n": 1}), ("golay", {"n": 0})]:
        with pytest.raises(R.ParameterError):
            R.run(fam, p)
    with pytest.raises(R.ParameterError):
        R.brute_force("williamson", {"n": 11})


def test_brute_force_examples():
    w = R.brute_force("williamson", {"n": 3})
    assert [[1, 1, 1], [-1, 1, 1], [-1, 1, 1], [-1, 1, 1]] in w.solutions
    assert ["++", "+-"] in R.brute_force("golay", {"n": 2}).solutions
    nr = R.brute_force("norine", {"d": 2})
    assert nr.checked == 4 and nr.verdict == "holds"


def test_plain_hypercube_mode_records_every_object():
    from satcas import oracle as O
    rep = R.run("ruskey-savage", {"d": 3}, SearchConfig(hypercube_blocking="plain"))
    assert sorted(map(tuple, rep.objects)) == sorted(tuple(sorted(m)) for m in O.maximal_matchings(3))
    rep = R.run("norine", {"d": 3}, SearchConfig(hypercube_blocking="plain"))
    assert len(rep.objects) == len(O.antipodal_colourings(3)) and rep.verdict == "holds"


def test_exit_codes():
    assert R.run("williamson", {"n": 3}).exit_code == 0
    assert R.run("norine", {"d": 2}).exit_code == 0
    rep = R.SearchReport("williamson", {"n": 35}, verdict="counterexample")
    assert rep.exit_code == 1
