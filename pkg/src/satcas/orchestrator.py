"""Pipeline driver: encode, split, prune equivalent cubes, solve in parallel,
verify exactly, canonicalise and report."""
from __future__ import annotations

import itertools
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from . import designs as D
from . import encoder as E
from . import hypercube as H
from . import oracle as O
from .config import SearchConfig
from .sat import Solver, SolverTimeout, Stats, enumerate_models

log = logging.getLogger(__name__)

SCHEMA = "satcas.report/1"
FAMILIES = ("williamson", "good", "best", "golay", "ruskey-savage", "norine")
MATRIX_FAMILIES = ("williamson", "good", "best")
HYPERCUBE_FAMILIES = ("ruskey-savage", "norine")


class ParameterError(ValueError):
    pass


class SoundnessError(RuntimeError):
    """A reported object failed exact verification."""


@dataclass(frozen=True)
class SubInstance:
    family: str
    params: tuple  # sorted (key, value) pairs, hashable and picklable
    cube: tuple[int, ...]
    id: str

    @property
    def param_dict(self) -> dict:
        return dict(self.params)


@dataclass
class SubResult:
    id: str
    cube: tuple[int, ...]
    status: str  # "sat", "unsat", "timeout", "error"
    models: list[list[int]] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    checked: int = 0
    cpu: float = 0.0
    wall: float = 0.0
    error: str | None = None


@dataclass
class SearchReport:
    family: str
    params: dict
    status: str = "complete"
    verdict: str = ""
    subinstances: list[dict] = field(default_factory=list)
    solutions: list = field(default_factory=list)
    inequivalent: list = field(default_factory=list)
    checked: int = 0
    # every enumerated hypercube object, when recorded
    objects: list = field(default_factory=list)
    group: str = ""
    pruned: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    schema: str = SCHEMA

    @property
    def inequivalent_count(self) -> int:
        return len(self.inequivalent)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["inequivalent_count"] = self.inequivalent_count
        d["solution_count"] = len(self.solutions)
        return d

    def to_json(self, indent: int | None = 1) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @property
    def exit_code(self) -> int:
        if self.status != "complete":
            return 2
        return 1 if self.verdict == "counterexample" else 0


# ---------------------------------------------------------------------------
# encoding dispatch

def _params_key(params: dict) -> tuple:
    return tuple(sorted(params.items()))


def validate(family: str, params: dict) -> None:
    if family not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}")
    if family in MATRIX_FAMILIES:
        n = params.get("n")
        if not isinstance(n, int) or n < 1:
            raise ParameterError("order must be a positive integer")
        if family != "williamson" and not D.admissible_order(family, n):
            raise ParameterError(f"order {n} is not admissible for {family} matrices")
    elif family == "golay":
        n = params.get("n")
        if not isinstance(n, int) or n < 1:
            raise ParameterError("length must be a positive integer")
    else:
        d = params.get("d")
        if not isinstance(d, int) or not 2 <= d <= 6:
            raise ParameterError("dimension must be in [2, 6]")


def encode(family: str, params: dict, cfg: SearchConfig) -> E.Encoding:
    if family == "williamson":
        return E.encode_williamson(params["n"], cfg.row_sums)
    if family in ("good", "best"):
        return E.encode_amicable(params["n"], family, cfg.row_sums)
    if family == "golay":
        f = params.get("f")
        return E.encode_golay(params["n"], None if f is None else D.parse_quaternary(f), cfg.tol)
    if family == "ruskey-savage":
        return E.encode_matching(params["d"], maximal=True)
    return E.encode_norine(params["d"])


def install(solver: Solver, family: str, enc: E.Encoding, cfg: SearchConfig):
    if family in MATRIX_FAMILIES:
        return E.install_matrix(solver, enc, cfg)
    if family == "golay":
        return E.install_golay(solver, enc, cfg)
    return E.install_hypercube(solver, enc, cfg)


# ---------------------------------------------------------------------------
# splitting and pruning

def split(family: str, params: dict, depth: int, split_order: Sequence[int] | None = None,
          cfg: SearchConfig | None = None) -> list[SubInstance]:
    """2**depth cubes over the first ``depth`` variables of the split order."""
    cfg = cfg or SearchConfig()
    if split_order is None:
        split_order = encode(family, params, cfg).varmap.domain_vars
    if not 0 <= depth <= len(split_order):
        raise ParameterError(f"split depth {depth} exceeds {len(split_order)} split variables")
    vs = list(split_order[:depth])
    width = len(str(max(1, 2 ** depth - 1)))
    out = []
    for i, signs in enumerate(itertools.product((1, -1), repeat=depth)):
        cube = tuple(s * v for s, v in zip(signs, vs))
        out.append(SubInstance(family, _params_key(params), cube, f"{i:0{width}d}"))
    return out


def prune_equivalent(subs: list[SubInstance], family: str, cfg: SearchConfig | None = None
                     ) -> tuple[list[SubInstance], dict[str, str]]:
    """One cube per class of first rows; returns (kept, discarded id -> kept id)."""
    cfg = cfg or SearchConfig()
    if len(subs) <= 1:
        return list(subs), {}
    if family not in MATRIX_FAMILIES:
        log.warning("no equivalence action for %s cubes; keeping all %d", family, len(subs))
        return list(subs), {}
    enc = encode(family, subs[0].param_dict, cfg)
    layout = enc.varmap.layout  # type: ignore[attr-defined]
    row_a = set(layout.row_vars(0))
    if {abs(l) for l in subs[0].cube} != row_a:
        log.warning("cubes do not fix exactly the first row; equivalence pruning skipped")
        return list(subs), {}
    rows = {}
    for s in subs:
        val = {abs(l): l > 0 for l in s.cube}
        rows[s.id] = layout.decode(lambda v: val[v], (0,))[0]
    by_row = {r: sid for sid, r in rows.items()}
    kept, mapping = [], {}
    for s in subs:
        rep = D.first_row_class(rows[s.id], family)
        if rows[s.id] == rep:
            kept.append(s)
        else:
            mapping[s.id] = by_row[rep]
    return kept, mapping


# ---------------------------------------------------------------------------
# workers

def solve_subinstance(sub: SubInstance, cfg: SearchConfig) -> SubResult:
    t0, c0 = time.monotonic(), time.process_time()
    res = SubResult(sub.id, sub.cube, "unsat")
    solver = Solver(seed=cfg.seed)
    try:
        enc = encode(sub.family, sub.param_dict, cfg)
        filt = install(solver, sub.family, enc, cfg)
        for l in sub.cube:
            solver.add_clause([l])
        deadline = None if cfg.timeout is None else t0 + cfg.timeout
        for lits in enumerate_models(solver, enc.varmap.domain_vars, limit=cfg.max_solutions,
                                     deadline=deadline):
            res.models.append(lits)
        if res.models:
            res.status = "sat"
        res.checked = getattr(filt, "checked", 0) if filt is not None else len(res.models)
    except SolverTimeout:
        res.status = "timeout"
    except Exception as exc:  # a crashed subinstance must not take the run down
        res.status = "error"
        res.error = f"{type(exc).__name__}: {exc}"
        log.exception("subinstance %s failed", sub.id)
    res.stats = asdict(solver.stats)
    res.wall = time.monotonic() - t0
    res.cpu = time.process_time() - c0
    return res


def _run_all(subs: list[SubInstance], cfg: SearchConfig) -> list[SubResult]:
    if cfg.workers <= 1 or len(subs) <= 1:
        results = [solve_subinstance(s, cfg) for s in subs]
    else:
        results = []
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            futs = [(s, ex.submit(solve_subinstance, s, cfg)) for s in subs]
            for s, fut in futs:
                try:
                    results.append(fut.result())
                except Exception as exc:
                    results.append(SubResult(s.id, s.cube, "error", error=repr(exc)))
    return sorted(results, key=lambda r: r.id)


# ---------------------------------------------------------------------------
# decoding and exact verification

def _decode(family: str, enc: E.Encoding, lits: list[int]):
    if family in MATRIX_FAMILIES:
        return E.decode_matrix(enc, lits)
    if family == "golay":
        return E.decode_golay(enc, lits)
    if family == "ruskey-savage":
        return E.decode_matching(lits)
    return E.decode_colouring(enc.varmap.params["d"], lits)


def verify_solution(family: str, obj, f=None) -> bool:
    if family == "williamson":
        return D.verify_williamson(D.WilliamsonCandidate(obj))
    if family in ("good", "best"):
        return D.verify_amicable(D.AmicableCandidate(obj, family))
    if family == "golay":
        return D.golay_verify(D.ComplexGolayPair(f, obj))
    raise ValueError(family)


def canonical(family: str, obj):
    if family == "williamson":
        return D.canonical_williamson(obj).rows
    if family in ("good", "best"):
        return D.canonical_amicable(D.AmicableCandidate(obj, family)).rows
    if family == "golay":
        f, g = D.canonical_golay(D.ComplexGolayPair(*obj))
        return (D.quaternary_string(f), D.quaternary_string(g))
    raise ValueError(family)


def expand_solutions(family: str, sols) -> set:
    """Re-expand solutions by the declared equivalence group."""
    out = set()
    for s in sols:
        s = tuple(tuple(r) for r in s)
        if family == "williamson":
            out |= D.williamson_orbit(D.WilliamsonCandidate(s))
        else:
            out |= D.amicable_orbit(D.AmicableCandidate(s, family))
    return out


GROUP_NAMES = {
    "williamson": "row permutations x row negations x simultaneous decimations",
    "good": "decimations x reversal of A x negation/permutation of B, C, D",
    "best": "decimations x reversal/permutation of A, B, C x negation of D",
    "golay": "swap x unit multiples x reversal-conjugation x conjugation x positional i^j twist",
    "ruskey-savage": "hypercube automorphisms (blocking only)",
    "norine": "hypercube automorphisms (blocking only)",
}


def _sub_entry(r: SubResult, n_found: int) -> dict:
    return {"id": r.id, "cube": list(r.cube), "status": r.status, "found": n_found,
            "checked": r.checked, "stats": r.stats, "error": r.error,
            "time": {"wall": round(r.wall, 6), "cpu": round(r.cpu, 6)}}


def _merge_stats(results: Sequence[SubResult]) -> dict:
    total = Stats()
    for r in results:
        if r.stats:
            total.merge(Stats(**r.stats))
    return asdict(total)


# ---------------------------------------------------------------------------
# run

def run(family: str, params: dict, cfg: SearchConfig | None = None) -> SearchReport:
    cfg = cfg or SearchConfig()
    validate(family, params)
    t0, c0 = time.monotonic(), time.process_time()
    rep = SearchReport(family, dict(params), config=cfg.to_dict(), group=GROUP_NAMES[family])
    if family == "golay":
        results = _run_golay(params, cfg, rep)
    else:
        enc = encode(family, params, cfg)
        subs = split(family, params, cfg.split_depth, enc.varmap.domain_vars, cfg)
        if cfg.prune and cfg.split_depth > 0:
            subs, mapping = prune_equivalent(subs, family, cfg)
            rep.pruned = mapping
            if not mapping and family in MATRIX_FAMILIES:
                rep.notes.append("equivalence pruning not applicable to these cubes")
        results = _run_all(subs, cfg)
        if family in MATRIX_FAMILIES:
            _collect_matrix(family, enc, results, rep, cfg)
        else:
            _collect_hypercube(family, enc, results, rep, cfg)
    rep.stats = _merge_stats(results)
    if any(r.status in ("timeout", "error") for r in results):
        rep.status = "incomplete"
    rep.verdict = _verdict(family, rep)
    rep.timing = {"wall": round(time.monotonic() - t0, 6),
                  "cpu": round(time.process_time() - c0 + sum(r.cpu for r in results), 6)}
    return rep


def _verdict(family: str, rep: SearchReport) -> str:
    if rep.status != "complete":
        return "incomplete"
    if family in HYPERCUBE_FAMILIES:
        return "counterexample" if rep.solutions else "holds"
    if rep.solutions:
        return "exists"
    # no matrices of an admissible order refutes the existence conjecture
    return "counterexample" if family in MATRIX_FAMILIES else "none"


def _collect_matrix(family, enc, results, rep, cfg) -> None:
    sols = []
    for r in results:
        found = 0
        for lits in r.models:
            obj = _decode(family, enc, lits)
            if not verify_solution(family, obj):
                raise SoundnessError(f"subinstance {r.id} reported a candidate failing exact verification: {obj}")
            sols.append(tuple(tuple(x) for x in obj))
            found += 1
        rep.subinstances.append(_sub_entry(r, found))
        rep.checked += r.checked
    rep.solutions = [list(map(list, s)) for s in sorted(set(sols))]
    rep.inequivalent = [list(map(list, c)) for c in sorted({canonical(family, s) for s in sols})]


def _collect_hypercube(family, enc, results, rep, cfg) -> None:
    d = enc.varmap.params["d"]
    g = H.build_hypercube(d)
    cex = []
    objects = []
    for r in results:
        found = 0
        for lits in r.models:
            obj = _decode(family, enc, lits)
            if family == "ruskey-savage":
                if not H.is_maximal_matching(g, obj):
                    raise SoundnessError(f"enumerated edge set {obj} is not a maximal matching")
                cyc = H.extend_to_hamiltonian(g, obj)
                bad = cyc is None
                if not bad and not H.is_hamiltonian_cycle(g, cyc, obj):
                    raise SoundnessError("Hamiltonian extension failed the structural check")
                key = list(obj)
            else:
                if not H.valid_antipodal_colouring(g, obj):
                    raise SoundnessError("enumerated colouring is not antipodal")
                bad = H.monochromatic_antipodal_path(g, obj) is None
                key = [e for e, c in enumerate(obj) if c]
            if cfg.hypercube_blocking != "plain" and not bad:
                raise SoundnessError(f"subinstance {r.id} reported {key} as a counterexample but it is not one")
            if bad:
                cex.append(key)
                found += 1
            objects.append(key)
        rep.subinstances.append(_sub_entry(r, found))
        rep.checked += r.checked
    rep.solutions = sorted(cex)
    rep.inequivalent = sorted({_hypercube_canonical(d, x) for x in cex})
    if cfg.record_objects or cfg.hypercube_blocking == "plain":
        rep.objects = sorted(objects)


def _hypercube_canonical(d: int, edges) -> tuple[int, ...]:
    if d > 6:
        return tuple(edges)
    return min(tuple(sorted(s)) for s in H.automorphism_images(d, edges))


def _run_golay(params, cfg, rep) -> list[SubResult]:
    n = params["n"]
    stage1 = encode("golay", {"n": n}, cfg)
    subs = split("golay", {"n": n}, cfg.split_depth, stage1.varmap.domain_vars, cfg)
    if cfg.prune and cfg.split_depth > 0:
        rep.notes.append("no cube-level equivalence action for Golay; pruning skipped")
    s1 = _run_all(subs, cfg.with_(max_solutions=None))
    fs = []
    for r in s1:
        for lits in r.models:
            f = E.decode_golay(stage1, lits)
            if not D.golay_norm_filter(f, tol=cfg.tol).passed:
                raise SoundnessError(f"stage-1 f {D.quaternary_string(f)} fails the norm filter")
            fs.append(f)
        rep.subinstances.append(dict(_sub_entry(r, len(r.models)), stage=1))
    rep.checked = len(fs)
    if cfg.golay_stage1_only:
        rep.solutions = sorted(D.quaternary_string(f) for f in fs)
        rep.inequivalent = []
        rep.notes.append("stage 1 only: solutions are candidate f sequences")
        return s1
    fs.sort(key=D.quaternary_string)
    width = len(str(max(1, len(fs) - 1)))
    subs2 = [SubInstance("golay", _params_key({"n": n, "f": D.quaternary_string(f)}), (), f"f{i:0{width}d}")
             for i, f in enumerate(fs)]
    s2 = _run_all(subs2, cfg)
    pairs = []
    by_id = {s.id: s for s in subs2}
    for r in s2:
        sub = by_id[r.id]
        f = D.parse_quaternary(sub.param_dict["f"])
        enc2 = encode("golay", sub.param_dict, cfg)
        for lits in r.models:
            g = _decode("golay", enc2, lits)
            if not verify_solution("golay", g, f=f):
                raise SoundnessError(f"pair ({sub.param_dict['f']}, {D.quaternary_string(g)}) is not a Golay pair")
            pairs.append((f, g))
        entry = dict(_sub_entry(r, len(r.models)), stage=2, f=sub.param_dict["f"])
        rep.subinstances.append(entry)
    rep.solutions = sorted([D.quaternary_string(f), D.quaternary_string(g)] for f, g in pairs)
    rep.inequivalent = sorted({canonical("golay", (f, g)) for f, g in pairs})
    rep.inequivalent = [list(x) for x in rep.inequivalent]
    return s1 + s2


# ---------------------------------------------------------------------------
# oracle reports

def brute_force(family: str, params: dict) -> SearchReport:
    validate(family, params)
    t0, c0 = time.monotonic(), time.process_time()
    rep = SearchReport(family, dict(params), group=GROUP_NAMES[family], config={"oracle": True})
    try:
        if family == "williamson":
            sols = O.williamson_solutions(params["n"])
        elif family in ("good", "best"):
            sols = O.amicable_solutions(params["n"], family)
        elif family == "golay":
            sols = O.golay_solutions(params["n"])
        elif family == "ruskey-savage":
            ms, bad = O.ruskey_savage(params["d"])
            rep.checked = len(ms)
            sols = [sorted(m) for m in bad]
        else:
            cols, bad = O.norine(params["d"])
            rep.checked = len(cols)
            sols = [[e for e, c in enumerate(col) if c] for col in bad]
    except O.OracleSizeError as exc:
        raise ParameterError(str(exc)) from None
    if family in MATRIX_FAMILIES:
        rep.solutions = [list(map(list, s)) for s in sorted(sols)]
        rep.inequivalent = [list(map(list, c)) for c in sorted({canonical(family, s) for s in sols})]
        rep.checked = len(sols)
    elif family == "golay":
        rep.solutions = sorted([D.quaternary_string(f), D.quaternary_string(g)] for f, g in sols)
        rep.inequivalent = [list(x) for x in sorted({canonical("golay", p) for p in sols})]
        rep.checked = len(sols)
    else:
        rep.solutions = sorted(sols)
        rep.inequivalent = sorted({_hypercube_canonical(params["d"], x) for x in sols})
    rep.verdict = _verdict(family, rep)
    rep.timing = {"wall": round(time.monotonic() - t0, 6), "cpu": round(time.process_time() - c0, 6)}
    return rep


def solution_set(rep: SearchReport) -> set:
    """Hashable view of a report's solutions for set comparisons."""
    def freeze(x):
        return tuple(freeze(y) for y in x) if isinstance(x, (list, tuple)) else x
    return {freeze(s) for s in rep.solutions}


def strip_timing(d: Any) -> Any:
    if isinstance(d, dict):
        return {k: strip_timing(v) for k, v in d.items() if k not in ("timing", "time")}
    if isinstance(d, list):
        return [strip_timing(x) for x in d]
    return d
