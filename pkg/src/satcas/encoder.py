"""Translate each conjecture family into CNF plus the theory callbacks that guard it.

Arithmetic stays out of the clauses except for row-sum cardinality; spectra,
autocorrelations, Hamiltonian extension and monochromatic paths all run in
callbacks that hand conflict clauses back to the solver.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

from . import designs as D
from . import hypercube as H
from .config import SearchConfig, Tolerances
from .sat import ClauseSet, Reject, Solver
from .seq_kernel import UNITS, GaussInt, QuaternarySequence, npaf_all


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class VarRecord:
    var: int
    object: str
    coordinate: int
    # meaning of the variable being true for this coordinate
    polarity: str


@dataclass
class VarMap:
    family: str
    params: dict
    records: list[VarRecord]
    # primary variables in split order
    domain_vars: list[int]
    # (name, variables) of every callback group
    groups: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)
    # entries forced to a constant, e.g. the diagonal of a skew row
    constants: dict[str, dict[int, int]] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps([asdict(r) for r in self.records], indent=1)

    def by_object(self) -> dict[str, list[VarRecord]]:
        out: dict[str, list[VarRecord]] = {}
        for r in self.records:
            out.setdefault(r.object, []).append(r)
        return out


@dataclass
class Encoding:
    cnf: ClauseSet
    varmap: VarMap

    def __iter__(self):
        return iter((self.cnf, self.varmap))


# ---------------------------------------------------------------------------
# cardinality

def _totalizer(cs: ClauseSet, inputs: list[int]) -> list[int]:
    """Unary counter: output k-1 is true iff at least k inputs are true."""
    if len(inputs) == 1:
        return list(inputs)
    mid = len(inputs) // 2
    a = _totalizer(cs, inputs[:mid])
    b = _totalizer(cs, inputs[mid:])
    out = [cs.new_var() for _ in range(len(a) + len(b))]
    for i in range(len(a) + 1):
        for j in range(len(b) + 1):
            # a_i and b_j -> out_{i+j}
            if i + j > 0:
                c = [out[i + j - 1]]
                if i:
                    c.append(-a[i - 1])
                if j:
                    c.append(-b[j - 1])
                cs.add(c)
            # not a_{i+1} and not b_{j+1} -> not out_{i+j+1}
            if i + j < len(out):
                c = [-out[i + j]]
                if i < len(a):
                    c.append(a[i])
                if j < len(b):
                    c.append(b[j])
                cs.add(c)
    return out


def _count_equals(cs: ClauseSet, outs: list[int], w: int) -> int:
    """Fresh variable implying exactly ``w`` true inputs."""
    e = cs.new_var()
    if w >= 1:
        cs.add([-e, outs[w - 1]])
    if w < len(outs):
        cs.add([-e, -outs[w]])
    return e


def admissible_sum_tuples(n: int, roles: str) -> list[tuple[int, ...]]:
    """Ordered tuples of |row sum| with sum of squares 4n; skew rows sum to 1."""
    choices = []
    for t in roles:
        if t == "k":
            choices.append([1])
        else:
            choices.append([s for s in range(n % 2, n + 1, 2)])
    return [tup for tup in itertools.product(*choices) if sum(s * s for s in tup) == 4 * n]


# ---------------------------------------------------------------------------
# circulant families

@dataclass
class MatrixLayout:
    n: int
    kind: str
    # entry_lits[row][j]: literal meaning "entry j is +1", or 0 for the constant +1
    entry_lits: list[list[int]]

    def decode(self, value: Callable[[int], bool], rows_wanted=None) -> tuple[D.Row, ...]:
        rows = []
        for r, lits in enumerate(self.entry_lits):
            if rows_wanted is not None and r not in rows_wanted:
                rows.append(None)
                continue
            row = []
            for l in lits:
                if l == 0:
                    row.append(1)
                else:
                    v = value(abs(l))
                    row.append(1 if (v if l > 0 else not v) else -1)
            rows.append(tuple(row))
        return tuple(rows)

    def row_vars(self, r: int) -> tuple[int, ...]:
        return tuple(sorted({abs(l) for l in self.entry_lits[r] if l}))


def _matrix_layout(n: int, kind: str) -> tuple[MatrixLayout, list[VarRecord], list[int]]:
    roles = D.row_roles(kind)
    entry_lits: list[list[int]] = []
    records: list[VarRecord] = []
    domain: list[int] = []
    nxt = 1
    merges = {}
    if kind == "best":
        for eq in D.best_prefilter_clauses(n):
            merges[eq.index] = eq.equals_index
    for name, role in zip("ABCD", roles):
        lits = [0] * n
        free: dict[int, int] = {}
        if role == "s":
            for j in range(n):
                t = min(j, n - j)
                if name == "D" and t in merges:
                    t = merges[t]
                if t not in free:
                    free[t] = nxt
                    domain.append(nxt)
                    nxt += 1
                lits[j] = free[t]
                records.append(VarRecord(free[t], name, j, "true=+1"))
        else:
            if n % 2 == 0 and n > 1:
                raise EncodingError("skew rows need odd order")
            lits[0] = 0
            for j in range(1, n // 2 + 1):
                free[j] = nxt
                domain.append(nxt)
                lits[j] = nxt
                lits[n - j] = -nxt
                records.append(VarRecord(nxt, name, j, "true=+1"))
                records.append(VarRecord(nxt, name, n - j, "true=-1"))
                nxt += 1
        entry_lits.append(lits)
    return MatrixLayout(n, kind, entry_lits), records, domain


def _encode_matrix_family(n: int, kind: str, row_sums: bool = True) -> Encoding:
    layout, records, domain = _matrix_layout(n, kind)
    cs = ClauseSet(len(domain))
    cs.comments.append(f"{kind} matrices of order {n}")
    roles = D.row_roles(kind)
    if row_sums:
        tuples = admissible_sum_tuples(n, roles)
        if not tuples:
            cs.add([])
        else:
            counters = {}
            for r, role in enumerate(roles):
                if role == "s":
                    counters[r] = _totalizer(cs, list(layout.entry_lits[r]))
            eq_cache: dict[tuple[int, int], int] = {}

            def eq(r, w):
                if (r, w) not in eq_cache:
                    eq_cache[(r, w)] = _count_equals(cs, counters[r], w)
                return eq_cache[(r, w)]

            selectors = []
            for tup in tuples:
                q = cs.new_var()
                selectors.append(q)
                for r, s in enumerate(tup):
                    if roles[r] != "s":
                        continue
                    # row sum = 2W - n
                    ws = sorted({(n + s) // 2, (n - s) // 2})
                    cs.add([-q] + [eq(r, w) for w in ws])
            cs.add(selectors)
    groups = [(f"row {name}", layout.row_vars(r)) for r, name in enumerate("ABCD")]
    vm = VarMap(kind, {"n": n}, records, domain, groups)
    vm.layout = layout  # type: ignore[attr-defined]
    return Encoding(cs, vm)


def encode_williamson(n: int, row_sums: bool = True) -> Encoding:
    if n < 1:
        raise EncodingError("order must be positive")
    return _encode_matrix_family(n, "williamson", row_sums)


def encode_amicable(n: int, kind: str, row_sums: bool = True) -> Encoding:
    if kind not in ("good", "best"):
        raise EncodingError(f"unknown kind {kind!r}")
    if not D.admissible_order(kind, n):
        raise EncodingError(f"order {n} is not admissible for {kind} matrices")
    return _encode_matrix_family(n, kind, row_sums)


class _RowFilter:
    def __init__(self, layout: MatrixLayout, rows: Sequence[int], vars_: tuple[int, ...],
                 tol: Tolerances, exact: str | None = None):
        self.layout, self.rows, self.vars, self.tol, self.exact = layout, rows, vars_, tol, exact
        self.pos = {v: i for i, v in enumerate(vars_)}

    def __call__(self, values):
        pos = self.pos
        decoded = self.layout.decode(lambda v: values[pos[v]], self.rows)
        rows = [decoded[r] for r in self.rows]
        if self.exact is None:
            verdict = D.psd_filter(rows[0], self.tol) if len(rows) == 1 else D.psd_sum_filter(rows, self.tol)
            ok = verdict.passed
        elif self.exact == "williamson":
            ok = D.verify_williamson(decoded)
        else:
            ok = D.verify_amicable(D.AmicableCandidate(decoded, self.exact))
        if ok:
            return None
        return [-v if values[i] else v for i, v in enumerate(self.vars)]


def install_matrix(solver: Solver, enc: Encoding, cfg: SearchConfig) -> None:
    layout = enc.varmap.layout  # type: ignore[attr-defined]
    for c in enc.cnf.clauses:
        solver.add_clause(c)
    solver.new_vars(max(0, enc.cnf.nvars - solver.nvars))
    row_vars = [layout.row_vars(r) for r in range(4)]
    registered = set()

    def attach(rows, exact=None):
        vs = tuple(sorted(set().union(*(row_vars[r] for r in rows))))
        # constant rows give empty groups; groups equal to an earlier one add nothing
        if not vs or vs in registered:
            return
        registered.add(vs)
        solver.attach_filter(vs, _RowFilter(layout, rows, vs, cfg.tol, exact))

    # exact verification first so a coinciding PSD group is subsumed by it
    attach(range(4), exact=layout.kind)
    for r in range(4):
        attach((r,))
    if cfg.combined_psd:
        for k in (2, 3):
            for rows in itertools.combinations(range(4), k):
                attach(rows)


def decode_matrix(enc: Encoding, lits: Sequence[int]) -> tuple[D.Row, ...]:
    val = {abs(l): l > 0 for l in lits}
    return enc.varmap.layout.decode(lambda v: val[v])  # type: ignore[attr-defined]


# ---------------------------------------------------------------------------
# complex Golay pairs

def quaternary_bits(value: GaussInt) -> tuple[bool, bool]:
    """2-bit code: value = i**(b0 + 2*b1)."""
    k = UNITS.index(value)
    return bool(k & 1), bool(k >> 1)


def quaternary_value(b0: bool, b1: bool) -> GaussInt:
    return UNITS[int(b0) + 2 * int(b1)]


@dataclass
class GolayLayout:
    n: int
    name: str
    # bits[j] = (var for b0, var for b1)
    bits: list[tuple[int, int]]

    def decode(self, value: Callable[[int], bool], idx: Sequence[int] | None = None):
        idx = range(self.n) if idx is None else idx
        out = [None] * self.n
        for j in idx:
            a, b = self.bits[j]
            out[j] = quaternary_value(value(a), value(b))
        return out

    def vars_of(self, idx: Sequence[int]) -> tuple[int, ...]:
        return tuple(v for j in sorted(idx) for v in self.bits[j])


def encode_golay(n: int, f_fixed=None, tol: Tolerances | None = None) -> Encoding:
    if n < 1:
        raise EncodingError("length must be positive")
    name = "f" if f_fixed is None else "g"
    bits = [(2 * j + 1, 2 * j + 2) for j in range(n)]
    records = []
    for j, (a, b) in enumerate(bits):
        records.append(VarRecord(a, name, j, "bit0 of k in i**k"))
        records.append(VarRecord(b, name, j, "bit1 of k in i**k"))
    cs = ClauseSet(2 * n)
    layout = GolayLayout(n, name, bits)
    domain = [v for ab in bits for v in ab]
    params = {"n": n}
    if f_fixed is None:
        groups = [("f", tuple(domain))]
        cs.comments.append(f"complex Golay stage 1: f of length {n}")
    else:
        f = D.as_quaternary(f_fixed)
        if len(f) != n:
            raise EncodingError("fixed f has the wrong length")
        if not D.golay_norm_filter(f, tol=tol or Tolerances()).passed:
            raise EncodingError("fixed f fails the norm filter")
        params["f"] = D.quaternary_string(f)
        cs.comments.append(f"complex Golay stage 2: g of length {n} for f = {params['f']}")
        # g_0 = +1
        cs.add([-bits[0][0]])
        cs.add([-bits[0][1]])
        groups = []
        for k in range((n + 1) // 2):
            idx = set(range(k + 1)) | set(range(n - 1 - k, n))
            groups.append((f"g prefix/suffix {k}", layout.vars_of(idx)))
    vm = VarMap("golay", params, records, domain, groups)
    vm.layout = layout  # type: ignore[attr-defined]
    return Encoding(cs, vm)


class _NormFilter:
    def __init__(self, layout: GolayLayout, vars_, tol: Tolerances):
        self.layout, self.vars, self.tol = layout, vars_, tol
        self.pos = {v: i for i, v in enumerate(vars_)}

    def __call__(self, values):
        f = self.layout.decode(lambda v: values[self.pos[v]])
        if D.golay_norm_filter(f, tol=self.tol).passed:
            return None
        return [-v if values[i] else v for i, v in enumerate(self.vars)]


class _PairFilter:
    def __init__(self, layout: GolayLayout, nf, vars_, idx, full: bool, f):
        self.layout, self.nf, self.vars, self.idx, self.full, self.f = layout, nf, vars_, idx, full, f
        self.pos = {v: i for i, v in enumerate(vars_)}

    def __call__(self, values):
        g = self.layout.decode(lambda v: values[self.pos[v]], self.idx)
        verdict = D.golay_pair_filter(self.nf, g)
        if verdict.passed:
            if not self.full or D.golay_verify(D.ComplexGolayPair(self.f, g)):
                return None
            resp = range(self.layout.n)
        else:
            resp = verdict.witness.responsible
        return [-v if values[self.pos[v]] else v for v in self.layout.vars_of(resp)]


def install_golay(solver: Solver, enc: Encoding, cfg: SearchConfig) -> None:
    layout: GolayLayout = enc.varmap.layout  # type: ignore[attr-defined]
    n = layout.n
    solver.new_vars(max(0, enc.cnf.nvars - solver.nvars))
    for c in enc.cnf.clauses:
        solver.add_clause(c)
    if "f" not in enc.varmap.params:
        vs = tuple(enc.varmap.domain_vars)
        solver.attach_filter(vs, _NormFilter(layout, vs, cfg.tol))
        return
    f = D.parse_quaternary(enc.varmap.params["f"])
    nf = npaf_all(f)
    for k in range((n + 1) // 2):
        idx = sorted(set(range(k + 1)) | set(range(n - 1 - k, n)))
        full = len(idx) == n
        vs = layout.vars_of(idx)
        solver.attach_filter(vs, _PairFilter(layout, nf, vs, idx, full, f))


def decode_golay(enc: Encoding, lits: Sequence[int]) -> QuaternarySequence:
    val = {abs(l): l > 0 for l in lits}
    return QuaternarySequence(tuple(enc.varmap.layout.decode(lambda v: val[v])))  # type: ignore[attr-defined]


# ---------------------------------------------------------------------------
# hypercube families

def encode_matching(d: int, maximal: bool = True) -> Encoding:
    if not 2 <= d <= 6:
        raise EncodingError("dimension must be in [2, 6]")
    g = H.build_hypercube(d)
    m = len(g.edges)
    cs = ClauseSet(m)
    cs.comments.append(f"{'maximal ' if maximal else ''}matchings of Q_{d}")
    for v in range(g.nverts):
        for a, b in itertools.combinations(g.incident[v], 2):
            cs.add([-(a + 1), -(b + 1)])
    if maximal:
        for e in range(m):
            cs.add([e + 1] + [t + 1 for t in H.edges_touching(g, e)])
    records = [VarRecord(e + 1, "edge", e, "true=in matching") for e in range(m)]
    domain = list(range(1, m + 1))
    return Encoding(cs, VarMap("ruskey-savage", {"d": d}, records, domain, [("matching", tuple(domain))]))


def decode_matching(lits: Sequence[int]) -> list[int]:
    return sorted(l - 1 for l in lits if l > 0)


def norine_pairs(g: H.HypercubeGraph) -> list[tuple[int, int]]:
    out = []
    for e in range(len(g.edges)):
        o = g.opposite_edge(e)
        if e < o:
            out.append((e, o))
    return out


def encode_norine(d: int) -> Encoding:
    if not 2 <= d <= 6:
        raise EncodingError("dimension must be in [2, 6]")
    g = H.build_hypercube(d)
    pairs = norine_pairs(g)
    records = []
    for i, (e, o) in enumerate(pairs):
        records.append(VarRecord(i + 1, "edge", e, "true=red"))
        records.append(VarRecord(i + 1, "edge", o, "true=blue"))
    records.sort(key=lambda r: r.coordinate)
    cs = ClauseSet(len(pairs))
    cs.comments.append(f"antipodal 2-colourings of Q_{d}")
    domain = list(range(1, len(pairs) + 1))
    return Encoding(cs, VarMap("norine", {"d": d}, records, domain, [("colouring", tuple(domain))]))


def norine_edge_literals(d: int) -> list[int]:
    """Literal meaning "edge e is red" for every edge e."""
    g = H.build_hypercube(d)
    out = [0] * len(g.edges)
    for i, (e, o) in enumerate(norine_pairs(g)):
        out[e] = i + 1
        out[o] = -(i + 1)
    return out


def decode_colouring(d: int, lits: Sequence[int]) -> list[bool]:
    val = {abs(l): l > 0 for l in lits}
    return [val[abs(l)] == (l > 0) for l in norine_edge_literals(d)]


class _HamiltonFilter:
    """Rejects maximal matchings that extend to a Hamiltonian cycle.

    The conflict clause blocks every matching contained in the cycle; images
    of the cycle under hypercube automorphisms go in as extra lemmas.
    """

    def __init__(self, d: int, orbit_mode: str):
        self.g = H.build_hypercube(d)
        self.maps = H.automorphism_edge_maps(d, orbit_mode)
        self.seen: set[frozenset[int]] = set()
        self.checked = 0
        self.cycles = 0

    def clause_for(self, cyc_edges) -> list[int]:
        return [e + 1 for e in range(len(self.g.edges)) if e not in cyc_edges]

    def __call__(self, values):
        self.checked += 1
        m = [e for e, x in enumerate(values) if x]
        cyc = H.extend_to_hamiltonian(self.g, m)
        if cyc is None:
            return None
        if not H.is_hamiltonian_cycle(self.g, cyc, m):
            raise AssertionError("Hamiltonian extension failed independent check")
        self.cycles += 1
        ce = H.cycle_edges(self.g, cyc)
        conflict = self.clause_for(ce)
        lemmas = []
        for mp in self.maps:
            img = frozenset(mp[e] for e in ce)
            if img not in self.seen:
                self.seen.add(img)
                lemmas.append(self.clause_for(img))
        return Reject(conflict, lemmas)


class _NorineFilter:
    """Rejects colourings containing a monochromatic antipodal path."""

    def __init__(self, d: int, orbit_mode: str, colour_swap: bool):
        self.g = H.build_hypercube(d)
        self.d = d
        self.red = norine_edge_literals(d)
        self.maps = H.automorphism_edge_maps(d, orbit_mode)
        self.colour_swap = colour_swap
        self.seen: set[frozenset[int]] = set()
        self.checked = 0
        self.paths = 0

    def __call__(self, values):
        self.checked += 1
        col = [values[abs(l) - 1] == (l > 0) for l in self.red]
        path = H.monochromatic_antipodal_path(self.g, col)
        if path is None:
            return None
        if not H.is_monochromatic_antipodal_path(self.g, col, path):
            raise AssertionError("monochromatic path failed independent check")
        self.paths += 1
        colour = col[self.g.edge_id(path[0], path[1])]
        pe = [self.g.edge_id(a, b) for a, b in zip(path, path[1:])]

        def clause(edges, c):
            # at least one path edge takes the other colour
            return [-self.red[e] if c else self.red[e] for e in edges]

        conflict = clause(pe, colour)
        lemmas = []
        for mp in self.maps:
            img = [mp[e] for e in pe]
            for c in ((colour, not colour) if self.colour_swap else (colour,)):
                cl = clause(img, c)
                key = frozenset(cl)
                if key not in self.seen:
                    self.seen.add(key)
                    lemmas.append(cl)
        return Reject(conflict, lemmas)


def install_hypercube(solver: Solver, enc: Encoding, cfg: SearchConfig):
    solver.new_vars(max(0, enc.cnf.nvars - solver.nvars))
    for c in enc.cnf.clauses:
        solver.add_clause(c)
    if cfg.hypercube_blocking == "plain":
        return None
    d = enc.varmap.params["d"]
    if enc.varmap.family == "ruskey-savage":
        filt = _HamiltonFilter(d, cfg.orbit_mode)
    else:
        filt = _NorineFilter(d, cfg.orbit_mode, cfg.colour_swap)
    # a rejected object never recurs, so caching would only cost memory
    solver.attach_filter(tuple(enc.varmap.domain_vars), filt, cache=False)
    return filt


def export_cnf(enc: Encoding) -> tuple[str, str]:
    from .sat import dimacs_write
    return dimacs_write(enc.cnf), enc.varmap.to_json()
