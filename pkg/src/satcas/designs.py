"""Williamson, good, best and complex-Golay objects: filters, exact checks, canonical forms."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import Tolerances
from .seq_kernel import (
    GaussInt,
    QuaternarySequence,
    UNITS,
    argmax_angle,
    as_pm1,
    as_quaternary,
    npaf,
    npaf_all,
    paf_all,
    psd,
    unit_circle_max,
)

Row = tuple[int, ...]


class StructureError(ValueError):
    """A candidate violates its structural invariants."""


# ---------------------------------------------------------------------------
# row shapes

def is_symmetric_row(row: Sequence[int]) -> bool:
    n = len(row)
    return all(row[j] == row[n - j] for j in range(1, n))


def is_skew_row(row: Sequence[int]) -> bool:
    n = len(row)
    return row[0] == 1 and all(row[j] == -row[n - j] for j in range(1, n))


def decimate(row: Sequence[int], k: int) -> Row:
    n = len(row)
    return tuple(row[(k * j) % n] for j in range(n))


def reverse(row: Sequence[int]) -> Row:
    """First row of the transpose of the circulant with first row ``row``."""
    n = len(row)
    return tuple(row[(-j) % n] for j in range(n))


def negate(row: Sequence[int]) -> Row:
    return tuple(-a for a in row)


def units_mod(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if math.gcd(k, n) == 1] if n > 1 else [1]


def circulant(row: Sequence[int]) -> np.ndarray:
    n = len(row)
    r = np.asarray(row, dtype=np.int64)
    return np.stack([np.roll(r, i) for i in range(n)])


# ---------------------------------------------------------------------------
# candidates

@dataclass(frozen=True)
class WilliamsonCandidate:
    rows: tuple[Row, Row, Row, Row]

    def __post_init__(self):
        rows = tuple(tuple(as_pm1(r).entries) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != 4:
            raise StructureError("need four rows")
        if len({len(r) for r in rows}) != 1:
            raise StructureError("rows have different lengths")
        for r in rows:
            if not is_symmetric_row(r):
                raise StructureError(f"row {r} is not symmetric")

    @property
    def n(self) -> int:
        return len(self.rows[0])


@dataclass(frozen=True)
class AmicableCandidate:
    rows: tuple[Row, Row, Row, Row]
    kind: str = "good"

    def __post_init__(self):
        if self.kind not in ("good", "best"):
            raise StructureError(f"unknown kind {self.kind!r}")
        rows = tuple(tuple(as_pm1(r).entries) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != 4:
            raise StructureError("need four rows")
        if len({len(r) for r in rows}) != 1:
            raise StructureError("rows have different lengths")
        for name, r in zip("ABCD", rows):
            want_skew = name == "A" or (self.kind == "best" and name in "BC")
            ok = is_skew_row(r) if want_skew else is_symmetric_row(r)
            if not ok:
                raise StructureError(f"row {name}={r} has the wrong shape for {self.kind}")

    @property
    def n(self) -> int:
        return len(self.rows[0])


def row_roles(kind: str) -> str:
    """'k' for skew rows, 's' for symmetric rows, in A, B, C, D order."""
    return {"williamson": "ssss", "good": "ksss", "best": "kkks"}[kind]


@dataclass(frozen=True)
class ComplexGolayPair:
    f: QuaternarySequence
    g: QuaternarySequence

    def __post_init__(self):
        object.__setattr__(self, "f", as_quaternary(self.f))
        object.__setattr__(self, "g", as_quaternary(self.g))
        if len(self.f) != len(self.g):
            raise StructureError("f and g must have the same length")


@dataclass(frozen=True)
class Witness:
    criterion: str
    index: int | None
    value: float | None
    responsible: tuple[int, ...] = ()


@dataclass(frozen=True)
class FilterVerdict:
    passed: bool
    witness: Witness | None = None

    def __post_init__(self):
        if self.passed != (self.witness is None):
            raise ValueError("witness must be present exactly when the filter fails")

    def __bool__(self) -> bool:
        return self.passed


PASS = FilterVerdict(True)


# ---------------------------------------------------------------------------
# exact verification

def _paf_sum_zero(rows: Sequence[Row]) -> bool:
    n = len(rows[0])
    tables = [paf_all(r) for r in rows]
    return all(sum(t[s] for t in tables) == 0 for s in range(1, n))


def verify_williamson(c: WilliamsonCandidate | Sequence[Row]) -> bool:
    """Exact check that A^2 + B^2 + C^2 + D^2 = 4nI via autocorrelations."""
    if not isinstance(c, WilliamsonCandidate):
        c = WilliamsonCandidate(tuple(c))
    return _paf_sum_zero(c.rows)


def verify_williamson_matrix(c: WilliamsonCandidate) -> bool:
    """Same check as :func:`verify_williamson`, by explicit integer matrix products."""
    n = c.n
    total = sum(circulant(r) @ circulant(r) for r in c.rows)
    return bool(np.array_equal(total, 4 * n * np.eye(n, dtype=np.int64)))


def verify_amicable(c: AmicableCandidate | Sequence[Row], kind: str | None = None) -> bool:
    if not isinstance(c, AmicableCandidate):
        c = AmicableCandidate(tuple(c), kind or "good")
    if not admissible_order(c.kind, c.n):
        raise StructureError(f"order {c.n} is not admissible for {c.kind} matrices")
    return _paf_sum_zero(c.rows)


def verify_amicable_matrix(c: AmicableCandidate) -> bool:
    n = c.n
    total = sum(circulant(r) @ circulant(r).T for r in c.rows)
    return bool(np.array_equal(total, 4 * n * np.eye(n, dtype=np.int64)))


def admissible_order(kind: str, n: int) -> bool:
    if n < 1:
        raise ValueError("order must be positive")
    if kind == "williamson":
        return True
    if kind == "good":
        return n % 2 == 1
    if kind == "best":
        r = 0
        while r * r + r + 1 < n:
            r += 1
        return r * r + r + 1 == n
    raise ValueError(f"unknown kind {kind!r}")


@dataclass(frozen=True)
class RowEquality:
    row: str
    index: int
    equals_index: int


def best_prefilter_clauses(n: int) -> list[RowEquality]:
    """Entry equalities known to hold in the symmetric row D of best matrices."""
    if not admissible_order("best", n):
        raise ValueError(f"{n} is not a best-matrix order")
    if n % 3:
        return []
    # d_{2n/3} = d_0 follows from this one by the symmetry d_j = d_{n-j}
    return [RowEquality("D", n // 3, 0)]


# ---------------------------------------------------------------------------
# filters

def psd_filter(row: Sequence[int], tol: float | Tolerances = 1e-6,
               responsible: Sequence[int] | None = None) -> FilterVerdict:
    """PSD_row(k) <= 4n for every k, with one-sided slack ``tol * 4n``.

    Valid for any row of a Williamson, good or best quadruple, since the four
    spectra sum to 4n pointwise.
    """
    rel = tol.rel if isinstance(tol, Tolerances) else tol
    a = as_pm1(row).entries
    n = len(a)
    limit = 4 * n * (1 + rel)
    vals = np.abs(np.fft.fft(np.asarray(a, dtype=float))) ** 2
    bad = np.nonzero(vals > limit)[0]
    if len(bad) == 0:
        return PASS
    k = int(bad[0])
    resp = tuple(responsible) if responsible is not None else tuple(range(n))
    return FilterVerdict(False, Witness("psd", k, float(psd(a, k)), resp))


def psd_sum_filter(rows: Sequence[Sequence[int]], tol: float | Tolerances = 1e-6) -> FilterVerdict:
    """Sum of the rows' spectra stays under 4n at every frequency."""
    rel = tol.rel if isinstance(tol, Tolerances) else tol
    n = len(rows[0])
    spec = (np.abs(np.fft.fft(np.asarray(rows, dtype=float), axis=-1)) ** 2).sum(axis=0)
    bad = np.nonzero(spec > 4 * n * (1 + rel))[0]
    if len(bad) == 0:
        return PASS
    k = int(bad[0])
    return FilterVerdict(False, Witness("psd-sum", k, float(spec[k]), tuple(range(len(rows) * n))))


def golay_verify(p: ComplexGolayPair | tuple) -> bool:
    if not isinstance(p, ComplexGolayPair):
        p = ComplexGolayPair(*p)
    n = len(p.f)
    for s in range(1, n):
        a, b = npaf(p.f, s), npaf(p.g, s)
        if a.re + b.re or a.im + b.im:
            return False
    return True


def golay_norm_filter(f, samples: int | None = None,
                      tol: float | Tolerances = 1e-6) -> FilterVerdict:
    """max |f(z)|^2 <= 2n on the unit circle (certified upper bound)."""
    tols = tol if isinstance(tol, Tolerances) else Tolerances(rel=tol)
    q = as_quaternary(f)
    n = len(q)
    if samples is None:
        samples = max(4 * n, tols.samples_per_term * n)
    bound = unit_circle_max(q, samples)
    if bound <= tols.bound(2 * n):
        return PASS
    # the certified bound exceeds 2n; fall back on the exact sample values so a
    # loose Lipschitz margin never rejects a legitimate f
    dense = max(samples, 64 * n)
    while True:
        up = unit_circle_max(q, dense)
        if up <= tols.bound(2 * n):
            return PASS
        theta = argmax_angle(q, dense)
        z = complex(math.cos(theta), math.sin(theta))
        val = abs(sum(complex(a) * z ** j for j, a in enumerate(q.entries))) ** 2
        if val > tols.bound(2 * n):
            return FilterVerdict(False, Witness("norm", None, theta, tuple(range(n))))
        if dense >= 1024 * n:
            # undecided: accept, exact verification settles it later
            return PASS
        dense *= 4


def golay_pair_filter(nf: Sequence[GaussInt], g_partial: Sequence[GaussInt | None]) -> FilterVerdict:
    """Check N_g(s) = -N_f(s) for every shift already determined by g's assigned entries."""
    n = len(g_partial)
    g = [None if x is None else (x if isinstance(x, GaussInt) else as_quaternary([x])[0])
         for x in g_partial]
    for s in range(1, n):
        idx = set(range(0, n - s)) | set(range(s, n))
        if any(g[j] is None for j in idx):
            continue
        re = im = 0
        for j in range(n - s):
            x, y = g[j], g[j + s]
            re += x.re * y.re + x.im * y.im
            im += x.im * y.re - x.re * y.im
        if re != -nf[s].re or im != -nf[s].im:
            return FilterVerdict(False, Witness("npaf", s, float(re), tuple(sorted(idx))))
    return PASS


def golay_determined_shifts(n: int, k: int) -> list[int]:
    """Shifts s whose N_g(s) depends only on g_0..g_k and g_{n-1-k}..g_{n-1}."""
    return [s for s in range(1, n) if s >= n - 1 - k]


# ---------------------------------------------------------------------------
# equivalence

def _rk(row: Row) -> tuple[int, ...]:
    # orbit order: +1 sorts before -1, so all-ones rows are their own representatives
    return tuple(-x for x in row)


def _least(*rows: Row) -> Row:
    return min(rows, key=_rk)


def canonical_williamson(c: WilliamsonCandidate | Sequence[Row]) -> WilliamsonCandidate:
    """Least element of the orbit under row permutation, row negation and decimation."""
    if not isinstance(c, WilliamsonCandidate):
        c = WilliamsonCandidate(tuple(c))
    best = None
    for k in units_mod(c.n):
        rows = tuple(sorted((_least(r, negate(r)) for r in (decimate(x, k) for x in c.rows)), key=_rk))
        if best is None or tuple(map(_rk, rows)) < tuple(map(_rk, best)):
            best = rows
    return WilliamsonCandidate(best)


def _amicable_key(rows: Sequence[Row], kind: str) -> tuple:
    roles = row_roles(kind)
    skew = sorted((_least(r, reverse(r)) for r, t in zip(rows, roles) if t == "k"), key=_rk)
    sym = sorted((_least(r, negate(r)) for r, t in zip(rows, roles) if t == "s"), key=_rk)
    if kind == "good":
        return (skew[0], *sym)
    return (*skew, sym[0])


def canonical_amicable(c: AmicableCandidate) -> AmicableCandidate:
    """Least orbit element under decimation, reversal of skew rows, negation of
    symmetric rows, and permutation of rows sharing a role."""
    best = None
    for k in units_mod(c.n):
        key = _amicable_key([decimate(r, k) for r in c.rows], c.kind)
        if best is None or tuple(map(_rk, key)) < tuple(map(_rk, best)):
            best = key
    return AmicableCandidate(best, c.kind)


def williamson_orbit(c: WilliamsonCandidate) -> set[tuple[Row, ...]]:
    out = set()
    for k in units_mod(c.n):
        dec = [decimate(r, k) for r in c.rows]
        choices = [(r, negate(r)) for r in dec]
        for signed in itertools.product(*choices):
            out.update(itertools.permutations(signed))
    return out


def amicable_orbit(c: AmicableCandidate) -> set[tuple[Row, ...]]:
    roles = row_roles(c.kind)
    out = set()
    for k in units_mod(c.n):
        dec = [decimate(r, k) for r in c.rows]
        choices = [(r, reverse(r)) if t == "k" else (r, negate(r)) for r, t in zip(dec, roles)]
        for picked in itertools.product(*choices):
            skew_pos = [i for i, t in enumerate(roles) if t == "k"]
            sym_pos = [i for i, t in enumerate(roles) if t == "s"]
            for ps in itertools.permutations([picked[i] for i in skew_pos]):
                for qs in itertools.permutations([picked[i] for i in sym_pos]):
                    rows = [None] * 4
                    for i, r in zip(skew_pos, ps):
                        rows[i] = r
                    for i, r in zip(sym_pos, qs):
                        rows[i] = r
                    out.add(tuple(rows))
    return out


def first_row_class(row: Row, kind: str) -> Row:
    """Canonical representative of a first row under the transformations that
    keep it in first position (decimation plus negation or reversal)."""
    role = row_roles(kind)[0]
    flip = negate if role == "s" else reverse
    return _least(*(_least(decimate(row, k), flip(decimate(row, k))) for k in units_mod(len(row))))


# complex Golay pairs: the group generated by swapping f and g, unit multiples
# of either, reversal-with-conjugation of either, conjugating both, and the
# positional twist a_j -> a_j * i^j applied to both

def _conj(seq):
    return tuple(x.conj() for x in seq)


def _revconj(seq):
    return tuple(x.conj() for x in reversed(seq))


def _scale(seq, u):
    return tuple(x * u for x in seq)


def _twist(seq, t):
    return tuple(x * UNITS[(t * j) % 4] for j, x in enumerate(seq))


def golay_orbit(p: ComplexGolayPair) -> set[tuple[tuple[GaussInt, ...], tuple[GaussInt, ...]]]:
    f, g = p.f.entries, p.g.entries
    out = set()
    for t in range(4):
        for cj in (False, True):
            f1, g1 = _twist(f, t), _twist(g, t)
            if cj:
                f1, g1 = _conj(f1), _conj(g1)
            for rf in (False, True):
                f2 = _revconj(f1) if rf else f1
                for rg in (False, True):
                    g2 = _revconj(g1) if rg else g1
                    for u in UNITS:
                        f3 = _scale(f2, u)
                        for v in UNITS:
                            g3 = _scale(g2, v)
                            out.add((f3, g3))
                            out.add((g3, f3))
    return out


def canonical_golay(p: ComplexGolayPair) -> tuple:
    return min(golay_orbit(p))


QUATERNARY_SYMBOLS = {(1, 0): "+", (-1, 0): "-", (0, 1): "i", (0, -1): "j"}


def quaternary_string(seq) -> str:
    return "".join(QUATERNARY_SYMBOLS[tuple(x)] for x in as_quaternary(seq))


def parse_quaternary(text: str) -> QuaternarySequence:
    rev = {v: GaussInt(*k) for k, v in QUATERNARY_SYMBOLS.items()}
    return QuaternarySequence(tuple(rev[ch] for ch in text))
