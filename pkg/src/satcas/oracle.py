"""Exhaustive reference searches that use only the exact verifiers.

No SAT solving and no floating-point filters: every candidate of the family's
structural shape is generated and checked with exact integer arithmetic.
Batched integer autocorrelation sums select candidates, and each survivor is
confirmed by the scalar verifier before it is reported.
"""
from __future__ import annotations

import itertools
from typing import Iterator

import numpy as np

from . import designs as D
from . import hypercube as H
from .seq_kernel import UNITS, GaussInt, npaf_all, paf_all

ORACLE_LIMITS = {"williamson": 9, "good": 9, "best": 9, "golay": 6, "ruskey-savage": 4, "norine": 3}


class OracleSizeError(ValueError):
    pass


def symmetric_rows(n: int) -> list[D.Row]:
    h = n // 2
    return [tuple(bits[min(j, n - j)] for j in range(n)) for bits in itertools.product((-1, 1), repeat=h + 1)]


def skew_rows(n: int) -> list[D.Row]:
    h = n // 2
    out = []
    for bits in itertools.product((-1, 1), repeat=h):
        row = [1] * n
        for j in range(1, h + 1):
            row[j] = bits[j - 1]
            row[n - j] = -bits[j - 1]
        out.append(tuple(row))
    return out


def _matrix_solutions(n: int, roles: str) -> list[tuple[D.Row, ...]]:
    pools = [skew_rows(n) if t == "k" else symmetric_rows(n) for t in roles]
    tables = [np.array([paf_all(r)[1:] for r in pool], dtype=np.int64).reshape(len(pool), n - 1)
              for pool in pools]
    out = []
    # batch over the last two rows, loop over the first two
    cd = (tables[2][:, None, :] + tables[3][None, :, :]).reshape(len(pools[2]) * len(pools[3]), n - 1)
    for ia, ib in itertools.product(range(len(pools[0])), range(len(pools[1]))):
        ab = tables[0][ia] + tables[1][ib]
        hits = np.nonzero(~(cd + ab).any(axis=1))[0]
        for h in hits:
            ic, id_ = divmod(int(h), len(pools[3]))
            out.append((pools[0][ia], pools[1][ib], pools[2][ic], pools[3][id_]))
    return out


def williamson_solutions(n: int) -> set[tuple[D.Row, ...]]:
    _check("williamson", n)
    sols = _matrix_solutions(n, "ssss")
    confirmed = {s for s in sols if D.verify_williamson(D.WilliamsonCandidate(s))}
    if len(confirmed) != len(set(sols)):
        raise AssertionError("batched check disagrees with verify_williamson")
    return confirmed


def amicable_solutions(n: int, kind: str) -> set[tuple[D.Row, ...]]:
    _check(kind, n)
    if not D.admissible_order(kind, n):
        return set()
    sols = _matrix_solutions(n, D.row_roles(kind))
    confirmed = {s for s in sols if D.verify_amicable(D.AmicableCandidate(s, kind))}
    if len(confirmed) != len(set(sols)):
        raise AssertionError("batched check disagrees with verify_amicable")
    return confirmed


def quaternary_sequences(n: int, first_one: bool = False) -> Iterator[tuple[GaussInt, ...]]:
    head = [(UNITS[0],)] if first_one else [(u,) for u in UNITS]
    for h in head:
        for rest in itertools.product(UNITS, repeat=n - 1):
            yield h + rest


def golay_solutions(n: int) -> set[tuple[tuple[GaussInt, ...], tuple[GaussInt, ...]]]:
    """All complex Golay pairs (f, g) of length n with g_0 = 1."""
    _check("golay", n)
    fs = list(quaternary_sequences(n))
    gs = list(quaternary_sequences(n, first_one=True))

    def table(seqs):
        t = np.array([[c for v in npaf_all(s)[1:] for c in v] for s in seqs], dtype=np.int64)
        return t.reshape(len(seqs), 2 * (n - 1))

    tf, tg = table(fs), table(gs)
    out = set()
    for i, row in enumerate(tf):
        for j in np.nonzero(~(tg + row).any(axis=1))[0]:
            pair = (fs[i], gs[int(j)])
            if not D.golay_verify(D.ComplexGolayPair(*pair)):
                raise AssertionError("batched check disagrees with golay_verify")
            out.add(pair)
    return out


def all_matchings(g: H.HypercubeGraph) -> Iterator[frozenset[int]]:
    """Every matching, by include/exclude recursion over edges."""
    m = len(g.edges)
    used = [False] * g.nverts
    cur: list[int] = []

    def rec(e):
        if e == m:
            yield frozenset(cur)
            return
        yield from rec(e + 1)
        u, v = g.edges[e]
        if not used[u] and not used[v]:
            used[u] = used[v] = True
            cur.append(e)
            yield from rec(e + 1)
            cur.pop()
            used[u] = used[v] = False

    yield from rec(0)


def maximal_matchings(d: int) -> list[frozenset[int]]:
    g = H.build_hypercube(d)
    if d <= 3:
        out = []
        for mask in range(1 << len(g.edges)):
            m = [e for e in range(len(g.edges)) if mask >> e & 1]
            if H.is_matching(g, m) and H.is_maximal_matching(g, m):
                out.append(frozenset(m))
        return out
    return [m for m in all_matchings(g) if H.is_maximal_matching(g, m)]


def ruskey_savage(d: int) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    """(maximal matchings, those with no Hamiltonian extension)."""
    _check("ruskey-savage", d)
    g = H.build_hypercube(d)
    ms = maximal_matchings(d)
    bad = []
    for m in ms:
        cyc = H.extend_to_hamiltonian(g, m)
        if cyc is None or not H.is_hamiltonian_cycle(g, cyc, m):
            bad.append(m)
    return ms, bad


def antipodal_colourings(d: int) -> list[tuple[bool, ...]]:
    g = H.build_hypercube(d)
    out = []
    for bits in itertools.product((False, True), repeat=len(g.edges)):
        if H.valid_antipodal_colouring(g, bits):
            out.append(bits)
    return out


def norine(d: int) -> tuple[list[tuple[bool, ...]], list[tuple[bool, ...]]]:
    """(valid colourings, those with no monochromatic antipodal path)."""
    _check("norine", d)
    g = H.build_hypercube(d)
    cols = antipodal_colourings(d)
    bad = [c for c in cols if H.monochromatic_antipodal_path(g, c) is None]
    return cols, bad


def _check(family: str, size: int) -> None:
    if size > ORACLE_LIMITS[family] or size < 1:
        raise OracleSizeError(f"{family} size {size} outside the oracle bound {ORACLE_LIMITS[family]}")
