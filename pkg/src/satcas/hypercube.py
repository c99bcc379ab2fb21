"""Hypercube graphs: matchings, Hamiltonian extension, antipodal colourings, automorphisms."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence


class ParameterError(ValueError):
    pass


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class HypercubeGraph:
    d: int
    # edge index -> (u, v) with u < v and v = u | (1 << bit)
    edges: tuple[tuple[int, int], ...]
    edge_bits: tuple[int, ...]
    index: dict = field(compare=False, hash=False, repr=False)
    incident: tuple[tuple[int, ...], ...] = field(compare=False, hash=False, repr=False)

    @property
    def nverts(self) -> int:
        return 1 << self.d

    @property
    def mask(self) -> int:
        return (1 << self.d) - 1

    def edge_id(self, u: int, v: int) -> int:
        return self.index[(u, v) if u < v else (v, u)]

    def neighbours(self, v: int) -> list[int]:
        return [v ^ (1 << b) for b in range(self.d)]

    def opposite_edge(self, e: int) -> int:
        u, v = self.edges[e]
        return self.edge_id(u ^ self.mask, v ^ self.mask)


@lru_cache(maxsize=None)
def build_hypercube(d: int) -> HypercubeGraph:
    if not 1 <= d <= 16:
        raise ParameterError(f"dimension {d} outside [1, 16]")
    edges, bits = [], []
    for u in range(1 << d):
        for b in range(d):
            if not u >> b & 1:
                edges.append((u, u | 1 << b))
                bits.append(b)
    index = {e: i for i, e in enumerate(edges)}
    inc = [[] for _ in range(1 << d)]
    for i, (u, v) in enumerate(edges):
        inc[u].append(i)
        inc[v].append(i)
    return HypercubeGraph(d, tuple(edges), tuple(bits), index, tuple(tuple(x) for x in inc))


# ---------------------------------------------------------------------------
# matchings

def is_matching(g: HypercubeGraph, m: Iterable[int]) -> bool:
    used = set()
    for e in m:
        u, v = g.edges[e]
        if u in used or v in used:
            return False
        used.update((u, v))
    return True


def is_maximal_matching(g: HypercubeGraph, m: Iterable[int]) -> bool:
    m = set(m)
    if not is_matching(g, m):
        raise StructureError("edge set is not a matching")
    covered = {x for e in m for x in g.edges[e]}
    return all(u in covered or v in covered for u, v in g.edges)


def edges_touching(g: HypercubeGraph, e: int) -> list[int]:
    u, v = g.edges[e]
    return sorted((set(g.incident[u]) | set(g.incident[v])) - {e})


# ---------------------------------------------------------------------------
# Hamiltonian cycles

def is_hamiltonian_cycle(g: HypercubeGraph, cycle: Sequence[int], contains: Iterable[int] = ()) -> bool:
    """Independent structural check of a closed vertex walk."""
    n = g.nverts
    if len(cycle) != n + 1 or cycle[0] != cycle[-1]:
        return False
    if len(set(cycle[:-1])) != n:
        return False
    used = set()
    for a, b in zip(cycle, cycle[1:]):
        x = a ^ b
        if x == 0 or x & (x - 1) or not 0 <= a < n or not 0 <= b < n:
            return False
        used.add(g.edge_id(a, b))
    return set(contains) <= used


def cycle_edges(g: HypercubeGraph, cycle: Sequence[int]) -> set[int]:
    return {g.edge_id(a, b) for a, b in zip(cycle, cycle[1:])}


def extend_to_hamiltonian(g: HypercubeGraph, m: Iterable[int]) -> list[int] | None:
    """A Hamiltonian cycle through every edge of matching ``m``, or None.

    Depth-first path growth from vertex 0 with the matching edges forced,
    pruned by vertex degree and by connectivity of the unvisited vertices.
    """
    m = set(m)
    if not is_matching(g, m):
        raise StructureError("edge set is not a matching")
    n = g.nverts
    if n == 2:
        return [0, 1, 0]
    partner = [-1] * n
    for e in m:
        u, v = g.edges[e]
        partner[u], partner[v] = v, u
    nbrs = [g.neighbours(v) for v in range(n)]
    start = 0
    visited = [False] * n
    visited[start] = True
    path = [start]
    # if the start vertex has a forced edge, traverse it first; it then closes
    # the cycle from the other side through a free edge
    if partner[start] >= 0:
        path.append(partner[start])
        visited[partner[start]] = True

    def feasible(cur: int) -> bool:
        # every unvisited vertex needs two usable neighbours; a vertex with a
        # forced edge to a visited non-endpoint vertex is dead
        remaining = n - len(path)
        if remaining == 0:
            return True
        for v in range(n):
            if visited[v]:
                continue
            p = partner[v]
            if p >= 0 and visited[p] and p != cur and not (p == start and partner[start] != v):
                return False
            free = 0
            for w in nbrs[v]:
                if not visited[w] or w == cur or w == start:
                    free += 1
            if free < 2:
                return False
        # unvisited vertices must be reachable from cur without visited ones
        seen = {cur}
        dq = deque([cur])
        cnt = 0
        while dq:
            x = dq.popleft()
            for w in nbrs[x]:
                if not visited[w] and w not in seen:
                    seen.add(w)
                    cnt += 1
                    dq.append(w)
        return cnt == remaining

    def dfs() -> bool:
        cur = path[-1]
        if len(path) == n:
            last_ok = (cur ^ start) and not ((cur ^ start) & ((cur ^ start) - 1))
            if not last_ok:
                return False
            # the closing edge must not leave a forced edge unused
            if partner[cur] >= 0 and partner[cur] != path[-2] and partner[cur] != start:
                return False
            if partner[start] >= 0 and partner[start] != path[1] and partner[start] != cur:
                return False
            return True
        p = partner[cur]
        came_from = path[-2] if len(path) > 1 else -1
        if p >= 0 and p != came_from:
            if visited[p]:
                return False
            cands = [p]
        else:
            cands = [w for w in nbrs[cur] if not visited[w]]
        for w in cands:
            visited[w] = True
            path.append(w)
            if feasible(w) and dfs():
                return True
            path.pop()
            visited[w] = False
        return False

    if not feasible(path[-1]):
        return None
    if dfs():
        return path + [start]
    return None


# ---------------------------------------------------------------------------
# antipodal colourings

def valid_antipodal_colouring(g: HypercubeGraph, colouring: Sequence[int | bool]) -> bool:
    if len(colouring) != len(g.edges) or any(c is None for c in colouring):
        raise StructureError("colouring must assign every edge")
    # at d=1 the only edge is its own opposite and carries no constraint
    return all(bool(colouring[e]) != bool(colouring[o])
               for e in range(len(g.edges)) if (o := g.opposite_edge(e)) != e)


def is_monochromatic_antipodal_path(g: HypercubeGraph, colouring, path: Sequence[int]) -> bool:
    if len(path) < 2 or path[-1] != path[0] ^ g.mask:
        return False
    if len(set(path)) != len(path):
        return False
    cols = set()
    for a, b in zip(path, path[1:]):
        x = a ^ b
        if x == 0 or x & (x - 1):
            return False
        cols.add(bool(colouring[g.edge_id(a, b)]))
    return len(cols) == 1


def monochromatic_antipodal_path(g: HypercubeGraph, colouring) -> list[int] | None:
    """Shortest single-colour path joining some vertex to its antipode, or None."""
    if not valid_antipodal_colouring(g, colouring):
        raise StructureError("not an antipodal colouring")
    n, mask = g.nverts, g.mask
    best = None
    for colour in (True, False):
        adj = [[] for _ in range(n)]
        for e, (u, v) in enumerate(g.edges):
            if bool(colouring[e]) == colour:
                adj[u].append(v)
                adj[v].append(u)
        comp = [-1] * n
        for s in range(n):
            if comp[s] >= 0:
                continue
            comp[s] = s
            dq = deque([s])
            while dq:
                x = dq.popleft()
                for w in adj[x]:
                    if comp[w] < 0:
                        comp[w] = s
                        dq.append(w)
        for s in range(n):
            if comp[s] != comp[s ^ mask]:
                continue
            prev = {s: -1}
            dq = deque([s])
            while dq:
                x = dq.popleft()
                if x == s ^ mask:
                    break
                for w in adj[x]:
                    if w not in prev:
                        prev[w] = x
                        dq.append(w)
            p = [s ^ mask]
            while prev[p[-1]] != -1:
                p.append(prev[p[-1]])
            p.reverse()
            if best is None or len(p) < len(best):
                best = p
                if len(best) == g.d + 1:
                    return best
    return best


# ---------------------------------------------------------------------------
# automorphisms: x -> pi(x) XOR c

def _vertex_map(d: int, perm: Sequence[int], flip: int) -> list[int]:
    out = []
    for x in range(1 << d):
        y = 0
        for i in range(d):
            if x >> i & 1:
                y |= 1 << perm[i]
        out.append(y ^ flip)
    return out


@lru_cache(maxsize=None)
def automorphism_edge_maps(d: int, mode: str = "full") -> tuple[tuple[int, ...], ...]:
    """Edge permutations induced by hypercube automorphisms.

    ``full`` enumerates all 2^d * d! elements; ``generators`` returns the d
    coordinate flips, d-1 adjacent transpositions and one d-cycle.
    """
    g = build_hypercube(d)
    if mode == "full":
        if d > 6:
            raise ParameterError("full automorphism group only supported for d <= 6")
        elems = [(p, c) for p in itertools.permutations(range(d)) for c in range(1 << d)]
    elif mode == "generators":
        ident = list(range(d))
        elems = [(tuple(ident), 1 << i) for i in range(d)]
        for i in range(d - 1):
            p = ident[:]
            p[i], p[i + 1] = p[i + 1], p[i]
            elems.append((tuple(p), 0))
        elems.append((tuple(ident[1:] + ident[:1]), 0))
    elif mode == "none":
        elems = [(tuple(range(d)), 0)]
    else:
        raise ParameterError(f"unknown orbit mode {mode!r}")
    maps = []
    for perm, flip in elems:
        vm = _vertex_map(d, perm, flip)
        maps.append(tuple(g.edge_id(vm[u], vm[v]) for u, v in g.edges))
    return tuple(maps)


def automorphism_images(d: int, edge_set: Iterable[int], mode: str = "full") -> set[frozenset[int]]:
    es = list(edge_set)
    return {frozenset(m[e] for e in es) for m in automorphism_edge_maps(d, mode)}


def map_path(g: HypercubeGraph, path: Sequence[int], perm: Sequence[int], flip: int) -> list[int]:
    vm = _vertex_map(g.d, perm, flip)
    return [vm[x] for x in path]
