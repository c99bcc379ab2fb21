"""Conflict-driven clause-learning SAT solver with theory callbacks.

Literals are DIMACS-style nonzero ints on the public surface.  Internally a
literal on variable ``v`` is ``2*v`` (positive) or ``2*v + 1`` (negative), so
negation is ``x ^ 1`` and value lookups index a flat list.

Callbacks are attached to variable groups.  A group's callback fires once every
variable of the group is assigned (after unit propagation reaches a fixpoint),
and again on every total assignment before a model is returned.  A callback
answers ``None`` to accept, or a clause falsified by the current assignment to
reject; the clause is added permanently and the solver backjumps.
"""
from __future__ import annotations

import heapq
import json
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

SAT = "SAT"
UNSAT = "UNSAT"


class SolverTimeout(Exception):
    pass


class CallbackContractError(RuntimeError):
    """A callback returned a clause that the current assignment does not falsify."""


@dataclass
class Reject:
    """Callback answer: a conflict clause plus optional extra permanent lemmas."""
    clause: Sequence[int]
    lemmas: Sequence[Sequence[int]] = ()


Callback = Callable[[tuple[bool, ...]], "Sequence[int] | Reject | None"]


@dataclass
class Stats:
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    restarts: int = 0
    learned: int = 0
    deleted: int = 0
    callback_calls: int = 0
    callback_rejections: int = 0
    solves: int = 0

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def merge(self, other: "Stats") -> None:
        for k, v in asdict(other).items():
            setattr(self, k, getattr(self, k) + v)


def luby(i: int) -> int:
    """i-th element (0-based) of the Luby sequence 1,1,2,1,1,2,4,..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


def _ilit(lit: int) -> int:
    return 2 * lit if lit > 0 else -2 * lit + 1


def _elit(x: int) -> int:
    return x >> 1 if not x & 1 else -(x >> 1)


@dataclass
class _Group:
    vars: tuple[int, ...]
    callback: Callback
    cache: dict | None = field(default_factory=dict)


class Solver:
    def __init__(self, nvars: int = 0, seed: int = 0, restart_unit: int = 128,
                 max_learnts: int | None = None, cache_callbacks: bool = True):
        self.nvars = 0
        self.val: list[int] = [0, 0]        # by internal literal
        self.level: list[int] = [0]
        self.reason: list[list[int] | None] = [None]
        self.activity: list[float] = [0.0]
        self.phase: list[int] = [0]          # saved polarity: 0 false, 1 true
        self.watches: list[list[list[int]]] = [[], []]
        self.var_groups: list[list[int]] = [[]]
        self.clauses: list[list[int]] = []
        self.learnts: list[list[int]] = []
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.heap: list[tuple[float, int]] = []
        self.var_inc = 1.0
        self.var_decay = 0.95
        self.ok = True
        self.stats = Stats()
        self.restart_unit = restart_unit
        self.max_learnts = max_learnts
        self.cache_callbacks = cache_callbacks
        self.groups: list[_Group] = []
        self.group_left: list[int] = []
        self.pending: list[int] = []
        self._group_keys: set[tuple[int, ...]] = set()
        self.rng = random.Random(seed)
        self.seed = seed
        self.model: list[bool] | None = None
        self.deadline: float | None = None
        self.new_vars(nvars)

    # -- construction -----------------------------------------------------

    def new_vars(self, count: int) -> None:
        for _ in range(count):
            self.nvars += 1
            v = self.nvars
            self.val.extend((0, 0))
            self.watches.extend(([], []))
            self.level.append(0)
            self.reason.append(None)
            # seed 0 keeps pure variable-id order among equal activities
            act = 0.0 if self.seed == 0 else self.rng.random() * 1e-5
            self.activity.append(act)
            self.phase.append(0)
            self.var_groups.append([])
            heapq.heappush(self.heap, (-act, v))

    def _ensure_var(self, v: int) -> None:
        if v > self.nvars:
            self.new_vars(v - self.nvars)

    def add_clause(self, lits: Iterable[int], learnt: bool = False) -> bool:
        """Add a permanent clause (between solves or from level 0)."""
        lits = list(lits)
        for l in lits:
            if l == 0:
                raise ValueError("literal 0 is not allowed")
            self._ensure_var(abs(l))
        if self.trail_lim:
            self._cancel_until(0)
        if not self.ok:
            return False
        c = self._normalise([_ilit(l) for l in lits])
        if c is None:
            return True
        return self._insert(c, learnt=learnt)

    def add_clauses(self, clauses: Iterable[Iterable[int]]) -> bool:
        for c in clauses:
            self.add_clause(c)
        return self.ok

    def attach_filter(self, group: Sequence[int], callback: Callback, cache: bool = True) -> int:
        group = tuple(group)
        if not group:
            raise ValueError("callback group must be nonempty")
        key = tuple(sorted(group))
        if key in self._group_keys:
            raise ValueError(f"group {key} already registered")
        self._group_keys.add(key)
        for v in group:
            self._ensure_var(v)
        gid = len(self.groups)
        self.groups.append(_Group(group, callback, {} if cache and self.cache_callbacks else None))
        left = 0
        for v in group:
            self.var_groups[v].append(gid)
            if self.val[2 * v] == 0:
                left += 1
        self.group_left.append(left)
        if left == 0:
            self.pending.append(gid)
        return gid

    def _normalise(self, c: list[int]) -> list[int] | None:
        seen = set()
        out = []
        for x in c:
            if x ^ 1 in seen:
                return None
            if x not in seen:
                seen.add(x)
                out.append(x)
        return out

    # -- core state ---------------------------------------------------------

    def _decision_level(self) -> int:
        return len(self.trail_lim)

    def _assign(self, x: int, reason: list[int] | None) -> None:
        v = x >> 1
        self.val[x] = 1
        self.val[x ^ 1] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(x)
        for g in self.var_groups[v]:
            self.group_left[g] -= 1
            if self.group_left[g] == 0:
                self.pending.append(g)

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        val, phase, act, heap = self.val, self.phase, self.activity, self.heap
        stop = self.trail_lim[lvl]
        for i in range(len(self.trail) - 1, stop - 1, -1):
            x = self.trail[i]
            v = x >> 1
            val[x] = 0
            val[x ^ 1] = 0
            self.reason[v] = None
            phase[v] = 0 if x & 1 else 1
            for g in self.var_groups[v]:
                self.group_left[g] += 1
            heapq.heappush(heap, (-act[v], v))
        del self.trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _insert(self, c: list[int], learnt: bool) -> bool:
        """Insert a clause in any search state, restoring watch invariants."""
        val, level = self.val, self.level
        if not c:
            self.ok = False
            return False
        # non-false literals first, then false ones by decreasing level
        c.sort(key=lambda x: (val[x] == -1, -level[x >> 1] if val[x] == -1 else 0))
        if len(c) == 1:
            x = c[0]
            if val[x] == -1 or (val[x] == 1 and level[x >> 1] > 0) or val[x] == 0:
                self._cancel_until(0)
                if val[x] == -1:
                    self.ok = False
                    return False
                if val[x] == 0:
                    self._assign(x, None)
            self.clauses.append(c)
            return True
        (self.learnts if learnt else self.clauses).append(c)
        self.watches[c[0]].append(c)
        self.watches[c[1]].append(c)
        if val[c[0]] == -1:
            return self._resolve_false_clause(c)
        if val[c[1]] == -1:
            l1 = level[c[1] >> 1]
            if val[c[0]] == 0 or level[c[0] >> 1] > l1:
                self._cancel_until(l1)
                self._assign(c[0], c)
        return True

    def _resolve_false_clause(self, c: list[int]) -> bool:
        """Handle a clause falsified by the trail (watches already attached)."""
        level = self.level
        top = level[c[0] >> 1]
        if top == 0:
            self.ok = False
            return False
        self._cancel_until(top)
        at_top = sum(1 for x in c if level[x >> 1] == top)
        if at_top == 1:
            second = level[c[1] >> 1]
            self._cancel_until(second)
            self._assign(c[0], c)
            return True
        learnt, bt = self._analyze(c)
        self._cancel_until(bt)
        self._learn(learnt)
        return True

    def _learn(self, learnt: list[int]) -> None:
        if len(learnt) == 1:
            self._assign(learnt[0], None)
            self.clauses.append(learnt)
        else:
            self.learnts.append(learnt)
            self.watches[learnt[0]].append(learnt)
            self.watches[learnt[1]].append(learnt)
            self._assign(learnt[0], learnt)
        self.stats.learned += 1

    # -- propagation ----------------------------------------------------------

    def _propagate(self) -> list[int] | None:
        val, watches, trail = self.val, self.watches, self.trail
        confl = None
        props = 0
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            props += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                if val[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    x = c[k]
                    if val[x] != -1:
                        c[1] = x
                        c[k] = false_lit
                        watches[x].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if val[first] == -1:
                        confl = c
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                    else:
                        self._assign(first, c)
            del ws[j:]
            if confl is not None:
                break
        self.stats.propagations += props
        return confl

    # -- conflict analysis --------------------------------------------------

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for u in range(1, self.nvars + 1):
                act[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[u], u) for u in range(1, self.nvars + 1) if self.val[2 * u] == 0]
            heapq.heapify(self.heap)
        elif self.val[2 * v] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        level, reason, trail = self.level, self.reason, self.trail
        cur = len(self.trail_lim)
        seen = set()
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        c = confl
        while True:
            for x in c:
                if p != -1 and x == p:
                    continue
                v = x >> 1
                if v not in seen and level[v] > 0:
                    seen.add(v)
                    self._bump(v)
                    if level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(x)
            while (trail[idx] >> 1) not in seen:
                idx -= 1
            p = trail[idx]
            idx -= 1
            c = reason[p >> 1]
            seen.discard(p >> 1)
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1
        # drop literals whose reason is subsumed by the rest of the clause
        keep = {x >> 1 for x in learnt}
        out = [learnt[0]]
        for x in learnt[1:]:
            r = reason[x >> 1]
            if r is None or any((y >> 1) not in keep and level[y >> 1] > 0 for y in r if y != x ^ 1):
                out.append(x)
        learnt = out
        if len(learnt) == 1:
            bt = 0
        else:
            mi = max(range(1, len(learnt)), key=lambda i: level[learnt[i] >> 1])
            learnt[1], learnt[mi] = learnt[mi], learnt[1]
            bt = level[learnt[1] >> 1]
        self.var_inc /= self.var_decay
        return learnt, bt

    # -- search -------------------------------------------------------------

    def _pick_branch(self) -> int:
        heap, val = self.heap, self.val
        while heap:
            _, v = heapq.heappop(heap)
            if val[2 * v] == 0:
                return 2 * v + (0 if self.phase[v] else 1)
        return -1

    def _run_callbacks(self, groups: Iterable[int]) -> bool:
        """Fire callbacks for fully assigned groups.  Returns True if a clause was added."""
        val = self.val
        for gid in groups:
            if self.group_left[gid] != 0:
                continue
            grp = self.groups[gid]
            values = tuple(val[2 * v] == 1 for v in grp.vars)
            cache = grp.cache
            if cache is not None and values in cache:
                resp = cache[values]
            else:
                self.stats.callback_calls += 1
                resp = grp.callback(values)
                if cache is not None:
                    cache[values] = resp
            if resp is None:
                continue
            if not isinstance(resp, Reject):
                resp = Reject(resp)
            clause = [_ilit(l) for l in resp.clause]
            for l in resp.clause:
                self._ensure_var(abs(l))
            if any(val[x] != -1 for x in clause):
                raise CallbackContractError(
                    f"callback on group {grp.vars} returned clause {list(resp.clause)} "
                    "not falsified by the current assignment")
            self.stats.callback_rejections += 1
            c = self._normalise(clause)
            self.pending.clear()
            if not self._insert(c, learnt=False):
                return True
            for lem in resp.lemmas:
                for l in lem:
                    self._ensure_var(abs(l))
                c2 = self._normalise([_ilit(l) for l in lem])
                if c2 is not None and not self._insert(c2, learnt=False):
                    return True
            # group counters may have changed through backjumping
            self.pending = [g for g in range(len(self.groups)) if self.group_left[g] == 0]
            return True
        return False

    def _reduce_db(self) -> None:
        limit = self.max_learnts
        if limit is None or len(self.learnts) <= limit:
            return
        # called at level 0 only, so no learnt clause is a live reason
        self.learnts.sort(key=len)
        keep = self.learnts[: limit // 2]
        self.stats.deleted += len(self.learnts) - len(keep)
        self.learnts = keep
        for w in self.watches:
            w.clear()
        for c in self.clauses:
            if len(c) > 1:
                self.watches[c[0]].append(c)
                self.watches[c[1]].append(c)
        for c in self.learnts:
            self.watches[c[0]].append(c)
            self.watches[c[1]].append(c)

    def solve(self, assumptions: Sequence[int] = (), deadline: float | None = None) -> str:
        """Return SAT or UNSAT; on SAT the model is in ``self.model`` (index = var)."""
        self.stats.solves += 1
        self.model = None
        self.deadline = deadline
        for l in assumptions:
            self._ensure_var(abs(l))
        assume = [_ilit(l) for l in assumptions]
        self._cancel_until(0)
        if not self.ok:
            return UNSAT
        self.pending = [g for g in range(len(self.groups)) if self.group_left[g] == 0]
        restarts = 0
        budget = luby(restarts) * self.restart_unit
        conflicts_here = 0
        ticks = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.stats.conflicts += 1
                conflicts_here += 1
                if not self.trail_lim:
                    self.ok = False
                    return UNSAT
                learnt, bt = self._analyze(confl)
                self._cancel_until(bt)
                self._learn(learnt)
                continue
            if self.pending:
                pend, self.pending = self.pending, []
                if self._run_callbacks(pend):
                    if not self.ok:
                        return UNSAT
                    continue
            ticks += 1
            if deadline is not None and ticks & 63 == 0 and time.monotonic() > deadline:
                self._cancel_until(0)
                raise SolverTimeout()
            if conflicts_here >= budget:
                restarts += 1
                self.stats.restarts += 1
                budget = luby(restarts) * self.restart_unit
                conflicts_here = 0
                self._cancel_until(0)
                self._reduce_db()
                continue
            lvl = len(self.trail_lim)
            if lvl < len(assume):
                x = assume[lvl]
                if self.val[x] == -1:
                    self._cancel_until(0)
                    return UNSAT
                self.trail_lim.append(len(self.trail))
                if self.val[x] == 0:
                    self._assign(x, None)
                continue
            x = self._pick_branch()
            if x == -1:
                # total assignment: final check of every group
                if self._run_callbacks(range(len(self.groups))):
                    if not self.ok:
                        return UNSAT
                    continue
                self.model = [False] + [self.val[2 * v] == 1 for v in range(1, self.nvars + 1)]
                self._cancel_until(0)
                return SAT
            self.stats.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._assign(x, None)

    def value(self, lit: int) -> bool:
        if self.model is None:
            raise RuntimeError("no model available")
        v = self.model[abs(lit)]
        return v if lit > 0 else not v

    def model_literals(self, variables: Iterable[int] | None = None) -> list[int]:
        if self.model is None:
            raise RuntimeError("no model available")
        vs = range(1, self.nvars + 1) if variables is None else variables
        return [v if self.model[v] else -v for v in vs]

    def check_callbacks(self, model: Sequence[bool]) -> bool:
        """Re-run every callback (uncached) on a total model."""
        for grp in self.groups:
            values = tuple(bool(model[v]) for v in grp.vars)
            if grp.callback(values) is not None:
                return False
        return True


def check_model(clauses: Iterable[Sequence[int]], model: Sequence[bool]) -> bool:
    """Independent check that ``model`` (indexed by variable) satisfies every clause."""
    for c in clauses:
        if not any((model[l] if l > 0 else not model[-l]) for l in c):
            return False
    return True
