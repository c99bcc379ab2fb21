"""Central configuration records.

Every floating-point filter reads its slack from :class:`Tolerances` so the
one-sided error policy can be audited in a single place.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace


@dataclass(frozen=True)
class Tolerances:
    # relative slack added to every upper bound before rejecting
    rel: float = 1e-6
    # unit-circle samples per coefficient for the Golay norm filter
    samples_per_term: int = 16

    def bound(self, limit: float) -> float:
        return limit + self.rel * limit


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    tol: Tolerances = field(default_factory=Tolerances)
    split_depth: int = 0
    prune: bool = True
    workers: int = 1
    timeout: float | None = 600.0
    # stop each subinstance after this many verified solutions (None = all)
    max_solutions: int | None = None
    # extra PSD-sum filters over every pair and triple of rows
    combined_psd: bool = True
    # static row-sum cardinality clauses
    row_sums: bool = True
    # "structure": block via Hamiltonian cycle / monochromatic path;
    # "plain": block each enumerated object individually
    hypercube_blocking: str = "structure"
    # "full", "generators" or "none"
    orbit_mode: str = "full"
    # treat swapping the two colours as an extra Norine symmetry
    colour_swap: bool = True
    golay_stage1_only: bool = False
    record_objects: bool = False

    def with_(self, **kw) -> "SearchConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["tol"] = asdict(self.tol)
        return d
