from __future__ import annotations

from typing import Callable, Iterator, Sequence

from .solver import SAT, Solver


class BlockingContractError(RuntimeError):
    pass


def default_block(projected: Sequence[int]) -> list[int]:
    return [-l for l in projected]


def enumerate_models(solver: Solver, projection: Sequence[int],
                     block_fn: Callable | None = None, limit: int | None = None,
                     deadline: float | None = None) -> Iterator[list[int]]:
    """Yield projected models until UNSAT.

    ``block_fn`` maps the projected model (list of signed literals) to one
    clause, or to a list of clauses whose first clause excludes the model.
    """
    if not projection:
        raise ValueError("projection must be nonempty")
    # projected variables may not occur in any clause yet
    solver.new_vars(max(0, max(abs(v) for v in projection) - solver.nvars))
    found = 0
    while limit is None or found < limit:
        if solver.solve(deadline=deadline) != SAT:
            return
        proj = solver.model_literals(projection)
        found += 1
        yield proj
        blocks = default_block(proj) if block_fn is None else block_fn(proj)
        if blocks and isinstance(blocks[0], int):
            blocks = [blocks]
        if not blocks or any(solver.value(l) for l in blocks[0]):
            raise BlockingContractError("blocking clause does not exclude the current model")
        for c in blocks:
            solver.add_clause(c)
