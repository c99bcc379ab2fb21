from .cnf import ClauseSet, DimacsError, dimacs_read, dimacs_write, normalize
from .enumerate import BlockingContractError, default_block, enumerate_models
from .solver import (
    SAT,
    UNSAT,
    CallbackContractError,
    Reject,
    Solver,
    SolverTimeout,
    Stats,
    check_model,
    luby,
)


def solve(cs: ClauseSet, assumptions=(), **kw):
    """One-shot solve; returns (status, model-or-None)."""
    s = Solver(cs.nvars, **kw)
    for c in cs.clauses:
        s.add_clause(c)
    st = s.solve(assumptions)
    return st, s.model
