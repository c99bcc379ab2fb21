"""SAT+CAS conjecture search: a CDCL solver coupled with exact combinatorial filters."""

__version__ = "0.1.0"
