"""CNF containers and DIMACS reading/writing."""
from __future__ import annotations

from dataclasses import dataclass, field


class DimacsError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass
class ClauseSet:
    nvars: int
    clauses: list[list[int]] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)

    def add(self, clause) -> None:
        c = list(dict.fromkeys(clause))
        if any(-l in c for l in c):
            return
        for l in c:
            if l == 0:
                raise ValueError("literal 0 in clause")
            if abs(l) > self.nvars:
                self.nvars = abs(l)
        self.clauses.append(c)

    def new_var(self) -> int:
        self.nvars += 1
        return self.nvars

    def __len__(self) -> int:
        return len(self.clauses)


def dimacs_read(text: str) -> ClauseSet:
    header = None
    comments: list[str] = []
    clauses: list[list[int]] = []
    cur: list[int] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("c"):
            comments.append(s[1:].lstrip() if len(s) > 1 and s[1] == " " else s[1:])
            continue
        if s.startswith("%"):
            # SATLIB files end with "%\n0"
            break
        if s.startswith("p"):
            if header is not None:
                raise DimacsError(lineno, "duplicate header")
            parts = s.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(lineno, f"malformed header {s!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(lineno, f"malformed header {s!r}") from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsError(lineno, "negative counts in header")
            continue
        if header is None:
            raise DimacsError(lineno, "clause before header")
        for tok in s.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(lineno, f"bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                if abs(lit) > header[0]:
                    raise DimacsError(lineno, f"literal {lit} exceeds declared {header[0]} variables")
                cur.append(lit)
    if header is None:
        raise DimacsError(0, "missing header")
    if cur:
        raise DimacsError(lineno, "last clause not terminated by 0")
    if len(clauses) != header[1]:
        raise DimacsError(lineno, f"header declares {header[1]} clauses, found {len(clauses)}")
    cs = ClauseSet(header[0], comments=comments)
    for c in clauses:
        cs.add(c)
    cs.nvars = header[0]
    return cs


def dimacs_write(cs: ClauseSet) -> str:
    out = [f"c {c}" if c else "c" for c in cs.comments]
    out.append(f"p cnf {cs.nvars} {len(cs.clauses)}")
    out.extend(" ".join(map(str, c + [0])) for c in cs.clauses)
    return "\n".join(out) + "\n"


def normalize(text: str) -> str:
    return dimacs_write(dimacs_read(text))
