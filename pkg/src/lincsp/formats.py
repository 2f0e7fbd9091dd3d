"""Text formats: the native ``p csp`` instance format and DIMACS CNF (d = 2).

Native format::

    c <comment>
    p csp <n_vars> <d> <k> <m>
    <var>:<value> <var>:<value> ...     (m lines, k tokens each)

Serialization is canonical: tokens ascend by variable within a line and
lines are sorted by (variables, values), so equal CSPs give equal bytes.
"""

from __future__ import annotations

from typing import Iterable

from .core import Constraint, Csp
from .errors import ParameterError, ParseError, UnsupportedDomainError


def serialize(csp: Csp, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p csp {csp.n_vars} {csp.d} {csp.k} {len(csp)}")
    for c in csp.canonical().constraints:
        lines.append(" ".join(f"{v}:{b}" for v, b in c.literals))
    return "\n".join(lines) + "\n"


def _ints(tokens, lineno, what):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(lineno, f"non-integer {what}: {' '.join(tokens)!r}") from None


def parse(text: str) -> Csp:
    header = None
    cons: list[Constraint] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line == "c" or line.startswith("c "):
            continue
        if line.startswith("p "):
            if header is not None:
                raise ParseError(lineno, "second header line")
            parts = line.split()
            if len(parts) != 6 or parts[1] != "csp":
                raise ParseError(lineno, "expected 'p csp <n_vars> <d> <k> <m>'")
            n_vars, d, k, m = _ints(parts[2:], lineno, "header field")
            if d < 2 or k < 0 or n_vars < 0 or m < 0:
                raise ParseError(lineno, f"header values out of range: {line!r}")
            header = (n_vars, d, k, m)
            continue
        if header is None:
            raise ParseError(lineno, "constraint before header")
        n_vars, d, k, m = header
        tokens = line.split()
        if len(tokens) != k:
            raise ParseError(lineno, f"expected {k} literals, found {len(tokens)}")
        lits = []
        seen = set()
        for tok in tokens:
            var_s, sep, val_s = tok.partition(":")
            if not sep:
                raise ParseError(lineno, f"malformed literal {tok!r}")
            var, val = _ints([var_s, val_s], lineno, "literal")
            if not 1 <= var <= n_vars:
                raise ParseError(lineno, f"variable {var} outside 1..{n_vars}")
            if not 0 <= val < d:
                raise ParseError(lineno, f"value {val} outside 0..{d - 1} in {tok!r}")
            if var in seen:
                raise ParseError(lineno, f"variable {var} repeated")
            seen.add(var)
            lits.append((var, val))
        if len(cons) == m:
            raise ParseError(lineno, f"more than the declared {m} constraints")
        cons.append(Constraint(lits))
    if header is None:
        raise ParseError(max(1, len(text.splitlines())), "missing 'p csp' header")
    n_vars, d, k, m = header
    if len(cons) != m:
        raise ParseError(len(text.splitlines()), f"declared {m} constraints, found {len(cons)}")
    try:
        return Csp(k, d, cons, n_vars)
    except ParameterError as exc:
        raise ParseError(len(text.splitlines()), str(exc)) from None


def to_dimacs(csp: Csp, comments: Iterable[str] = ()) -> str:
    """x != 0 is the positive literal x; x != 1 is -x."""
    if csp.d != 2:
        raise UnsupportedDomainError(f"DIMACS export needs d = 2, got d = {csp.d}")
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {csp.n_vars} {len(csp)}")
    for clause in csp.to_clauses():
        lines.append(" ".join(map(str, clause + [0])))
    return "\n".join(lines) + "\n"


def from_dimacs(text: str, k: int | None = None) -> Csp:
    """Parse DIMACS CNF into a (k, 2)-CSP.

    Every clause must have the same length, and no variable may appear
    twice in one clause.
    """
    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last = lineno
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(lineno, "expected 'p cnf <vars> <clauses>'")
            header = tuple(_ints(parts[2:], lineno, "header field"))
            continue
        if header is None:
            raise ParseError(lineno, "clause before header")
        for lit in _ints(line.split(), lineno, "literal"):
            if lit == 0:
                if len({abs(x) for x in current}) != len(current):
                    raise ParseError(lineno, f"clause {current} repeats a variable")
                if k is not None and len(current) != k:
                    raise ParseError(lineno, f"clause {current} has length {len(current)}, expected {k}")
                if k is None:
                    k = len(current)
                clauses.append(current)
                current = []
            else:
                if abs(lit) > header[0]:
                    raise ParseError(lineno, f"literal {lit} exceeds {header[0]} declared variables")
                current.append(lit)
    if header is None:
        raise ParseError(max(last, 1), "missing 'p cnf' header")
    if current:
        raise ParseError(last, "last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise ParseError(last, f"declared {header[1]} clauses, found {len(clauses)}")
    try:
        return Csp.from_clauses(clauses, n_vars=header[0], k=k if k is not None else 0)
    except ParameterError as exc:
        raise ParseError(last, str(exc)) from None


def sniff(text: str) -> str:
    """'csp' or 'dimacs', from the header line."""
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("p "):
            kind = s.split()[1] if len(s.split()) > 1 else ""
            if kind == "csp":
                return "csp"
            if kind == "cnf":
                return "dimacs"
    raise ParseError(1, "no 'p csp' or 'p cnf' header found")


def load(text: str) -> Csp:
    return parse(text) if sniff(text) == "csp" else from_dimacs(text)
