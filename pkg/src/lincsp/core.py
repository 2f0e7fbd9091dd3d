"""Domain model for (k, d)-CSPs whose constraints each forbid one point.

A literal ``x != b`` is a :class:`Literal`; a :class:`Constraint` is a set
of literals over distinct variables, satisfied when at least one literal
is; a :class:`Csp` is a duplicate-free sequence of constraints together
with its arity ``k`` and domain size ``d``. Variables are positive
integers, values live in ``range(d)``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import MissingVariableError, ParameterError

Assignment = Mapping[int, int]


class Literal(NamedTuple):
    """``var != value``."""

    var: int
    value: int

    def satisfied_by(self, alpha: Assignment) -> bool:
        try:
            return alpha[self.var] != self.value
        except KeyError:
            raise MissingVariableError(self.var) from None


class Constraint:
    """Literals over pairwise distinct variables, kept sorted by variable."""

    __slots__ = ("literals", "_hash")

    def __init__(self, literals: Iterable[Literal | tuple[int, int]]):
        lits = tuple(sorted(Literal(int(v), int(b)) for v, b in literals))
        for lit in lits:
            if lit.var < 1:
                raise ParameterError(f"variable ids are 1-based, got {lit.var}")
            if lit.value < 0:
                raise ParameterError(f"negative value in literal {lit}")
        for a, b in zip(lits, lits[1:]):
            if a.var == b.var:
                raise ParameterError(f"variable {a.var} repeated within a constraint")
        self.literals = lits
        self._hash = hash(lits)

    @property
    def vbl(self) -> frozenset[int]:
        return frozenset(lit.var for lit in self.literals)

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(lit.var for lit in self.literals)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(lit.value for lit in self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Constraint):
            return NotImplemented
        return self.literals == other.literals

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"x{v}!={b}" for v, b in self.literals)
        return f"Constraint({{{body}}})"

    def satisfied_by(self, alpha: Assignment) -> bool:
        return any(lit.satisfied_by(alpha) for lit in self.literals)

    def without(self, variables) -> Constraint:
        drop = set(variables)
        return Constraint(lit for lit in self.literals if lit.var not in drop)


class Csp:
    """A (k, d)-CSP. Immutable.

    ``n_vars`` defaults to the largest variable mentioned. Constraint order
    is preserved (solvers address constraints by index); use
    :meth:`canonical` for an order-independent form. ``allow_duplicates``
    exists for the reduction, whose truncated constraints may coincide.
    """

    k: int
    d: int
    constraints: tuple[Constraint, ...]
    n_vars: int

    def __init__(self, k: int, d: int, constraints: Iterable = (), n_vars: int | None = None,
                 *, allow_duplicates: bool = False):
        cons = tuple(c if isinstance(c, Constraint) else Constraint(c) for c in constraints)
        if d < 2:
            raise ParameterError(f"domain size d must be >= 2, got {d}")
        if k < 0:
            raise ParameterError(f"arity k must be >= 0, got {k}")
        top = 0
        for i, c in enumerate(cons):
            if len(c) != k:
                raise ParameterError(f"constraint {i} has {len(c)} literals, expected k={k}")
            for lit in c.literals:
                if lit.value >= d:
                    raise ParameterError(f"constraint {i}: value {lit.value} outside 0..{d - 1}")
                top = max(top, lit.var)
        if not allow_duplicates and len(set(cons)) != len(cons):
            seen = {}
            for i, c in enumerate(cons):
                if c in seen:
                    raise ParameterError(f"constraints {seen[c]} and {i} are identical")
                seen[c] = i
        if n_vars is None:
            n_vars = top
        elif n_vars < top:
            raise ParameterError(f"n_vars={n_vars} but variable {top} is used")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "constraints", cons)
        object.__setattr__(self, "n_vars", n_vars)

    def __setattr__(self, name, value):
        raise AttributeError("Csp is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_clauses(cls, clauses: Iterable[Sequence[int]], n_vars: int | None = None,
                     k: int | None = None) -> Csp:
        """Boolean CNF (DIMACS-style signed ints) to a (k, 2)-CSP.

        Positive literal ``x`` is satisfied when x = 1, i.e. it is ``x != 0``.
        """
        cons = [Constraint((abs(x), 0 if x > 0 else 1) for x in cl) for cl in clauses]
        if k is None:
            k = len(cons[0]) if cons else 0
        return cls(k, 2, cons, n_vars)

    def to_clauses(self) -> list[list[int]]:
        if self.d != 2:
            raise ParameterError("clause notation needs d = 2")
        return [[v if b == 0 else -v for v, b in c.literals] for c in self.constraints]

    def canonical(self) -> Csp:
        """Same CSP with constraints sorted by (variables, values)."""
        cons = sorted(self.constraints, key=lambda c: (c.variables, c.values))
        return Csp(self.k, self.d, cons, self.n_vars, allow_duplicates=True)

    def replace_constraints(self, constraints: Iterable, **kw) -> Csp:
        return Csp(self.k, self.d, constraints, self.n_vars, **kw)

    # -- container protocol ---------------------------------------------------

    def __len__(self) -> int:
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)

    def __getitem__(self, i: int) -> Constraint:
        return self.constraints[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Csp):
            return NotImplemented
        return (self.k, self.d, self.n_vars, self.constraints) == (
            other.k, other.d, other.n_vars, other.constraints)

    def __hash__(self) -> int:
        return hash((self.k, self.d, self.n_vars, self.constraints))

    def __repr__(self) -> str:
        return f"Csp(k={self.k}, d={self.d}, n_vars={self.n_vars}, m={len(self)})"

    @cached_property
    def vbl(self) -> frozenset[int]:
        return frozenset(v for c in self.constraints for v in c.variables)

    @cached_property
    def degrees(self) -> Counter:
        return Counter(v for c in self.constraints for v in c.variables)

    # -- flat arrays for the kernels ------------------------------------------

    @cached_property
    def arrays(self) -> CspArrays:
        return CspArrays.build(self)


@dataclass(frozen=True)
class CspArrays:
    """CSR view with variables renumbered 0..nv-1 in order of first use."""

    var_ids: np.ndarray   # compact index -> original variable id
    offsets: np.ndarray   # int64, len m + 1
    lvars: np.ndarray     # int32, compact variable per literal
    lvals: np.ndarray     # int32, forbidden value per literal

    @property
    def nv(self) -> int:
        return len(self.var_ids)

    @classmethod
    def build(cls, csp: Csp) -> CspArrays:
        index: dict[int, int] = {}
        lv, lb, offs = [], [], [0]
        for c in csp.constraints:
            for v, b in c.literals:
                lv.append(index.setdefault(v, len(index)))
                lb.append(b)
            offs.append(len(lv))
        return cls(
            var_ids=np.fromiter(index.keys(), dtype=np.int64, count=len(index)),
            offsets=np.array(offs, dtype=np.int64),
            lvars=np.array(lv, dtype=np.int32),
            lvals=np.array(lb, dtype=np.int32),
        )

    def incidence(self):
        """Per-variable CSR of (constraint index, forbidden value)."""
        m = len(self.offsets) - 1
        con = np.repeat(np.arange(m, dtype=np.int32), np.diff(self.offsets))
        order = np.argsort(self.lvars, kind="stable")
        counts = np.bincount(self.lvars, minlength=self.nv)
        inc_off = np.zeros(self.nv + 1, dtype=np.int64)
        np.cumsum(counts, out=inc_off[1:])
        return (inc_off, np.ascontiguousarray(con[order], dtype=np.int32),
                np.ascontiguousarray(self.lvals[order], dtype=np.int32))

    def to_assignment(self, values: np.ndarray) -> dict[int, int]:
        return dict(zip(self.var_ids.tolist(), values.tolist()))


# -- predicates ---------------------------------------------------------------


def _check(csp: Csp, alpha: Assignment) -> None:
    for v in sorted(csp.vbl):
        if v not in alpha:
            raise MissingVariableError(v)


def evaluate(csp: Csp, alpha: Assignment) -> bool:
    """True iff every constraint has a literal ``x != b`` with alpha[x] != b."""
    _check(csp, alpha)
    return all(c.satisfied_by(alpha) for c in csp.constraints)


def violated_constraints(csp: Csp, alpha: Assignment) -> set[int]:
    """Indices of constraints whose every literal is falsified by ``alpha``."""
    _check(csp, alpha)
    return {i for i, c in enumerate(csp.constraints) if not c.satisfied_by(alpha)}


def degree(csp: Csp, var: int) -> int:
    """deg(var, F): number of constraints mentioning ``var``."""
    return csp.degrees.get(var, 0)


def _check_ell(csp: Csp, ell: int) -> None:
    if not 2 <= ell <= csp.k:
        raise ParameterError(f"ell must satisfy 2 <= ell <= k={csp.k}, got {ell}")


def check_l_disjoint(csp: Csp, ell: int) -> tuple[bool, tuple[int, int] | None]:
    """Whether no two constraints share ``ell`` or more variables.

    Returns ``(ok, witness)``; ``witness`` is an offending index pair
    ``(i, j)`` with ``i < j`` when ``ok`` is False.
    """
    _check_ell(csp, ell)
    owner: dict[tuple[int, ...], int] = {}
    for j, c in enumerate(csp.constraints):
        for sub in combinations(c.variables, ell):
            i = owner.setdefault(sub, j)
            if i != j:
                return False, (i, j)
    return True, None


def frequent_threshold(k: int, d: int, ell: int) -> float:
    """d^k / (e d^(ell-1) k), evaluated in log space."""
    return math.exp((k - ell + 1) * math.log(d) - 1.0 - math.log(k))


def frequent_variables(csp: Csp, ell: int) -> set[int]:
    """Variables whose degree strictly exceeds :func:`frequent_threshold`."""
    _check_ell(csp, ell)
    t = frequent_threshold(csp.k, csp.d, ell)
    return {v for v, deg in csp.degrees.items() if deg > t}


def degree_sum_check(csp: Csp) -> bool:
    """Double-counting identity: sum of constraint sizes == sum of degrees."""
    return sum(len(c) for c in csp.constraints) == sum(csp.degrees.values())
