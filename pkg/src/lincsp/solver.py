"""Solvers: resampling, the frequent-variable reduction, and exact oracles.

``resample_solve`` is the Moser-Tardos procedure: start from a uniform
assignment and, while some constraint is violated, redraw all variables
of the violated constraint with the smallest index. Under the local-lemma
degree condition (:func:`lll_condition`) it terminates quickly; elsewhere
it runs until its budget.

``reduce_frequent`` and ``solve_sparse_frequent`` handle ell-disjoint
CSPs that have a few high-degree variables: literals of frequent
variables are deleted from constraints that contain fewer than ell of
them, every constraint is then truncated to k - ell + 1 literals, and
the resulting lower-degree CSP is solved by resampling. Any assignment
satisfying the reduction satisfies the original.

``oracle_solve`` is exact: implication-graph SCCs for (2, 2)-CSPs,
budgeted backtracking otherwise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import networkx as nx

from . import kernels
from .core import (
    Constraint,
    Csp,
    Literal,
    check_l_disjoint,
    evaluate,
    frequent_threshold,
    frequent_variables,
)
from .errors import InvariantError, ParameterError, PreconditionError
from .rng import seed_state

DEFAULT_MAX_RESAMPLES = 10**6
DEFAULT_NODE_BUDGET = 10**8


class Status(enum.Enum):
    SATISFIED = "Satisfied"
    UNSATISFIABLE = "Unsatisfiable"
    BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    assignment: dict[int, int] | None = None
    resamples: int = 0
    nodes: int = 0
    method: str = ""

    @property
    def satisfied(self) -> bool:
        return self.status is Status.SATISFIED


def _verified(csp: Csp, outcome: SolveOutcome) -> SolveOutcome:
    if outcome.status is Status.SATISFIED:
        if outcome.assignment is None or not evaluate(csp, outcome.assignment):
            raise InvariantError(f"{outcome.method} returned a non-satisfying assignment")
    elif outcome.assignment is not None:
        raise InvariantError("assignment attached to a non-Satisfied outcome")
    return outcome


def _complete(csp: Csp, partial: dict[int, int]) -> dict[int, int]:
    """Extend to every variable 1..n_vars; unconstrained ones get 0."""
    out = {v: 0 for v in range(1, csp.n_vars + 1)}
    out.update(partial)
    return out


# -- local lemma ---------------------------------------------------------------


@dataclass(frozen=True)
class LllReport:
    holds: bool
    max_degree: int
    threshold: float


def lll_threshold(k: int, d: int) -> float:
    """d^k / (e k)."""
    if k < 1 or d < 2:
        raise ParameterError(f"need k >= 1 and d >= 2, got k={k}, d={d}")
    return math.exp(k * math.log(d) - 1.0 - math.log(k))


def lll_condition(csp: Csp) -> LllReport:
    """Whether every variable has degree <= d^k/(e k)."""
    t = lll_threshold(max(csp.k, 1), csp.d)
    top = max(csp.degrees.values(), default=0)
    return LllReport(top <= t, top, t)


# -- resampling ----------------------------------------------------------------


def resample_solve(csp: Csp, seed: int = 0, max_resamples: int = DEFAULT_MAX_RESAMPLES,
                   *, backend: str | None = None) -> SolveOutcome:
    """Moser-Tardos resampling with least-index violated-constraint selection.

    Returns Satisfied with a verified assignment, or BudgetExceeded once
    ``max_resamples`` resampling steps have been spent. Never reports
    Unsatisfiable.
    """
    arr = csp.arrays
    if any(len(c) == 0 for c in csp.constraints):
        return SolveOutcome(Status.BUDGET_EXCEEDED, None, 0, method="resample")
    inc_off, inc_con, inc_val = arr.incidence()
    kern = kernels.get(backend)
    status, steps, values, _ = kern.resample(
        arr.offsets, arr.lvars, arr.lvals, inc_off, inc_con, inc_val,
        arr.nv, csp.d, seed_state(seed), max_resamples)
    if status == 0:
        alpha = _complete(csp, arr.to_assignment(values))
        return _verified(csp, SolveOutcome(Status.SATISFIED, alpha, steps, method="resample"))
    return SolveOutcome(Status.BUDGET_EXCEEDED, None, steps, method="resample")


# -- frequent-variable reduction -----------------------------------------------


@dataclass(frozen=True)
class ReductionReport:
    reduced: Csp
    # kept_map[i] = (literals removed in phase 1, literals removed in phase 2)
    kept_map: tuple[tuple[tuple[Literal, ...], tuple[Literal, ...]], ...]
    frequent_set: frozenset[int]
    intermediate_degrees: dict[int, int] = field(default_factory=dict)


def _require_disjoint(csp: Csp, ell: int) -> None:
    ok, witness = check_l_disjoint(csp, ell)
    if not ok:
        raise PreconditionError(
            f"CSP is not {ell}-disjoint: constraints {witness[0]} and {witness[1]} "
            f"share at least {ell} variables", witness)


def reduce_frequent(csp: Csp, ell: int) -> ReductionReport:
    """Delete literals until no variable is frequent and arity is k - ell + 1.

    Phase 1: a constraint containing fewer than ``ell`` frequent variables
    loses the literals of those variables; others are kept whole.
    Phase 2: each constraint, in index order, drops the literal whose
    variable has the largest current degree (ties: smallest id) until
    k - ell + 1 literals remain.
    """
    if not 2 <= ell <= csp.k:
        raise ParameterError(f"ell must satisfy 2 <= ell <= k={csp.k}, got {ell}")
    _require_disjoint(csp, ell)
    freq = frequent_variables(csp, ell)
    target = csp.k - ell + 1

    phase1: list[list[Literal]] = []
    removed1: list[tuple[Literal, ...]] = []
    for c in csp.constraints:
        hits = [lit for lit in c.literals if lit.var in freq]
        if len(hits) < ell:
            phase1.append([lit for lit in c.literals if lit.var not in freq])
            removed1.append(tuple(hits))
        else:
            phase1.append(list(c.literals))
            removed1.append(())

    deg: dict[int, int] = {}
    for lits in phase1:
        for lit in lits:
            deg[lit.var] = deg.get(lit.var, 0) + 1
    intermediate = dict(deg)

    removed2: list[tuple[Literal, ...]] = []
    for lits in phase1:
        gone = []
        while len(lits) > target:
            victim = min(lits, key=lambda lit: (-deg[lit.var], lit.var))
            lits.remove(victim)
            deg[victim.var] -= 1
            gone.append(victim)
        removed2.append(tuple(gone))

    reduced = Csp(target, csp.d, [Constraint(lits) for lits in phase1], csp.n_vars,
                  allow_duplicates=True)
    return ReductionReport(
        reduced=reduced,
        kept_map=tuple(zip(removed1, removed2)),
        frequent_set=frozenset(freq),
        intermediate_degrees=intermediate,
    )


def max_frequent_allowed(k: int, d: int, ell: int) -> float:
    """(d^k / (e d^(ell-1) k))^(1/(ell-1))."""
    return math.exp(math.log(frequent_threshold(k, d, ell)) / (ell - 1))


def solve_sparse_frequent(csp: Csp, ell: int, seed: int = 0,
                          max_resamples: int = DEFAULT_MAX_RESAMPLES,
                          *, backend: str | None = None) -> SolveOutcome:
    """Solve an ell-disjoint CSP with few frequent variables via the reduction."""
    if not 2 <= ell <= csp.k:
        raise ParameterError(f"ell must satisfy 2 <= ell <= k={csp.k}, got {ell}")
    _require_disjoint(csp, ell)
    n_freq = len(frequent_variables(csp, ell))
    bound = max_frequent_allowed(csp.k, csp.d, ell)
    if n_freq > bound:
        raise PreconditionError(
            f"{n_freq} frequent variables exceed the allowed {bound:.4f}", n_freq)

    report = reduce_frequent(csp, ell)
    limit = frequent_threshold(csp.k, csp.d, ell)
    for v, deg in report.reduced.degrees.items():
        if deg > limit:
            raise InvariantError(
                f"variable {v} has degree {deg} > {limit:.4f} after reduction")

    out = resample_solve(report.reduced, seed, max_resamples, backend=backend)
    if not out.satisfied:
        return SolveOutcome(out.status, None, out.resamples, method="sparse-frequent")
    alpha = _complete(csp, out.assignment)
    return _verified(csp, SolveOutcome(Status.SATISFIED, alpha, out.resamples,
                                       method="sparse-frequent"))


# -- exact oracles -------------------------------------------------------------


def two_sat_solve(csp: Csp) -> SolveOutcome:
    """Exact decision for (2, 2)-CSPs through the implication graph.

    Node ``(x, b)`` stands for "x takes value b". Constraint
    ``{x != a, y != b}`` yields edges (x, a) -> (y, 1-b) and
    (y, b) -> (x, 1-a). Unsatisfiable iff some (x, 0) and (x, 1) share a
    strongly connected component.
    """
    if csp.k != 2 or csp.d != 2:
        raise ParameterError(f"implication-graph path needs k = d = 2, got k={csp.k}, d={csp.d}")
    g = nx.DiGraph()
    for v in csp.vbl:
        g.add_node((v, 0))
        g.add_node((v, 1))
    for c in csp.constraints:
        (x, a), (y, b) = c.literals
        g.add_edge((x, a), (y, 1 - b))
        g.add_edge((y, b), (x, 1 - a))
    cond = nx.condensation(g)
    comp = cond.graph["mapping"]
    for v in csp.vbl:
        if comp[(v, 0)] == comp[(v, 1)]:
            return SolveOutcome(Status.UNSATISFIABLE, method="two-sat")
    pos = {c: i for i, c in enumerate(nx.topological_sort(cond))}
    alpha = {v: int(pos[comp[(v, 1)]] > pos[comp[(v, 0)]]) for v in csp.vbl}
    return _verified(csp, SolveOutcome(Status.SATISFIED, _complete(csp, alpha),
                                       method="two-sat"))


def exhaustive_solve(csp: Csp, node_budget: int = DEFAULT_NODE_BUDGET,
                     *, backend: str | None = None) -> SolveOutcome:
    """Backtracking search over all d^n assignments, bounded by ``node_budget``."""
    arr = csp.arrays
    status, nodes, _, values = kernels.get(backend).backtrack(
        arr.offsets, arr.lvars, arr.lvals, arr.nv, csp.d, node_budget, False)
    if status == 0:
        alpha = _complete(csp, arr.to_assignment(values))
        return _verified(csp, SolveOutcome(Status.SATISFIED, alpha, nodes=nodes,
                                           method="exhaustive"))
    if status == 1:
        return SolveOutcome(Status.UNSATISFIABLE, nodes=nodes, method="exhaustive")
    return SolveOutcome(Status.BUDGET_EXCEEDED, nodes=nodes, method="exhaustive")


def count_solutions(csp: Csp, node_budget: int = DEFAULT_NODE_BUDGET,
                    *, backend: str | None = None) -> int:
    """Number of satisfying assignments over the variables the CSP mentions."""
    arr = csp.arrays
    status, _, count, _ = kernels.get(backend).backtrack(
        arr.offsets, arr.lvars, arr.lvals, arr.nv, csp.d, node_budget, True)
    if status == 2:
        raise PreconditionError(f"solution count needs more than {node_budget} nodes")
    return count


def oracle_solve(csp: Csp, node_budget: int = DEFAULT_NODE_BUDGET,
                 *, backend: str | None = None) -> SolveOutcome:
    """Exact answer: 2-SAT path when k = d = 2, budgeted backtracking otherwise."""
    if csp.k == 2 and csp.d == 2:
        return two_sat_solve(csp)
    return exhaustive_solve(csp, node_budget, backend=backend)


def search_space_log2(csp: Csp) -> float:
    return len(csp.vbl) * math.log2(csp.d)


__all__ = [
    "Status", "SolveOutcome", "LllReport", "ReductionReport",
    "lll_threshold", "lll_condition", "resample_solve", "reduce_frequent",
    "max_frequent_allowed", "solve_sparse_frequent", "two_sat_solve",
    "exhaustive_solve", "count_solutions", "oracle_solve",
]
