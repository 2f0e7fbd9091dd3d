"""Exhaustive check that every linear 2-CNF with at most 5 clauses is satisfiable.

A linear 2-CNF is a simple graph on its variables with a sign on each
clause endpoint. Formulas are enumerated up to variable renaming and
per-variable sign flips:

* connected underlying graphs come from the networkx graph atlas (all
  graphs on <= 7 nodes, enough for <= 6 edges);
* sign patterns are first normalized against flips (the first occurrence
  of every variable, in sorted edge order, carries sign 0), then the
  lexicographically smallest image under the graph's automorphisms is
  kept;
* a disconnected formula is a multiset of connected classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from itertools import product

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from .core import Csp
from .errors import ParameterError
from .formats import parse
from .solver import Status, two_sat_solve

MAX_CLAUSES_GUARD = 6

Clause = tuple[tuple[int, int], tuple[int, int]]  # ((a, value), (b, value)), a < b


def _normalize(clauses) -> tuple[Clause, ...]:
    """Flip-normalized, sorted form of a labeled signed edge list."""
    edges = sorted(((a, sa), (b, sb)) if a < b else ((b, sb), (a, sa))
                   for (a, sa), (b, sb) in clauses)
    flip: dict[int, int] = {}
    out = []
    for (a, sa), (b, sb) in edges:
        fa = flip.setdefault(a, sa)
        fb = flip.setdefault(b, sb)
        out.append(((a, sa ^ fa), (b, sb ^ fb)))
    return tuple(out)


def _connected_graphs(max_edges: int):
    for g in nx.graph_atlas_g():
        e = g.number_of_edges()
        if 1 <= e <= max_edges and nx.is_connected(g):
            yield g


def connected_classes(max_edges: int) -> list[tuple[Clause, ...]]:
    """Canonical signed connected linear 2-CNFs with 1..max_edges clauses."""
    classes = []
    for g in _connected_graphs(max_edges):
        autos = list(GraphMatcher(g, g).isomorphisms_iter())
        edges = sorted(tuple(sorted(e)) for e in g.edges())
        seen_first: set[int] = set()
        free = []  # endpoint slots not fixed by flip normalization
        for i, (a, b) in enumerate(edges):
            for j, v in enumerate((a, b)):
                if v in seen_first:
                    free.append((i, j))
                seen_first.add(v)
        found = set()
        for bits in product((0, 1), repeat=len(free)):
            signs = [[0, 0] for _ in edges]
            for (i, j), s in zip(free, bits):
                signs[i][j] = s
            base = [((a, signs[i][0]), (b, signs[i][1])) for i, (a, b) in enumerate(edges)]
            canon = min(
                _normalize(((sigma[a], sa), (sigma[b], sb)) for (a, sa), (b, sb) in base)
                for sigma in autos)
            found.add(canon)
        classes.extend(sorted(found))
    return classes


def to_csp(clauses, offset: int = 0) -> list:
    return [((a + 1 + offset, sa), (b + 1 + offset, sb)) for (a, sa), (b, sb) in clauses]


def _nvars(cls) -> int:
    return 1 + max(max(a, b) for (a, _), (b, _) in cls)


@dataclass
class MinLinearReport:
    max_clauses: int
    connected_checked: int = 0
    total_checked: int = 0
    unsatisfiable: list[Csp] = field(default_factory=list)

    @property
    def all_satisfiable(self) -> bool:
        return not self.unsatisfiable

    def summary(self) -> str:
        verdict = "all satisfiable" if self.all_satisfiable else (
            f"{len(self.unsatisfiable)} unsatisfiable, smallest has "
            f"{min(len(c) for c in self.unsatisfiable)} clauses")
        return (f"max_clauses={self.max_clauses} connected_classes={self.connected_checked} "
                f"formulas_checked={self.total_checked} verdict={verdict}")


def _multisets(sizes: list[int], budget: int, start: int = 0):
    """Non-decreasing index tuples whose sizes sum to <= budget."""
    yield ()
    for i in range(start, len(sizes)):
        if sizes[i] <= budget:
            for rest in _multisets(sizes, budget - sizes[i], i):
                yield (i,) + rest


def experiment_min_linear_2cnf(max_clauses: int = 5) -> MinLinearReport:
    """Decide every linear 2-CNF with <= max_clauses clauses (up to symmetry)."""
    if not 1 <= max_clauses <= MAX_CLAUSES_GUARD:
        raise ParameterError(f"max_clauses must be in 1..{MAX_CLAUSES_GUARD}, got {max_clauses}")
    report = MinLinearReport(max_clauses)
    classes = connected_classes(max_clauses)
    verdict = []
    for cls in classes:
        csp = Csp(2, 2, to_csp(cls))
        sat = two_sat_solve(csp).status is Status.SATISFIED
        verdict.append(sat)
        report.connected_checked += 1
        report.total_checked += 1
        if not sat:
            report.unsatisfiable.append(csp)

    sizes = [len(c) for c in classes]
    for combo in _multisets(sizes, max_clauses):
        if len(combo) < 2:
            continue
        cons, offset = [], 0
        for i in combo:
            cons.extend(to_csp(classes[i], offset))
            offset += _nvars(classes[i])
        csp = Csp(2, 2, cons)
        sat = two_sat_solve(csp).status is Status.SATISFIED
        if sat != all(verdict[i] for i in combo):
            raise AssertionError("component verdicts disagree with the union")
        report.total_checked += 1
        if not sat:
            report.unsatisfiable.append(csp)
    return report


FIXTURE_SIX = "fixture_six.csp"


def fixture_six_text() -> str:
    """The shipped six-clause unsatisfiable linear 2-CNF, as file text."""
    return resources.files("lincsp").joinpath("data", FIXTURE_SIX).read_text()


def fixture_six() -> Csp:
    return parse(fixture_six_text())
