"""Randomized construction of unsatisfiable ell-disjoint CSPs.

Pipeline: a random-order greedy maximal ell-disjoint k-uniform hypergraph
on n vertices; its first m edges become constraints whose forbidden
values are drawn independently and uniformly; the instance is kept once
an exact solver certifies it unsatisfiable. n and m default to the
values for which the expected number of satisfying assignments,
d^n (1 - d^-k)^m, drops to at most 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from . import kernels
from .core import Constraint, Csp, frequent_threshold, frequent_variables
from .errors import ParameterError, PreconditionError, SearchFailed
from .rng import SplitMix64, derive_seed, seed_state
from .solver import (
    DEFAULT_NODE_BUDGET,
    SolveOutcome,
    Status,
    exhaustive_solve,
    two_sat_solve,
)

# Phase-A rejection streak before switching to full enumeration.
PACKING_STALL = 128
# Largest C(n, k) the builder will enumerate to certify maximality.
ENUMERATION_LIMIT = 5 * 10**7
MAX_VERTICES = 10**6
VERIFY_MODES = ("oracle", "two_sat", "none")


def _check_nkl(n: int, k: int, ell: int) -> None:
    if not (1 <= ell <= k <= n):
        raise ParameterError(f"need 1 <= ell <= k <= n, got n={n}, k={k}, ell={ell}")


@dataclass(frozen=True)
class Hypergraph:
    """k-uniform hypergraph on vertices 1..n; ``edges`` rows are sorted."""

    n: int
    k: int
    edges: np.ndarray
    maximal: bool = False
    ell: int | None = None

    def __len__(self) -> int:
        return len(self.edges)

    def edge_sets(self) -> list[tuple[int, ...]]:
        return [tuple(row) for row in self.edges.tolist()]

    def find_overlap(self, ell: int, backend: str | None = None) -> tuple[int, int] | None:
        """A pair of edges sharing >= ell vertices, or None."""
        if len(self.edges) < 2 or ell > self.k:
            return None
        kern = kernels.for_cover(self.n, self.k, ell, backend)
        i, j = kern.find_overlap(np.ascontiguousarray(self.edges, dtype=np.int32), self.n, ell)
        return None if i < 0 else (int(i), int(j))

    def is_l_disjoint(self, ell: int) -> bool:
        return self.find_overlap(ell) is None

    def conflicts(self, kset, ell: int) -> bool:
        """Whether ``kset`` shares >= ell vertices with some edge."""
        s = set(kset)
        return any(len(s.intersection(row)) >= ell for row in self.edges.tolist())


def greedy_maximal_hypergraph(n: int, k: int, ell: int, seed: int = 0, *,
                              limit: int | None = None,
                              backend: str | None = None) -> Hypergraph:
    """Maximal ell-disjoint family of k-subsets of {1..n}, random greedy order.

    k-sets are considered in a seed-determined uniformly random order and
    kept when they share at most ell - 1 vertices with every kept set.
    With ``limit`` the pass stops after that many edges (edges come out in
    acceptance order, so the result is a prefix of the unlimited run) and
    maximality is not certified.
    """
    _check_nkl(n, k, ell)
    if n > MAX_VERTICES:
        raise ParameterError(f"n={n} exceeds the supported {MAX_VERTICES} vertices")
    total = comb(n, k)
    can_enumerate = total <= ENUMERATION_LIMIT
    if limit is None and not can_enumerate:
        raise ParameterError(
            f"certifying maximality needs all C({n},{k}) = {total} k-sets; pass limit=")
    kern = kernels.for_cover(n, k, ell, backend)
    stall = 0 if ell == k else PACKING_STALL
    if not can_enumerate:
        stall = max(stall, 1 << 20)
    edges, maximal, _ = kern.greedy_packing(
        n, k, ell, seed_state(seed), -1 if limit is None else limit, stall, can_enumerate)
    return Hypergraph(n, k, edges, bool(maximal), ell)


def hypergraph_size_lower_bound(n: int, k: int, ell: int) -> int:
    """ceil(C(n, ell) / C(k, ell)^2), exactly."""
    _check_nkl(n, k, ell)
    return -(-comb(n, ell) // comb(k, ell) ** 2)


def simplified_size_bound(n: int, k: int, ell: int) -> float:
    """n^ell (ell / (e k^2))^ell, the weaker closed form of the size bound."""
    return math.exp(ell * (math.log(n) + math.log(ell) - 1.0 - 2 * math.log(k)))


def _check_kdl(k: int, d: int, ell: int) -> None:
    if not 2 <= ell <= k:
        raise ParameterError(f"need 2 <= ell <= k, got k={k}, ell={ell}")
    if d < 2:
        raise ParameterError(f"need d >= 2, got d={d}")


def choose_n(k: int, d: int, ell: int) -> int:
    """ceil((e k^2/ell)^(ell/(ell-1)) (ln(d) d^k)^(1/(ell-1)))."""
    _check_kdl(k, d, ell)
    log_n = (ell / (ell - 1)) * (1.0 + 2 * math.log(k) - math.log(ell)) + (
        math.log(math.log(d)) + k * math.log(d)) / (ell - 1)
    return math.ceil(math.exp(log_n))


def required_m(n: int, k: int, d: int) -> int:
    """ceil(ln(d) n d^k): enough constraints for expected #solutions <= 1."""
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    if n == 0:
        return 0
    return math.ceil(math.log(d) * n * d**k)


def instantiate_random(h: Hypergraph, d: int, seed: int = 0) -> Csp:
    """One constraint per edge, each literal forbidding a uniform value.

    Values are drawn edge by edge, vertex by vertex (ascending).
    """
    if d < 2:
        raise ParameterError(f"need d >= 2, got d={d}")
    g = SplitMix64(seed_state(seed))
    cons = []
    for row in h.edges.tolist():
        cons.append(Constraint((v, g.below(d)) for v in row))
    return Csp(h.k, d, cons, h.n)


@dataclass(frozen=True)
class ExpectedCount:
    """d^n (1 - d^-k)^m and its exponential upper bound, with natural logs."""

    log_exact: float
    log_upper: float

    @property
    def exact(self) -> float:
        return _safe_exp(self.log_exact)

    @property
    def upper(self) -> float:
        return _safe_exp(self.log_upper)


def _safe_exp(x: float) -> float:
    return math.inf if x > 709.0 else math.exp(x)


def expected_sat_count(n: int, m: int, k: int, d: int) -> ExpectedCount:
    """Expected number of satisfying assignments of a random instantiation."""
    log_exact = n * math.log(d) + m * math.log1p(-float(d) ** -k)
    log_upper = n * math.log(d) - m * float(d) ** -k
    return ExpectedCount(log_exact, log_upper)


def expected_sat_count_exact(n: int, m: int, k: int, d: int) -> Fraction:
    """Same quantity as an exact rational."""
    return Fraction(d) ** n * (1 - Fraction(1, d**k)) ** m


@dataclass
class GenParams:
    k: int = 2
    d: int = 2
    ell: int = 2
    n: int | None = None
    m: int | None = None
    seed: int = 0
    trials: int = 200
    verify: str = "two_sat"
    overshoot: float = 1.0
    node_budget: int = DEFAULT_NODE_BUDGET

    def resolved(self) -> tuple[int, int]:
        _check_kdl(self.k, self.d, self.ell)
        if self.verify not in VERIFY_MODES:
            raise ParameterError(f"verify must be one of {VERIFY_MODES}, got {self.verify!r}")
        if self.overshoot <= 0:
            raise ParameterError("overshoot must be positive")
        n = self.n if self.n is not None else choose_n(self.k, self.d, self.ell)
        if n < self.k:
            raise ParameterError(f"need n >= k, got n={n}")
        m = self.m if self.m is not None else math.ceil(required_m(n, self.k, self.d) * self.overshoot)
        if m < 0:
            raise ParameterError("m must be >= 0")
        return n, m


@dataclass
class TrialOutcome:
    trial: int
    seed: int
    edges: int
    status: Status | None


@dataclass
class UnsatResult:
    csp: Csp
    trials: int
    expected: ExpectedCount
    n: int
    m: int
    verified: bool
    outcomes: list[TrialOutcome] = field(default_factory=list)


def _verifier(params: GenParams, n: int):
    if params.verify == "two_sat":
        if params.k != 2 or params.d != 2:
            raise PreconditionError("two_sat verification needs k = d = 2")
        return two_sat_solve
    if params.verify == "oracle":
        if n * math.log2(params.d) > 64:
            raise PreconditionError(
                f"exhaustive verification over {params.d}^{n} assignments is infeasible")
        if params.k == 2 and params.d == 2:
            return two_sat_solve
        return lambda csp: exhaustive_solve(csp, params.node_budget)
    return None


def search_unsat(params: GenParams) -> UnsatResult:
    """Draw instances until one is certified unsatisfiable.

    Trial t uses sub-seeds derived from (seed, t); the first successful
    trial wins. With ``verify="none"`` the first instance is returned
    unverified.
    """
    n, m = params.resolved()
    verify = _verifier(params, n)
    expected = expected_sat_count(n, m, params.k, params.d)
    outcomes: list[TrialOutcome] = []
    for t in range(max(params.trials, 1)):
        tseed = derive_seed(params.seed, t)
        h = greedy_maximal_hypergraph(n, params.k, params.ell, derive_seed(tseed, 0), limit=m)
        if len(h) < m:
            raise ParameterError(
                f"m={m} exceeds the {len(h)} edges of a maximal {params.ell}-disjoint "
                f"{params.k}-uniform hypergraph on {n} vertices")
        csp = instantiate_random(h, params.d, derive_seed(tseed, 1))
        if verify is None:
            outcomes.append(TrialOutcome(t, tseed, len(h), None))
            return UnsatResult(csp, t + 1, expected, n, m, False, outcomes)
        out: SolveOutcome = verify(csp)
        outcomes.append(TrialOutcome(t, tseed, len(h), out.status))
        if out.status is Status.UNSATISFIABLE:
            if verify(csp).status is not Status.UNSATISFIABLE:
                raise AssertionError("verification is not deterministic")
            return UnsatResult(csp, t + 1, expected, n, m, True, outcomes)
    raise SearchFailed(
        f"no unsatisfiable instance in {len(outcomes)} trials "
        f"(n={n}, m={m}, expected #sat={expected.exact:.3g})", outcomes)


# -- instance families used by tests, benchmarks and the CLI -------------------


def random_csp(n_vars: int, m: int, k: int, d: int, seed: int = 0,
               max_degree: int | None = None, ell: int | None = None,
               max_attempts: int = 100) -> Csp:
    """Uniform random constraints, optionally degree-capped and ell-disjoint.

    Candidates violating a cap are redrawn; gives up on a constraint after
    ``max_attempts`` tries, so fewer than ``m`` constraints may result.
    """
    if k > n_vars:
        raise ParameterError(f"need k <= n_vars, got k={k}, n_vars={n_vars}")
    g = SplitMix64(seed_state(seed))
    deg = [0] * (n_vars + 1)
    used: set = set()
    seen: set = set()
    cons: list[Constraint] = []
    for _ in range(m):
        for _ in range(max_attempts):
            chosen: set[int] = set()
            for j in range(n_vars - k, n_vars):
                t = g.below(j + 1)
                chosen.add(j if t in chosen else t)
            vs = sorted(v + 1 for v in chosen)
            c = Constraint((v, g.below(d)) for v in vs)
            if c in seen:
                continue
            if max_degree is not None and any(deg[v] >= max_degree for v in vs):
                continue
            if ell is not None:
                subs = list(combinations(vs, ell))
                if any(s in used for s in subs):
                    continue
                used.update(subs)
            for v in vs:
                deg[v] += 1
            seen.add(c)
            cons.append(c)
            break
    return Csp(k, d, cons, n_vars)


def sparse_frequent_instance(k: int, d: int, ell: int, n_frequent: int, seed: int = 0,
                             hub_degree: int | None = None, filler: int = 0) -> Csp:
    """ell-disjoint CSP with exactly ``n_frequent`` frequent variables.

    Variables 1..n_frequent are hubs of degree ``hub_degree`` (default:
    one above the frequency threshold). Hub constraints take up to
    ell - 1 other hubs at random (keeping them below ell frequent
    variables) or, with probability 1/4, enough hubs to reach ell; the
    rest of each constraint is fresh variables. ``filler`` extra
    constraints over fresh variables pad the instance.
    """
    _check_kdl(k, d, ell)
    thr = frequent_threshold(k, d, ell)
    if hub_degree is None:
        hub_degree = math.floor(thr) + 1
    if hub_degree <= thr:
        raise ParameterError(f"hub_degree {hub_degree} is not above threshold {thr:.4f}")
    g = SplitMix64(seed_state(seed))
    nxt = n_frequent + 1
    deg = [0] * (n_frequent + 1)
    used: set = set()
    cons: list[Constraint] = []

    def fresh(count):
        nonlocal nxt
        out = list(range(nxt, nxt + count))
        nxt += count
        return out

    for h in range(1, n_frequent + 1):
        attempts = 0
        while deg[h] < hub_degree:
            attempts += 1
            if attempts > 1000 * hub_degree:
                raise ParameterError("could not place hub constraints; lower n_frequent")
            others = [x for x in range(1, n_frequent + 1) if x != h and deg[x] < hub_degree]
            want = g.below(ell) if g.below(4) else ell - 1
            want = min(want, len(others), k - 1)
            picked: list[int] = []
            pool = list(others)
            for _ in range(want):
                picked.append(pool.pop(g.below(len(pool))))
            hubs = sorted([h] + picked)
            subs = set(combinations(hubs, ell)) if len(hubs) >= ell else set()
            # pairs/ell-sets among hubs must be new; fresh vars never collide
            if subs & used:
                continue
            used |= subs
            vs = hubs + fresh(k - len(hubs))
            for x in hubs:
                deg[x] += 1
            cons.append(Constraint((v, g.below(d)) for v in vs))
    for _ in range(filler):
        cons.append(Constraint((v, g.below(d)) for v in fresh(k)))
    csp = Csp(k, d, cons, nxt - 1)
    if len(frequent_variables(csp, ell)) != n_frequent:
        raise AssertionError("hub construction produced the wrong frequent set")
    return csp


__all__ = [
    "Hypergraph", "greedy_maximal_hypergraph", "hypergraph_size_lower_bound",
    "simplified_size_bound", "choose_n", "required_m", "instantiate_random",
    "ExpectedCount", "expected_sat_count", "expected_sat_count_exact", "GenParams",
    "TrialOutcome", "UnsatResult", "search_unsat", "random_csp",
    "sparse_frequent_instance",
]
