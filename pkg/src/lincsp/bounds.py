"""Closed-form size bounds for unsatisfiable ell-disjoint (k, d)-CSPs.

Every formula is evaluated in natural-log space, so k in the thousands
does not overflow; the ``log_*`` fields hold the logs and the plain
fields hold ``exp`` of them (``inf`` past the float range).

The upper bound holds only up to a multiplicative constant that is never
pinned down; reports give the bare expression (constant taken as 1) and
say so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError

UPPER_CONSTANT_NOTE = "x c (unspecified constant)"


def _exp(x: float) -> float:
    return math.inf if x > 709.0 else math.exp(x)


@dataclass(frozen=True)
class BoundReport:
    k: int
    d: int
    ell: int
    log_lower: float
    log_upper: float
    log_frequent_threshold: float
    log_max_frequent: float
    upper_note: str = UPPER_CONSTANT_NOTE

    @property
    def lower(self) -> float:
        return _exp(self.log_lower)

    @property
    def upper(self) -> float:
        return _exp(self.log_upper)

    @property
    def frequent_threshold(self) -> float:
        return _exp(self.log_frequent_threshold)

    @property
    def max_frequent(self) -> float:
        return _exp(self.log_max_frequent)


def bound_ml(k: int, d: int, ell: int) -> BoundReport:
    """Lower and upper bounds on the largest always-satisfiable size.

    lower = (1/k) (d^k / (e d^(ell-1) k))^(1 + 1/(ell-1))
    upper = (e k^2 ln(d) d^k / ell)^(1 + 1/(ell-1))      (times c)
    """
    if not 2 <= ell <= k:
        raise ParameterError(f"need 2 <= ell <= k, got k={k}, ell={ell}")
    if d < 2:
        raise ParameterError(f"need d >= 2, got d={d}")
    ln_d = math.log(d)
    expo = 1.0 + 1.0 / (ell - 1)
    log_thr = (k - ell + 1) * ln_d - 1.0 - math.log(k)
    log_lower = -math.log(k) + expo * log_thr
    log_upper = expo * (1.0 + 2 * math.log(k) - math.log(ell) + math.log(ln_d) + k * ln_d)
    return BoundReport(k, d, ell, log_lower, log_upper, log_thr, log_thr / (ell - 1))


@dataclass(frozen=True)
class LinearBounds:
    k: int
    log_lower: float
    log_upper: float
    log_upper_ln2: float

    @property
    def lower(self) -> float:
        return _exp(self.log_lower)

    @property
    def upper(self) -> float:
        return _exp(self.log_upper)

    @property
    def upper_ln2(self) -> float:
        """ln(2) k^4 4^k, a slightly tighter form of the upper bound."""
        return _exp(self.log_upper_ln2)


def linear_bounds(k: int) -> LinearBounds:
    """4^k / (4 e^2 k^3) <= m(k) < k^4 4^k for linear k-CNF formulas."""
    if k < 2:
        raise ParameterError(f"need k >= 2, got k={k}")
    ln4 = math.log(4)
    log_lower = k * ln4 - math.log(4) - 2.0 - 3 * math.log(k)
    log_upper = 4 * math.log(k) + k * ln4
    return LinearBounds(k, log_lower, log_upper, log_upper + math.log(math.log(2)))


def linear_upper_exact(k: int) -> int:
    return k**4 * 4**k


def complete_formula_size(k: int, d: int = 2) -> int:
    """d^k: size of the CSP forbidding every point of k variables."""
    if k < 0 or d < 2:
        raise ParameterError(f"need k >= 0 and d >= 2, got k={k}, d={d}")
    return d**k


@dataclass(frozen=True)
class PszSize:
    k: int
    log2: int
    exact: int | None  # None once the value is too large to materialize


EXACT_PSZ_MAX = 3
LOG2_PSZ_MAX = 5


def psz_size(k: int) -> PszSize:
    """Size recursion m(0) = 1, m(k+1) = m(k) 2^m(k), tracked as log2.

    log2 m(k+1) = log2 m(k) + m(k). Exact values are kept up to k = 3
    (2048). log2 m(5) = 2059 + 2^2059 is still an exact integer; log2 m(6)
    would need m(5) itself, so k > 5 raises.
    """
    if not 0 <= k <= LOG2_PSZ_MAX:
        raise ParameterError(f"psz_size supports 0 <= k <= {LOG2_PSZ_MAX}, got {k}")
    lg = 0
    for _ in range(k):
        lg += 1 << lg
    return PszSize(k, lg, (1 << lg) if k <= EXACT_PSZ_MAX else None)
