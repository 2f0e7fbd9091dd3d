from itertools import product

import pytest
from hypothesis import HealthCheck, settings

from lincsp import Csp
from lincsp.experiments import fixture_six

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# u, v, w, x = 1, 2, 3, 4
SIX_CLAUSES = [[-1, 2], [-2, 3], [-3, 4], [-4, 1], [1, 3], [-2, -4]]


@pytest.fixture
def six():
    return Csp.from_clauses(SIX_CLAUSES)


@pytest.fixture
def six_file():
    return fixture_six()


def complete_formula(k):
    """All 2^k sign patterns over variables 1..k."""
    return Csp(k, 2, [list(zip(range(1, k + 1), bits)) for bits in product((0, 1), repeat=k)])


def brute_force_count(csp):
    """Satisfying assignments over the mentioned variables, by plain enumeration."""
    vs = sorted(csp.vbl)
    total = 0
    for vals in product(range(csp.d), repeat=len(vs)):
        alpha = dict(zip(vs, vals))
        if all(any(alpha[v] != b for v, b in c.literals) for c in csp.constraints):
            total += 1
    return total


def csps_strategy(max_k=4, max_d=3, max_vars=8, max_m=12):
    """Hypothesis strategy for small valid CSPs."""
    from hypothesis import strategies as st

    @st.composite
    def build(draw):
        k = draw(st.integers(1, max_k))
        d = draw(st.integers(2, max_d))
        n = draw(st.integers(k, max_vars))
        m = draw(st.integers(0, max_m))
        cons = set()
        for _ in range(m):
            vs = draw(st.lists(st.integers(1, n), min_size=k, max_size=k, unique=True))
            vals = draw(st.lists(st.integers(0, d - 1), min_size=k, max_size=k))
            cons.add(tuple(sorted(zip(vs, vals))))
        return Csp(k, d, sorted(cons), n)

    return build()
