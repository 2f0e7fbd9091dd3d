import math
import random
from fractions import Fraction
from itertools import combinations, product
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_force_count
from lincsp import (
    Csp,
    GenParams,
    Hypergraph,
    ParameterError,
    PreconditionError,
    SearchFailed,
    Status,
    check_l_disjoint,
    count_solutions,
    expected_sat_count,
    greedy_maximal_hypergraph,
    hypergraph_size_lower_bound,
    instantiate_random,
    oracle_solve,
    search_unsat,
)
from lincsp.generator import (
    choose_n,
    expected_sat_count_exact,
    random_csp,
    required_m,
    simplified_size_bound,
)


def _edges(rows, n, k):
    return Hypergraph(n, k, np.array(rows, dtype=np.int32).reshape(-1, k))


def test_greedy_examples():
    h = greedy_maximal_hypergraph(4, 2, 2, seed=3)
    assert sorted(h.edge_sets()) == list(combinations(range(1, 5), 2))
    for seed in range(10):
        assert len(greedy_maximal_hypergraph(9, 3, 2, seed)) >= 4
    h = greedy_maximal_hypergraph(5, 5, 3, seed=1)
    assert h.edge_sets() == [(1, 2, 3, 4, 5)] and h.maximal


def test_greedy_errors():
    with pytest.raises(ParameterError):
        greedy_maximal_hypergraph(3, 4, 2)
    with pytest.raises(ParameterError):
        greedy_maximal_hypergraph(9, 3, 4)


def test_greedy_is_deterministic_and_seed_sensitive():
    a = greedy_maximal_hypergraph(20, 4, 2, seed=7).edge_sets()
    assert a == greedy_maximal_hypergraph(20, 4, 2, seed=7).edge_sets()
    assert a != greedy_maximal_hypergraph(20, 4, 2, seed=8).edge_sets()


def test_greedy_limit_is_prefix():
    full = greedy_maximal_hypergraph(25, 3, 2, seed=2)
    part = greedy_maximal_hypergraph(25, 3, 2, seed=2, limit=10)
    assert len(part) == 10 and not part.maximal
    assert part.edge_sets() == full.edge_sets()[:10]


@pytest.mark.parametrize("n,k,ell", [(12, 3, 2), (15, 4, 2), (14, 4, 3), (30, 3, 2), (10, 5, 4)])
def test_greedy_maximality_spot_check(n, k, ell):
    h = greedy_maximal_hypergraph(n, k, ell, seed=n + k + ell)
    assert h.maximal and h.is_l_disjoint(ell)
    assert len(h) >= hypergraph_size_lower_bound(n, k, ell)
    chosen = set(h.edge_sets())
    rng = random.Random(n * 100 + k)
    for _ in range(1000):
        s = tuple(sorted(rng.sample(range(1, n + 1), k)))
        assert s in chosen or h.conflicts(s, ell)


def test_greedy_exhaustive_maximality_small():
    h = greedy_maximal_hypergraph(10, 3, 2, seed=0)
    for s in combinations(range(1, 11), 3):
        assert s in set(h.edge_sets()) or h.conflicts(s, 2)


def test_find_overlap():
    h = _edges([[1, 2, 3], [3, 4, 5], [1, 3, 6]], 6, 3)
    assert h.find_overlap(2) == (0, 2)
    assert h.find_overlap(3) is None


def test_size_lower_bound_examples():
    assert hypergraph_size_lower_bound(4, 2, 2) == 6
    assert hypergraph_size_lower_bound(9, 3, 2) == 4
    for k in range(1, 6):
        assert hypergraph_size_lower_bound(k, k, 1) == 1
    # exact integer arithmetic far beyond float precision
    assert hypergraph_size_lower_bound(10**6, 3, 2) == -(-comb(10**6, 2) // 9)


def test_simplified_bound_chain():
    for n in range(2, 31):
        for k in range(2, min(n, 6) + 1):
            for ell in range(2, k + 1):
                assert hypergraph_size_lower_bound(n, k, ell) >= simplified_size_bound(n, k, ell)


def test_choose_n_examples():
    assert choose_n(2, 2, 2) == 82
    expect = math.ceil((9 * math.e / 2) ** 2 * 8 * math.log(2))
    assert choose_n(3, 2, 2) == expect == 830
    with pytest.raises(ParameterError):
        choose_n(2, 2, 3)


def test_required_m_examples():
    assert required_m(82, 2, 2) == 228
    assert required_m(1, 1, 2) == 2
    assert required_m(0, 5, 2) == 0


def test_instantiate_examples():
    empty = _edges([], 5, 2)
    assert len(instantiate_random(empty, 2, seed=1)) == 0
    h = _edges([[1, 2], [2, 3]], 3, 2)
    with pytest.raises(ParameterError):
        instantiate_random(h, 1)
    assert instantiate_random(h, 3, seed=9) == instantiate_random(h, 3, seed=9)
    f = instantiate_random(greedy_maximal_hypergraph(12, 3, 2, seed=1), 3, seed=2)
    assert check_l_disjoint(f, 2)[0] and f.d == 3


def test_instantiate_is_roughly_uniform():
    h = greedy_maximal_hypergraph(40, 2, 2, seed=0)
    f = instantiate_random(h, 3, seed=0)
    counts = np.bincount([b for c in f for _, b in c.literals], minlength=3)
    assert counts.min() > 0.8 * counts.sum() / 3


def test_expected_count_examples():
    e = expected_sat_count(3, 2, 2, 2)
    assert e.exact == pytest.approx(4.5)
    assert expected_sat_count_exact(3, 2, 2, 2) == Fraction(9, 2)
    assert expected_sat_count(5, 0, 3, 3).exact == pytest.approx(3**5)
    big = expected_sat_count(82, 228, 2, 2)
    assert big.log_exact == pytest.approx(-8.7534, abs=1e-3)
    assert 1.5e-4 < big.exact < 1.7e-4
    huge = expected_sat_count(5000, 1, 2, 2)
    assert math.isinf(huge.exact) and huge.log_exact > 3000


@given(st.integers(0, 200), st.integers(0, 2000), st.integers(1, 6), st.integers(2, 5))
def test_expected_exact_below_upper(n, m, k, d):
    e = expected_sat_count(n, m, k, d)
    assert e.log_exact <= e.log_upper + 1e-9


@pytest.mark.parametrize("n,k,d,rows", [
    (3, 2, 2, [[1, 2], [2, 3]]),
    (4, 2, 2, [[1, 2], [3, 4], [1, 3]]),
    (3, 2, 3, [[1, 2], [2, 3]]),
    (4, 3, 3, [[1, 2, 3], [2, 3, 4]]),
    (4, 2, 3, [[1, 2], [2, 3], [3, 4]]),
])
def test_mean_count_over_all_instantiations(n, k, d, rows):
    total = 0
    points = list(product(range(d), repeat=k))
    for choice in product(points, repeat=len(rows)):
        f = Csp(k, d, [list(zip(r, vals)) for r, vals in zip(rows, choice)], n)
        total += brute_force_count(f)
    mean = Fraction(total, len(points) ** len(rows))
    assert mean == expected_sat_count_exact(n, len(rows), k, d)


def test_search_unsat_paper_parameters():
    res = search_unsat(GenParams(seed=1))
    assert (res.n, res.m) == (82, 228)
    assert res.verified and res.trials >= 1
    assert oracle_solve(res.csp).status is Status.UNSATISFIABLE
    assert check_l_disjoint(res.csp, 2)[0]
    assert res.expected.exact < 1


def test_search_unsat_is_deterministic():
    a = search_unsat(GenParams(seed=5))
    b = search_unsat(GenParams(seed=5))
    assert a.csp == b.csp and a.trials == b.trials


def test_search_unsat_verify_none():
    res = search_unsat(GenParams(seed=2, verify="none"))
    assert not res.verified and res.trials == 1
    assert res.outcomes[0].status is None


def test_search_unsat_oracle_mode_small():
    res = search_unsat(GenParams(k=3, d=2, ell=3, n=7, m=35, seed=0, verify="oracle"))
    assert res.verified and count_solutions(res.csp) == 0


def test_search_unsat_errors():
    with pytest.raises(PreconditionError):
        search_unsat(GenParams(k=3, d=2, ell=2, verify="oracle"))
    with pytest.raises(PreconditionError):
        search_unsat(GenParams(k=3, d=2, ell=2, verify="two_sat"))
    with pytest.raises(ParameterError):
        search_unsat(GenParams(n=6, m=100))
    with pytest.raises(ParameterError):
        search_unsat(GenParams(verify="maybe"))
    with pytest.raises(SearchFailed) as info:
        search_unsat(GenParams(n=82, m=20, trials=3))
    assert len(info.value.outcomes) == 3


def test_search_unsat_exceeds_lower_bound():
    from lincsp import bound_ml
    res = search_unsat(GenParams(seed=3))
    assert len(res.csp) > bound_ml(2, 2, 2).lower


@given(st.integers(3, 20), st.integers(2, 4), st.integers(0, 2**32))
def test_random_csp_respects_caps(n, k, seed):
    if k > n:
        return
    f = random_csp(n, 30, k, 2, seed=seed, max_degree=3, ell=2)
    assert max(f.degrees.values(), default=0) <= 3
    assert check_l_disjoint(f, 2)[0]
