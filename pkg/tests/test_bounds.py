import math

import pytest

from lincsp import ParameterError, bound_ml, complete_formula_size, linear_bounds, psz_size
from lincsp.bounds import linear_upper_exact


def _lower(k, d, ell):
    return (1 / k) * (d**k / (math.e * d ** (ell - 1) * k)) ** (1 + 1 / (ell - 1))


def _upper(k, d, ell):
    return (math.e * k * k * math.log(d) * d**k / ell) ** (1 + 1 / (ell - 1))


def test_bound_ml_examples():
    assert bound_ml(3, 2, 2).lower == pytest.approx((1 / 3) * (8 / (6 * math.e)) ** 2)
    assert bound_ml(3, 2, 2).lower == pytest.approx(0.0802, abs=1e-4)
    rep = bound_ml(10, 2, 2)
    assert rep.frequent_threshold == pytest.approx(18.84, abs=5e-3)
    assert rep.max_frequent == pytest.approx(rep.frequent_threshold)
    with pytest.raises(ParameterError):
        bound_ml(3, 2, 1)
    with pytest.raises(ParameterError):
        bound_ml(3, 1, 2)


@pytest.mark.parametrize("k,d,ell", [(3, 2, 2), (5, 3, 2), (6, 2, 3), (8, 4, 5), (12, 2, 12)])
def test_bound_ml_matches_direct_formula(k, d, ell):
    rep = bound_ml(k, d, ell)
    assert rep.lower == pytest.approx(_lower(k, d, ell), rel=1e-12)
    assert rep.upper == pytest.approx(_upper(k, d, ell), rel=1e-12)
    thr = d**k / (math.e * d ** (ell - 1) * k)
    assert rep.frequent_threshold == pytest.approx(thr, rel=1e-12)
    assert rep.max_frequent == pytest.approx(thr ** (1 / (ell - 1)), rel=1e-12)
    assert "c" in rep.upper_note


def test_bound_ml_grid_order_and_monotonicity():
    for d in (2, 3, 5):
        for ell in (2, 3, 4):
            prev = None
            for k in range(max(ell, 2), 40):
                rep = bound_ml(k, d, ell)
                assert rep.log_lower <= rep.log_upper
                if prev is not None:
                    assert rep.log_lower > prev.log_lower
                    assert rep.log_upper > prev.log_upper
                prev = rep


def test_bound_ml_large_k_stays_in_log_space():
    rep = bound_ml(1000, 2, 2)
    assert math.isfinite(rep.log_lower) and math.isinf(rep.lower)
    assert rep.log_lower < rep.log_upper


def test_linear_bounds_examples():
    assert linear_bounds(2).lower == pytest.approx(16 / (32 * math.e**2))
    assert linear_bounds(2).lower < 5  # consistent with m(2) = 5
    assert linear_upper_exact(3) == 5184
    assert linear_bounds(3).upper == pytest.approx(5184)
    assert linear_bounds(3).lower == pytest.approx(0.0802, abs=1e-4)
    assert linear_bounds(3).upper_ln2 == pytest.approx(math.log(2) * 5184)
    with pytest.raises(ParameterError):
        linear_bounds(1)


def test_linear_specialization_identity():
    for k in range(2, 31):
        a, b = bound_ml(k, 2, 2).lower, linear_bounds(k).lower
        assert abs(a - b) <= 1e-12 * b


def test_complete_formula_size_examples():
    assert complete_formula_size(3, 2) == 8
    assert complete_formula_size(0) == 1
    assert complete_formula_size(2, 3) == 9
    with pytest.raises(ParameterError):
        complete_formula_size(2, 1)


def test_psz_values():
    assert [psz_size(k).exact for k in range(4)] == [1, 2, 8, 2048]
    assert psz_size(4).log2 == 2059 and psz_size(4).exact is None
    assert psz_size(5).log2 == 2059 + 2**2059
    with pytest.raises(ParameterError):
        psz_size(6)
    with pytest.raises(ParameterError):
        psz_size(-1)


def test_psz_against_linear_upper():
    # the recursion only overtakes k^4 4^k from k = 4 on
    assert psz_size(2).exact < linear_upper_exact(2)
    assert psz_size(3).exact < linear_upper_exact(3)
    for k in (4, 5):
        assert psz_size(k).log2 > math.log2(linear_upper_exact(k))
