import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wafomlab.abelian import GroupSpec
from wafomlab.enumerator import INFINITE_WEIGHT, min_dick_weight
from wafomlab.errors import PreconditionError
from wafomlab.netgen import GeneratorSet, dual, span, span_matrices, trivial_group, whole_group
from wafomlab.wafom import (
    BoundParams, alpha, evaluate, existence_bound, existence_threshold, log_b_fraction, lower_bound,
    lower_bound_threshold, min_weight_ceiling, order_constants, order_window, tail_bound, tail_exact,
    tail_exact_fraction, tail_threshold, unconditional_lower_bound, wafom_dual, wafom_exact, wafom_fast,
    wafom_log_b,
)

Z2 = GroupSpec.cyclic(2)
TWO_POINT = span(GeneratorSet(Z2, 1, 2, np.array([[[1, 1]]])))


def test_three_routes_on_examples():
    cases = [(whole_group(Z2, 1, 2), 0), (trivial_group(Z2, 1, 2), 0.875), (TWO_POINT, 0.125)]
    for pg, expected in cases:
        assert wafom_fast(pg) == expected
        assert wafom_exact(pg) == Fraction(expected)
        assert wafom_dual(dual(pg), 2) == expected
    for b, s, n in [(3, 2, 2), (4, 1, 3), (6, 1, 2)]:
        assert wafom_fast(whole_group(GroupSpec.cyclic(b), s, n)) == 0.0
        assert wafom_exact(whole_group(GroupSpec.cyclic(b), s, n)) == 0


def test_fast_route_survives_cancellation():
    # WAFOM near 2^-40 is the difference of two numbers near 1; double-double keeps it exact enough
    rng = np.random.default_rng(4)
    pg = span(GeneratorSet(Z2, 2, 10, rng.integers(0, 2, size=(16, 2, 10))))
    exact = wafom_exact(pg)
    assert abs(wafom_fast(pg) - float(exact)) <= 1e-12 * float(exact)


def test_log_scale_below_double_range():
    value = Fraction(1, 2 ** 2000) * 3
    assert log_b_fraction(value, 2) == pytest.approx(-2000 + math.log2(3), rel=1e-14)
    assert log_b_fraction(Fraction(0), 2) == -math.inf
    assert wafom_log_b(TWO_POINT) == pytest.approx(-3.0)


groups = st.sampled_from([GroupSpec.cyclic(b) for b in (2, 3, 4, 5, 6)] + [GroupSpec((2, 2)), GroupSpec((2, 3))])


def _random_pg(g, s, n, d, seed):
    rng = np.random.default_rng(seed)
    return span(GeneratorSet(g, s, n, rng.integers(0, g.order, size=(d, s, n))))


@settings(max_examples=40, deadline=None)
@given(groups, st.integers(1, 3), st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_routes_sandwich_and_anti_monotonicity(g, s, n, d, seed):
    if g.order ** (s * n) > 1 << 12:
        return
    b = g.order
    pg = _random_pg(g, s, n, d, seed)
    exact = wafom_exact(pg)
    fast, via_dual = wafom_fast(pg), wafom_dual(dual(pg), b)
    assert abs(fast - float(exact)) <= 1e-12 * max(1.0, float(exact))
    assert abs(via_dual - float(exact)) <= 1e-12 * max(1.0, float(exact))
    assert (exact == 0) == (pg.order == pg.ambient_size)
    delta = min_dick_weight(pg)
    if delta != INFINITE_WEIGHT:
        assert Fraction(1, b ** delta) <= exact <= tail_exact_fraction(b, s, n, delta)
    extra = np.random.default_rng(seed ^ 1).integers(0, b, size=(1, s, n))
    bigger = span_matrices(g, s, n, np.concatenate([pg.generators, extra]))
    assert wafom_exact(bigger) <= exact


def test_tail_exact_examples():
    for b, s, n in [(2, 1, 2), (3, 2, 2)]:
        assert tail_exact_fraction(b, s, n, 0) == wafom_exact(trivial_group(GroupSpec.cyclic(b), s, n)) + 1
        assert tail_exact(b, s, n, n * (n + 1) * s // 2 + 1) == 0


def test_tail_bound_examples():
    # reference value from 40-digit arithmetic: (1 + 2/log 2) 2^-9 e^6
    assert tail_bound(2, 1, 9, 1) == pytest.approx(3.061480923711540, rel=1e-14)
    edge = tail_threshold(2, 3, 0.5)
    assert tail_bound(2, 3, edge, 0.5) > 0
    with pytest.raises(PreconditionError, match="admissible minimum"):
        tail_bound(2, 3, edge * 0.99, 0.5)
    with pytest.raises(PreconditionError):
        tail_bound(2, 1, 9, 0)


@pytest.mark.parametrize("b, s, c", [(2, 1, 1.0), (3, 2, 0.5), (5, 1, 2.0)])
def test_tail_bound_decreasing_beyond_turning_point(b, s, c):
    start = max(tail_threshold(b, s, c), (b - 1) * s / math.log(b) ** 2)
    grid = np.linspace(start, start + 60, 200)
    values = [tail_bound(b, s, float(m), c) for m in grid]
    assert all(x >= y for x, y in zip(values, values[1:]))


@pytest.mark.parametrize("b, s, n", [(2, 1, 6), (2, 2, 4), (3, 2, 3), (5, 1, 4)])
def test_tail_exact_below_tail_bound(b, s, n):
    for c in (0.25, 1.0, 3.0):
        lo = tail_threshold(b, s, c)
        for m in np.linspace(lo, lo + 30, 40):
            assert tail_exact(b, s, n, math.ceil(m)) <= tail_bound(b, s, float(m), c)


def test_lower_bound_examples():
    assert lower_bound_threshold(1.0) == pytest.approx(3.5615528128088303, rel=1e-14)
    assert lower_bound(2, 1, 4, 1.0) == 2.0 ** -16
    with pytest.raises(PreconditionError, match="threshold"):
        lower_bound(2, 1, 3, 1.0)
    with pytest.raises(PreconditionError):
        lower_bound_threshold(0.5)
    assert min_weight_ceiling(1, 2) == 6
    assert unconditional_lower_bound(2, 1, 2) == 2.0 ** -6
    assert unconditional_lower_bound(3, 1, 2) == 3.0 ** -6


def test_existence_bound_examples():
    assert alpha(2) == pytest.approx(0.34657359027997264)
    assert alpha(6) == alpha(2)
    assert alpha(9) == pytest.approx(math.log(3) / 2)
    assert existence_threshold(2, 1, alpha(2), 1.0) == pytest.approx(8.325475924022431)
    # 40-digit reference values
    assert existence_bound(2, 2, 1, 9) == pytest.approx(2.343859215332756, rel=1e-14)
    assert existence_bound(2, 2, 2, 17) == pytest.approx(3.034995380237982, rel=1e-14)
    with pytest.raises(PreconditionError, match="admissible"):
        existence_bound(2, 2, 1, 8)
    with pytest.raises(PreconditionError, match="smallest prime"):
        existence_bound(6, 3, 1, 30)
    with pytest.raises(PreconditionError, match="A ="):
        existence_bound(2, 2, 1, 30, A=0.5)


def test_existence_bound_with_smaller_A_needs_more_d():
    A = alpha(2) / 2
    need = existence_threshold(2, 1, A, 1.0)
    assert need == pytest.approx(2 * existence_threshold(2, 1, alpha(2), 1.0))
    assert existence_bound(2, 2, 1, math.ceil(need), A=A) > 0


def test_order_constants_for_base_two():
    D, E, c, C = order_constants(2)
    assert D == alpha(2)
    # 30-digit reference for 2 / (log 2)^2
    assert (2 - 1) / (D * math.log(2)) == pytest.approx(4.162737962011215, rel=1e-14)
    assert E == 5
    assert E == pytest.approx((1 + c) * (2 - 1) / (D * math.log(2)))
    assert c == pytest.approx(0.2011325347955035)
    assert C == pytest.approx(0.5 + 0.3 + 0.04)


@pytest.mark.parametrize("b", [2, 3, 4, 5, 6])
def test_order_window_nonempty_and_shifts_down(b):
    D, E, c, C = order_constants(b)
    for s in (1, 2, 3):
        prev = None
        for d in range(E * s, E * s + 6 * s, s):
            w = order_window(b, s, d)
            assert w.lower_exponent <= w.upper_exponent
            if prev is not None:
                assert w.lower_exponent < prev.lower_exponent and w.upper_exponent < prev.upper_exponent
            prev = w
    with pytest.raises(PreconditionError):
        order_window(b, 1, E - 1)


def test_bound_params_validation():
    assert BoundParams().alpha_b == alpha(2)
    for bad in ({"c": 0}, {"C": 0.5}, {"A": 1.0}):
        with pytest.raises(PreconditionError):
            BoundParams(**bad)


def test_report_fields():
    rep = evaluate(TWO_POINT, exact=True, with_min_weight=True, seed=5)
    out = rep.to_json_dict()
    assert out["wafom"] == 0.125 and out["wafom_fraction"] == "1/8" and out["min_weight"] == 3
    assert out["method"] == "exact-rational" and out["seed"] == 5 and out["log_num_points"] == 1.0
    assert set(out) >= {"base", "moduli", "s", "n", "log_num_points", "wafom", "wafom_log_b", "method",
                        "min_weight", "lower_bound", "existence_bound", "seed"}
    whole = evaluate(whole_group(Z2, 1, 2), with_min_weight=True).to_json_dict()
    assert whole["wafom"] == 0 and whole["wafom_log_b"] == "-inf" and whole["min_weight"] == "inf"
    assert whole["lower_bound"] is None
