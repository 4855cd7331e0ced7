import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from condrenyi.bound import (
    check_continuity_bound,
    f_step_e,
    g_mono,
    gamma,
    max_eps,
    shannon_limit_bound,
)
from condrenyi.errors import AlphaOutOfRange, EpsOutOfRange, ParamOutOfRange, TvBudgetExceeded
from condrenyi.prob_core import sample_pair_within_tv
from condrenyi.tightness import extremal_pair

from conftest import ALPHA_GRID


def test_gamma_examples():
    assert gamma(0.5, 0.5, 2) == pytest.approx(1.0, abs=1e-12)
    for d in range(2, 7):
        for a in ALPHA_GRID:
            assert gamma(a, max_eps(d), d) == pytest.approx(math.log2(d), abs=1e-12)
            assert gamma(a, 0, d) == 0


def test_gamma_errors():
    with pytest.raises(AlphaOutOfRange):
        gamma(1.0, 0.1, 2)
    with pytest.raises(EpsOutOfRange):
        gamma(0.5, 0.6, 2)
    with pytest.raises(ParamOutOfRange):
        gamma(0.5, 0.1, 1)
    # the edge tolerance admits rounding right at the top of the range
    assert gamma(0.5, 2 / 3 + 1e-13, 3) == pytest.approx(math.log2(3))


def test_alpha_zero_is_log_d_for_positive_eps():
    assert gamma(0, 0.01, 5) == pytest.approx(math.log2(5))


def test_shannon_limit_examples():
    assert shannon_limit_bound(0.25, 2) == pytest.approx(0.8112781244591328, abs=1e-12)
    assert shannon_limit_bound(0, 4) == 0
    with pytest.raises(EpsOutOfRange):
        shannon_limit_bound(0.9, 2)


@pytest.mark.parametrize("d", [2, 3, 5, 8])
@pytest.mark.parametrize("eps_frac", [0.1, 0.5, 1.0])
def test_gamma_near_one_matches_shannon(d, eps_frac):
    e = eps_frac * max_eps(d)
    assert abs(gamma(1 - 1e-4, e, d) - shannon_limit_bound(e, d)) <= 1e-2


def test_f_step_e_plug_in():
    # at t~ = 1 - 1/d and u = 1 - t~ the value is (1 - a) log2 d
    for d in range(2, 7):
        t = max_eps(d)
        for a in ALPHA_GRID:
            assert f_step_e(1 - t, a, d, t) == pytest.approx((1 - a) * math.log2(d), abs=1e-12)


def test_f_step_e_monotone_above_threshold_only():
    a, d, t = 0.5, 4, 0.6
    pivot = t / (d - 1)
    above = [f_step_e(u, a, d, t) for u in np.linspace(pivot, 5, 100)]
    assert all(x >= y - 1e-12 for x, y in zip(above, above[1:]))
    below = [f_step_e(u, a, d, t) for u in np.linspace(1e-6, pivot * 0.9, 50)]
    assert below[-1] > below[0]


def test_f_step_e_errors():
    with pytest.raises(ParamOutOfRange):
        f_step_e(-1, 0.5, 3, 0.2)
    with pytest.raises(ParamOutOfRange):
        f_step_e(0.5, 0.5, 3, 0.0)
    with pytest.raises(ParamOutOfRange):
        f_step_e(0.5, 0.5, 3, 0.9)


def test_g_mono_examples():
    for d in range(2, 7):
        for a in ALPHA_GRID:
            assert g_mono(max_eps(d), a, d) == pytest.approx(d ** (1 - a), abs=1e-12)
            grid = np.linspace(0, max_eps(d), 101)[1:]
            vals = [g_mono(u, a, d) for u in grid]
            assert all(x <= y + 1e-12 for x, y in zip(vals, vals[1:]))
            assert min(vals) >= 1 - 1e-12
    with pytest.raises(ParamOutOfRange):
        g_mono(0, 0.5, 3)


@pytest.mark.parametrize("a", ALPHA_GRID)
def test_gamma_monotone_in_eps_and_d(a):
    for d in range(2, 7):
        vals = [gamma(a, e, d) for e in np.linspace(0, max_eps(d), 60)]
        assert all(x <= y + 1e-12 for x, y in zip(vals, vals[1:]))
    for e in (0.1, 0.3, 0.5):
        vals = [gamma(a, e, d) for d in range(2, 10)]
        assert all(x <= y + 1e-12 for x, y in zip(vals, vals[1:]))


def test_certificate_examples():
    p, _ = sample_pair_within_tv(3, 2, 0.0, seed=1)
    c = check_continuity_bound(p, p, 0.5, 0.2)
    assert c.lhs == 0 and c.holds and c.slack == c.rhs
    for d in (2, 3, 5):
        for eps in sorted({0.1, 0.3, max_eps(d)}):
            if eps > max_eps(d):
                continue
            pe, qe = extremal_pair(d, 2, eps)
            for a in ALPHA_GRID:
                c = check_continuity_bound(pe, qe, a, eps)
                assert c.holds and abs(c.slack) <= 1e-10
    d = c.to_dict()
    assert set(d) >= {"alpha", "eps_budget", "dimension", "tv_actual", "lhs", "rhs", "slack", "holds"}


def test_certificate_budget_errors():
    pe, qe = extremal_pair(3, 1, 0.3)
    with pytest.raises(TvBudgetExceeded):
        check_continuity_bound(pe, qe, 0.5, 0.2)
    with pytest.raises(EpsOutOfRange):
        check_continuity_bound(pe, qe, 0.5, 0.0)
    with pytest.raises(EpsOutOfRange):
        check_continuity_bound([[1.0]], [[1.0]], 0.5, 0.1)


@given(
    st.integers(2, 7), st.integers(1, 6), st.sampled_from(ALPHA_GRID), st.floats(0.01, 1.0), st.integers(0, 10**6)
)
def test_bound_holds_on_sampled_pairs(nx, ny, a, frac, seed):
    eps = frac * max_eps(nx)
    p, q = sample_pair_within_tv(nx, ny, eps, seed=seed)
    assert check_continuity_bound(p, q, a, eps).holds
