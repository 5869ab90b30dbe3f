import math

import pytest
from hypothesis import given, strategies as st

from structnotes.errors import DomainError
from structnotes.market_data import PricePath
from structnotes.payoffs import (
    barrier_breached,
    barrier_note_return,
    ppn_return,
    rev_exch_return,
    rev_exch_shares_delivered,
    ros_net_payment,
    ros_return,
)
from structnotes.terms import BarrierNoteTerms, PpnTerms, ReverseExchangeableTerms, RosTerms

ROS30 = RosTerms(cap_m=0.30)
ROS25 = RosTerms(cap_m=0.25)
REV = ReverseExchangeableTerms()
PPN = PpnTerms()
BARRIER = BarrierNoteTerms()

returns = st.floats(min_value=-0.99, max_value=2.0, allow_nan=False)
caps = st.floats(min_value=0.25, max_value=0.30)


# --- return optimization security ---------------------------------------------


def test_ros_42_percent_decline_loses_4_20():
    assert ros_net_payment(-0.42, ROS30) == pytest.approx(-4.2, abs=1e-12)


def test_ros_zero_return_pays_nothing():
    assert ros_net_payment(0.0, ROS25) == 0.0


def test_ros_42_percent_rise_is_capped_at_3_dollars():
    assert ros_net_payment(0.42, ROS30) == pytest.approx(3.0, abs=1e-12)


def test_ros_small_gain_below_cap():
    # min(50 * 0.004, 10 * 0.25) = 0.2
    assert ros_net_payment(0.004, ROS25) == pytest.approx(0.2, abs=1e-12)


@pytest.mark.parametrize(
    "i, terms, expected",
    [(-0.42, ROS30, -0.42), (0.10, ROS25, 0.25), (0.0, ROS30, 0.0)],
)
def test_ros_return_examples(i, terms, expected):
    assert ros_return(i, terms) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("bad", [-1.0, -1.5, float("nan")])
def test_ros_rejects_impossible_returns(bad):
    with pytest.raises(DomainError):
        ros_net_payment(bad, ROS30)


def test_ros_rejects_unvalidated_terms():
    with pytest.raises(DomainError):
        ros_return(0.1, RosTerms(cap_m=0.40))


@given(returns, caps)
def test_ros_return_capped_and_passes_losses(i, m):
    terms = RosTerms(cap_m=m)
    r = ros_return(i, terms)
    assert r <= m
    if i < 0:
        assert r == i


@given(returns, caps)
def test_ros_return_times_price_is_net_payment(i, m):
    terms = RosTerms(cap_m=m)
    assert ros_return(i, terms) * terms.price_per_note == ros_net_payment(i, terms)


@given(returns, returns, caps)
def test_ros_net_payment_nondecreasing(a, b, m):
    lo, hi = sorted((a, b))
    terms = RosTerms(cap_m=m)
    assert ros_net_payment(lo, terms) <= ros_net_payment(hi, terms)


# --- reverse exchangeable -----------------------------------------------------


def test_rev_exch_15_percent_drop_returns_minus_3_percent():
    assert rev_exch_return(-0.15, REV) == pytest.approx(-0.03, abs=1e-15)


def test_rev_exch_boundary_and_capped_gain():
    assert rev_exch_return(0.0, REV) == 0.12
    assert rev_exch_return(0.50, REV) == 0.12


def test_rev_exch_share_delivery():
    # $1.00 stock falling to $0.85: 1000 shares now worth $850
    assert rev_exch_shares_delivered(-0.15, REV, 1.0) == 1000
    assert rev_exch_shares_delivered(0.2, REV, 1.0) == 0


@given(returns)
def test_rev_exch_never_beats_coupon(x):
    r = rev_exch_return(x, REV)
    assert r <= 0.12
    if x <= 0:
        assert r == 0.12 + x


@given(returns, returns)
def test_rev_exch_nondecreasing(a, b):
    lo, hi = sorted((a, b))
    assert rev_exch_return(lo, REV) <= rev_exch_return(hi, REV)


def test_rev_exch_continuous_at_zero():
    eps = 1e-12
    assert abs(rev_exch_return(eps, REV) - rev_exch_return(-eps, REV)) < 1e-11


# --- principal protected ------------------------------------------------------


@pytest.mark.parametrize("i, expected", [(-0.30, 0.0), (0.0, 0.0), (0.25, 0.20)])
def test_ppn_examples(i, expected):
    assert ppn_return(i, PPN) == pytest.approx(expected, abs=1e-15)


@given(returns, returns)
def test_ppn_floor_and_monotone(a, b):
    lo, hi = sorted((a, b))
    assert ppn_return(lo, PPN) >= 0
    assert ppn_return(lo, PPN) <= ppn_return(hi, PPN)


@given(st.floats(min_value=1e-6, max_value=100.0))
def test_ppn_slope_is_participation(i):
    assert ppn_return(i, PPN) / i == pytest.approx(0.8, rel=1e-12)


# --- barrier note -------------------------------------------------------------


def test_barrier_inside_pays_abs_return():
    assert barrier_note_return([100, 120, 90], BARRIER) == pytest.approx(0.10, abs=1e-15)


def test_barrier_flat_path_pays_zero():
    assert barrier_note_return([100, 100, 100], BARRIER) == 0.0


def test_barrier_touch_upper_knocks_out_by_default():
    assert barrier_note_return([100, 140, 100], BARRIER) == 0.0


def test_barrier_touch_allowed_when_policy_off():
    lenient = BarrierNoteTerms(barrier_touch_is_breach=False)
    assert barrier_note_return([100, 140, 110], lenient) == pytest.approx(0.10)
    assert barrier_note_return([100, 60, 110], lenient) == pytest.approx(0.10)
    assert barrier_note_return([100, 140.01, 110], lenient) == 0.0


def test_barrier_accepts_price_path():
    path = PricePath.from_closes([100.0, 120.0, 90.0])
    assert barrier_note_return(path, BARRIER) == pytest.approx(0.10)
    assert not barrier_breached(path, BARRIER)


@pytest.mark.parametrize("path", [[100], [100, 0, 90], [100, -5, 90], [100, math.nan]])
def test_barrier_domain_errors(path):
    with pytest.raises(DomainError):
        barrier_note_return(path, BARRIER)


inside_paths = st.lists(st.floats(min_value=61.0, max_value=139.0), min_size=1, max_size=30)


@given(inside_paths, st.floats(min_value=1e-3, max_value=1e4))
def test_barrier_rescaling_invariance(tail, scale):
    path = [100.0] + tail
    a = barrier_note_return(path, BARRIER)
    b = barrier_note_return([c * scale for c in path], BARRIER)
    assert abs(a - b) <= 1e-12
