"""Yield magnet coupon engine.

Each variable year: per-stock returns from a baseline date to the D-date are
clamped to ``[theta_floor, theta_cap]``, averaged, and turned into a coupon in
``[0, theta_cap]``. A stock whose clamped return reaches the cap stays at the
cap for good, and coupons ratchet so they never fall below an earlier one.
"""
from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .terms import YieldMagnetTerms, require_valid


@dataclass(frozen=True)
class CouponState:
    """Where the note stands entering ``year_index`` (0 is the fixed-rate year).

    ``last_coupon`` is the coupon paid in the previous year. ``ratchet_floor``
    is the lowest coupon the next variable year may pay; it starts at 0.
    """

    frozen: tuple
    last_coupon: float = 0.0
    year_index: int = 0
    ratchet_floor: float = 0.0

    @classmethod
    def initial(cls, terms: YieldMagnetTerms):
        return cls(frozen=(False,) * terms.n_stocks)

    @property
    def n_frozen(self):
        return sum(self.frozen)


@dataclass(frozen=True)
class BasketObservation:
    baseline_prices: tuple
    d_date_prices: tuple

    def __post_init__(self):
        b = tuple(float(x) for x in self.baseline_prices)
        d = tuple(float(x) for x in self.d_date_prices)
        if len(b) != len(d):
            raise DomainError("baseline and D-date price lists differ in length")
        if any(not math.isfinite(x) or x <= 0 for x in b + d):
            raise DomainError("basket prices must be positive")
        object.__setattr__(self, "baseline_prices", b)
        object.__setattr__(self, "d_date_prices", d)


def stock_delta(baseline: float, d_date: float) -> float:
    if not (baseline > 0 and d_date > 0) or not math.isfinite(baseline + d_date):
        raise DomainError(f"stock prices must be positive, got {baseline!r}, {d_date!r}")
    return (d_date - baseline) / baseline


def clamp_theta(delta: float, terms: YieldMagnetTerms) -> float:
    return min(max(delta, terms.theta_floor), terms.theta_cap)


def theta_bar(thetas) -> float:
    """Arithmetic mean, computed with an exactly rounded sum so order does not matter."""
    thetas = [float(t) for t in thetas]
    if not thetas:
        raise DomainError("theta_bar needs at least one value")
    mean = math.fsum(thetas) / len(thetas)
    # the rounded quotient can overshoot the extremes by an ulp
    return min(max(mean, min(thetas)), max(thetas))


def coupon_rate(tbar: float, terms: YieldMagnetTerms) -> float:
    if not terms.theta_floor <= tbar <= terms.theta_cap:
        raise DomainError(
            f"theta_bar {tbar!r} outside [{terms.theta_floor}, {terms.theta_cap}]"
        )
    if tbar < 0:
        return 0.0
    return min(tbar, terms.theta_cap)


@dataclass(frozen=True)
class YearResult:
    coupon: float
    tbar: float | None
    thetas: tuple


def advance_coupon_year(state: CouponState, obs: BasketObservation | None, terms: YieldMagnetTerms):
    """Run one coupon year. Returns ``(next_state, coupon)``.

    Year 0 pays the fixed coupon and ignores ``obs``.
    """
    new_state, result = advance_coupon_year_detail(state, obs, terms)
    return new_state, result.coupon


def advance_coupon_year_detail(state, obs, terms):
    require_valid(terms)
    if state.year_index < 0:
        raise DomainError("year_index must be >= 0")
    if len(state.frozen) != terms.n_stocks:
        raise DomainError(f"state tracks {len(state.frozen)} stocks, terms say {terms.n_stocks}")
    if state.year_index == 0:
        nxt = CouponState(state.frozen, terms.fixed_first_coupon, 1, state.ratchet_floor)
        return nxt, YearResult(terms.fixed_first_coupon, None, ())

    if obs is None:
        raise DomainError("variable coupon years need a basket observation")
    if len(obs.baseline_prices) != terms.n_stocks:
        raise DomainError(f"observation has {len(obs.baseline_prices)} stocks, terms say {terms.n_stocks}")
    thetas = []
    frozen = []
    for was_frozen, b, d in zip(state.frozen, obs.baseline_prices, obs.d_date_prices):
        if was_frozen:
            theta = terms.theta_cap
        else:
            theta = clamp_theta(stock_delta(b, d), terms)
        thetas.append(theta)
        frozen.append(was_frozen or theta >= terms.theta_cap)
    tbar = theta_bar(thetas)
    rate = coupon_rate(tbar, terms)
    coupon = max(state.ratchet_floor, rate)
    if terms.ratchet == "running_max":
        floor = coupon
    elif state.year_index == 1:
        # floor_first: only the first variable year's coupon sets the floor
        floor = coupon
    else:
        floor = state.ratchet_floor
    nxt = CouponState(tuple(frozen), coupon, state.year_index + 1, floor)
    return nxt, YearResult(coupon, tbar, tuple(thetas))


def d_date(payment_date: dt.date, offset: int = 3) -> dt.date:
    """The determination date, ``offset`` weekdays before the payment date."""
    day = np.busday_offset(np.datetime64(payment_date, "D"), -offset, roll="forward")
    return day.item()


def run_coupon_schedule(terms: YieldMagnetTerms, observations):
    """Apply ``advance_coupon_year`` across a sequence of yearly observations.

    ``observations[0]`` belongs to the fixed year and may be None.
    Returns the list of coupons and the list of states after each year.
    """
    state = CouponState.initial(terms)
    coupons, states = [], []
    for obs in observations:
        state, c = advance_coupon_year(state, obs, terms)
        coupons.append(c)
        states.append(state)
    return coupons, states


def basket_observations(terms: YieldMagnetTerms, basket):
    """Build per-year observations from a BasketHistory.

    Year k >= 1 measures returns from the close on ``payment_dates[k-1]`` to the
    close on the D-date before ``payment_dates[k]``; missing days fall back to
    the latest earlier close. Years whose D-date lies past the data are dropped.
    """
    require_valid(terms)
    if basket.n_stocks != terms.n_stocks:
        raise DomainError(f"basket has {basket.n_stocks} stocks, terms say {terms.n_stocks}")
    rows = [(terms.payment_dates[0], None, None)]
    for prev, pay in zip(terms.payment_dates, terms.payment_dates[1:]):
        dd = d_date(pay, terms.d_date_offset)
        if dd > basket.dates[-1]:
            break
        obs = BasketObservation(
            tuple(basket.prices_on_or_before(prev)),
            tuple(basket.prices_on_or_before(dd)),
        )
        rows.append((pay, dd, obs))
    return rows
