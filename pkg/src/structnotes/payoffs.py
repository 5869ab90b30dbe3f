"""Payoff kernels at maturity, one per product.

The kernels are scalar and pure. Returns are fractions of the note price.
"""
from __future__ import annotations

import math

from .errors import DomainError
from .market_data import PricePath
from .terms import (
    BarrierNoteTerms,
    PpnTerms,
    ReverseExchangeableTerms,
    RosTerms,
    check_return,
    require_valid,
)

# multiple of the index return paid per dollar of note price on the upside
ROS_LEVERAGE = 5.0


def ros_net_payment(index_return: float, terms: RosTerms) -> float:
    """Profit or loss in dollars per note: min(5*I, M) or I, times the note price.

    With the $10 note this is min(50*I, 10*M) for I >= 0 and 10*I otherwise.
    """
    return ros_return(index_return, terms) * terms.price_per_note


def ros_return(index_return: float, terms: RosTerms) -> float:
    require_valid(terms)
    i = check_return(index_return, "index_return")
    if i >= 0:
        return min(ROS_LEVERAGE * i, terms.cap_m)
    return i


def rev_exch_return(stock_return: float, terms: ReverseExchangeableTerms) -> float:
    """Coupon plus the stock's loss, if any. Gains above the coupon go to the issuer."""
    require_valid(terms)
    x = check_return(stock_return, "stock_return")
    if x > 0:
        return terms.coupon_rate
    return terms.coupon_rate + x


def rev_exch_shares_delivered(stock_return: float, terms: ReverseExchangeableTerms, initial_price: float) -> float:
    """Shares handed over at maturity when the stock fell (zero otherwise)."""
    x = check_return(stock_return, "stock_return")
    if initial_price <= 0:
        raise DomainError("initial_price must be positive")
    return 0.0 if x > 0 else terms.price_per_note / initial_price


def ppn_return(index_return: float, terms: PpnTerms) -> float:
    require_valid(terms)
    i = check_return(index_return, "index_return")
    if i <= 0:
        return 0.0
    return terms.participation_rate * i


def _closes(path):
    closes = path.closes if isinstance(path, PricePath) else tuple(float(c) for c in path)
    if len(closes) < 2:
        raise DomainError("barrier path needs at least 2 observations")
    for c in closes:
        if not math.isfinite(c) or c <= 0:
            raise DomainError(f"path prices must be positive, got {c!r}")
    return closes


def barrier_breached(path, terms: BarrierNoteTerms) -> bool:
    """True if any close leaves the band between the barriers.

    Monitoring is discrete over the closes given. A close exactly on a barrier
    counts as a breach when ``barrier_touch_is_breach`` is set.
    """
    require_valid(terms)
    closes = _closes(path)
    i0 = closes[0]
    up, lo = terms.upper_multiple, terms.lower_multiple
    for c in closes[1:]:
        ratio = c / i0
        if terms.barrier_touch_is_breach:
            if ratio >= up or ratio <= lo:
                return True
        elif ratio > up or ratio < lo:
            return True
    return False


def barrier_note_return(path, terms: BarrierNoteTerms) -> float:
    """|I| over the path if the band held throughout, else 0.

    ``path`` is a PricePath or a plain sequence of closes; its first close is I0.
    """
    closes = _closes(path)
    if barrier_breached(closes, terms):
        return 0.0
    return abs((closes[-1] - closes[0]) / closes[0])
