# Yield magnet notes: clamped basket returns, frozen winners, ratcheting coupons.
#
# Run from the repository root:  python demos/02_yield_magnet.py
from pathlib import Path

from structnotes.coupons import (
    BasketObservation,
    CouponState,
    advance_coupon_year_detail,
    basket_observations,
    clamp_theta,
)
from structnotes.expectation import ym_expected_coupon_bound
from structnotes.market_data import load_basket_csv
from structnotes.terms import YieldMagnetTerms

DATA = Path(__file__).resolve().parent.parent / "data"
terms = YieldMagnetTerms()

# Clamping is lopsided: gains stop at +8%, losses run to -12.5%.
print([clamp_theta(d, terms) for d in (-0.30, -0.10, 0.0, 0.05, 0.10)])

# Every stock up 10%: the coupon is the 8% cap and every stock freezes.
# Every stock down 10%: the coupon is 0.
state, _ = advance_coupon_year_detail(CouponState.initial(terms), None, terms)
up = BasketObservation((100.0,) * 15, (110.0,) * 15)
down = BasketObservation((100.0,) * 15, (90.0,) * 15)
print("up 10%:  ", advance_coupon_year_detail(state, up, terms)[1].coupon)
print("down 10%:", advance_coupon_year_detail(state, down, terms)[1].coupon)

# A full schedule over a synthetic 15-stock history.
basket = load_basket_csv(DATA / "titans_basket_synthetic.csv")
state = CouponState.initial(terms)
print(f"\n{'paid':<12}{'D-date':<12}{'theta_bar':>10}{'coupon':>9}{'frozen':>8}")
for pay, dd, obs in basket_observations(terms, basket):
    state, res = advance_coupon_year_detail(state, obs, terms)
    tb = "" if res.tbar is None else f"{res.tbar:+.4f}"
    print(f"{pay!s:<12}{str(dd or ''):<12}{tb:>10}{res.coupon:>9.4f}{state.n_frozen:>8}")

# With a 10% chance that theta_bar ends nonnegative, the expected coupon is at most 8bp.
print("\nE(R) <=", ym_expected_coupon_bound(0.1, terms).value)
