# Return optimization securities: capped upside, uncapped downside.
#
# Run from the repository root:  python demos/01_return_optimization.py
from pathlib import Path

from structnotes.expectation import ros_expected_return_bound
from structnotes.market_data import empirical_sign_stats, load_price_csv, realized_return, window
from structnotes.payoffs import ros_net_payment, ros_return
from structnotes.reports import dollars
from structnotes.terms import RosTerms, Scenario

DATA = Path(__file__).resolve().parent.parent / "data"
terms = RosTerms(cap_m=0.30)

# The payoff per $10 note at a few index returns. Above +6% the cap binds.
for i in (-0.42, -0.10, 0.0, 0.02, 0.06, 0.42):
    print(f"I = {i:+.2f}   return = {ros_return(i, terms):+.4f}   net = {dollars(ros_net_payment(i, terms)):>6}")

# Holding the note from 2007-10-05 for 369 days.
path = load_price_csv(DATA / "sp500_2007_2008.csv")
w = window(path, path.dates[0], terms.maturity_days)
i = realized_return(w)
print(f"\n{w.dates[0]} -> {w.dates[-1]}: I = {i:.5f}, net payment {dollars(ros_net_payment(i, terms))} per note")

# Expected-return bounds under increasingly bearish views of the index.
print()
for label, sc in [
    ("10% chance of a gain", Scenario(0.1)),
    ("...and losses average 20%", Scenario(0.1, cond_loss=-0.2)),
    ("...and losses average 30%", Scenario(0.1, cond_loss=-0.3)),
]:
    b = ros_expected_return_bound(sc, terms)
    print(f"{label:<28} E(R) <= {b.value:+.4f}")
    for br in b.decomposition:
        print(f"    {br.label:<5} {br.cond_expectation:+.3f} x {br.probability:.2f}")

# The same bound fed by sign statistics from a (synthetic) daily history.
daily = load_price_csv(DATA / "sp500_synthetic_daily.csv")
sc = empirical_sign_stats(daily, terms.maturity_days)
print(f"\nrolling 369-day windows: P(I>=0) = {sc.p_nonneg:.3f}, E(I|I<0) = {sc.cond_loss}")
print(f"bound from history: {ros_expected_return_bound(sc, terms).value:+.4f}")
