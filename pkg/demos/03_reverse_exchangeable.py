# Reverse exchangeables: a fat coupon, paid for with the stock's downside.
#
# Run from the repository root:  python demos/03_reverse_exchangeable.py
from structnotes.expectation import (
    expected_return_oracle,
    monte_carlo_expected_return,
    rev_exch_expected_return,
)
from structnotes.payoffs import rev_exch_return, rev_exch_shares_delivered
from structnotes.terms import DiscreteReturnDistribution, ReverseExchangeableTerms, Scenario

terms = ReverseExchangeableTerms()

# Stock from $1.00 to $0.85: 1000 shares worth $850 come back, plus the 12% coupon.
print(rev_exch_return(-0.15, terms), rev_exch_shares_delivered(-0.15, terms, 1.00))

# Three outlooks on the chance the stock rises and how far it falls otherwise.
for p_up, loss in [(0.05, -0.42), (0.10, -0.21), (0.50, -0.105)]:
    b = rev_exch_expected_return(Scenario(p_up, cond_loss=loss), terms)
    print(f"P(X>0) = {p_up:.2f}, E(X|X<=0) = {loss:+.3f}  ->  E(R) = {b.value:+.4f}")

# The closed form agrees with brute force over a distribution, and with sampling.
dist = DiscreteReturnDistribution([(-0.42, 0.95), (0.10, 0.05)])
oracle = expected_return_oracle(terms, dist)
for n in (1_000, 10_000, 100_000):
    mc = monte_carlo_expected_return(terms, dist, n, seed=42)
    print(f"n = {n:>7}: estimate {mc.estimate:+.5f} +/- {mc.std_error:.5f}  (oracle {oracle:+.5f})")
