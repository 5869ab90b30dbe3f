"""Expected returns: total-expectation formulas, brute-force oracle, Monte Carlo.

Each product splits its driver return at zero on a different side:

    ros       {I >= 0} vs {I < 0}
    ppn       {I > 0}  vs {I <= 0}
    rev_exch  {X > 0}  vs {X <= 0}

``Scenario.p_nonneg`` always carries the probability of the first (up) branch.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .payoffs import ppn_return, rev_exch_return, ros_return
from .terms import (
    DiscreteReturnDistribution,
    PpnTerms,
    ReverseExchangeableTerms,
    RosTerms,
    Scenario,
    YieldMagnetTerms,
    require_valid,
)

EXACT_TOL = 1e-12
MIN_PATHS = 1000
BLOCK_SIZE = 1 << 16

UPPER_BOUND = "upper_bound"
EXACT = "exact"


@dataclass(frozen=True)
class Branch:
    label: str
    cond_expectation: float
    probability: float

    @property
    def contribution(self):
        return self.cond_expectation * self.probability


@dataclass(frozen=True)
class ExpectationBound:
    value: float
    kind: str
    decomposition: tuple

    def decomposition_total(self):
        return math.fsum(b.contribution for b in self.decomposition)

    def check(self, tol=EXACT_TOL):
        """Raise AssertionError if value and decomposition disagree."""
        assert abs(self.value - self.decomposition_total()) <= tol, (self.value, self.decomposition)
        assert math.fsum(b.probability for b in self.decomposition) <= 1 + tol
        return self


def ros_expected_return_bound(scenario: Scenario, terms: RosTerms) -> ExpectationBound:
    """E(R) <= M*P(I>=0) + E(I|I<0)*P(I<0), or M*P(I>=0) without a loss estimate."""
    require_valid(scenario)
    require_valid(terms)
    m, p = terms.cap_m, scenario.p_nonneg
    up = Branch("I>=0", m, p)
    if scenario.cond_loss is None:
        return ExpectationBound(m * p, UPPER_BOUND, (up,))
    q = 1.0 - p
    value = m * p + scenario.cond_loss * q
    return ExpectationBound(value, UPPER_BOUND, (up, Branch("I<0", scenario.cond_loss, q)))


def ym_expected_coupon_bound(p_tbar_nonneg: float, terms: YieldMagnetTerms) -> ExpectationBound:
    require_valid(Scenario(p_tbar_nonneg))
    require_valid(terms)
    p = p_tbar_nonneg
    return ExpectationBound(
        terms.theta_cap * p,
        UPPER_BOUND,
        (Branch("theta_bar>=0", terms.theta_cap, p), Branch("theta_bar<0", 0.0, 1.0 - p)),
    )


def rev_exch_expected_return(scenario: Scenario, terms: ReverseExchangeableTerms) -> ExpectationBound:
    """E(R) = coupon + E(X|X<=0)*P(X<=0), with ``p_nonneg`` read as P(X > 0)."""
    require_valid(scenario)
    require_valid(terms)
    if scenario.cond_loss is None:
        raise UsageError("reverse exchangeable expectation needs cond_loss = E(X | X <= 0)")
    c = terms.coupon_rate
    q = 1.0 - scenario.p_nonneg
    value = c + scenario.cond_loss * q
    return ExpectationBound(
        value,
        EXACT,
        (Branch("X>0", c, scenario.p_nonneg), Branch("X<=0", c + scenario.cond_loss, q)),
    )


def ppn_expected_return(scenario: Scenario, terms: PpnTerms) -> ExpectationBound:
    """E(R) = participation * E(I|I>0) * P(I>0), with ``p_nonneg`` read as P(I > 0)."""
    require_valid(scenario)
    require_valid(terms)
    if scenario.cond_gain is None:
        raise UsageError("PPN expectation needs cond_gain = E(I | I > 0)")
    p = scenario.p_nonneg
    gain = terms.participation_rate * scenario.cond_gain
    return ExpectationBound(
        gain * p, EXACT, (Branch("I>0", gain, p), Branch("I<=0", 0.0, 1.0 - p))
    )


# --- brute force -------------------------------------------------------------


def payoff_kernel(product):
    """The scalar return kernel for a single-driver product."""
    if isinstance(product, RosTerms):
        return lambda r: ros_return(r, product)
    if isinstance(product, ReverseExchangeableTerms):
        return lambda r: rev_exch_return(r, product)
    if isinstance(product, PpnTerms):
        return lambda r: ppn_return(r, product)
    raise UsageError(
        f"{type(product).__name__} is path dependent or basket driven; "
        "it needs path distributions, not a return distribution"
    )


def _is_up(product, r):
    if isinstance(product, RosTerms):
        return r >= 0
    return r > 0


def _branch_labels(product):
    if isinstance(product, RosTerms):
        return "I>=0", "I<0"
    if isinstance(product, PpnTerms):
        return "I>0", "I<=0"
    return "X>0", "X<=0"


def expected_return_oracle(product, dist: DiscreteReturnDistribution) -> float:
    """Sum of payoff times probability over every outcome."""
    kernel = payoff_kernel(product)
    require_valid(dist)
    return math.fsum(kernel(r) * p for r, p in dist.outcomes)


def total_expectation(product, dist: DiscreteReturnDistribution) -> ExpectationBound:
    """E(R) rebuilt as E(R|up)P(up) + E(R|down)P(down) from the outcome split."""
    kernel = payoff_kernel(product)
    require_valid(dist)
    labels = _branch_labels(product)
    sides = ([], [])
    for r, p in dist.outcomes:
        sides[0 if _is_up(product, r) else 1].append((kernel(r), p))
    branches = []
    for label, side in zip(labels, sides):
        mass = math.fsum(p for _, p in side)
        cond = math.fsum(v * p for v, p in side) / mass if mass > 0 else 0.0
        branches.append(Branch(label, cond, mass))
    value = math.fsum(b.contribution for b in branches)
    return ExpectationBound(value, EXACT, tuple(branches))


def scenario_from_distribution(product, dist: DiscreteReturnDistribution) -> Scenario:
    """The distribution's own sign probability and conditional driver means.

    An empty branch gets conditional mean 0.0, so it adds nothing.
    """
    require_valid(dist)
    up = [(r, p) for r, p in dist.outcomes if _is_up(product, r)]
    down = [(r, p) for r, p in dist.outcomes if not _is_up(product, r)]

    def cond(side):
        mass = math.fsum(p for _, p in side)
        return math.fsum(r * p for r, p in side) / mass if mass > 0 else 0.0

    p_up = min(1.0, math.fsum(p for _, p in up))
    return Scenario(p_nonneg=p_up, cond_loss=min(cond(down), 0.0), cond_gain=max(cond(up), 0.0))


# --- Monte Carlo -------------------------------------------------------------


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: float
    std_error: float
    n_paths: int
    seed: int
    counts: tuple

    def __iter__(self):
        return iter((self.estimate, self.std_error))


def _block_counts(cdf, seed, block, size):
    # one PCG64 substream per block, keyed by (seed, block index)
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    u = np.random.Generator(np.random.PCG64(ss)).random(size)
    idx = np.searchsorted(cdf, u, side="right")
    np.minimum(idx, len(cdf) - 1, out=idx)
    return np.bincount(idx, minlength=len(cdf))


def monte_carlo_expected_return(product, dist: DiscreteReturnDistribution, n_paths: int, seed: int, workers: int = 1):
    """Sample driver returns by inverse CDF and average the payoff.

    Draws come in fixed blocks of ``BLOCK_SIZE`` paths, block ``k`` seeded from
    ``SeedSequence(seed, spawn_key=(k,))`` with PCG64. Blocks only contribute
    integer outcome counts, so the result does not depend on ``workers``.
    Returns a MonteCarloResult, which unpacks as ``(estimate, std_error)``.
    """
    kernel = payoff_kernel(product)
    require_valid(dist)
    if int(n_paths) != n_paths or n_paths < MIN_PATHS:
        raise UsageError(f"n_paths must be an integer >= {MIN_PATHS}, got {n_paths!r}")
    n_paths = int(n_paths)
    seed = int(seed)
    if seed < 0:
        raise UsageError("seed must be nonnegative")

    probs = dist.probs
    cdf = np.array([math.fsum(probs[: i + 1]) for i in range(len(probs))])
    cdf /= cdf[-1]
    cdf[-1] = 1.0

    sizes = [BLOCK_SIZE] * (n_paths // BLOCK_SIZE)
    if n_paths % BLOCK_SIZE:
        sizes.append(n_paths % BLOCK_SIZE)
    jobs = [(cdf, seed, k, s) for k, s in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda a: _block_counts(*a), jobs))
    else:
        parts = [_block_counts(*a) for a in jobs]
    counts = np.sum(parts, axis=0)

    values = [kernel(r) for r in dist.returns]
    used = [(int(c), v) for c, v in zip(counts, values) if c]
    estimate = math.fsum(c / n_paths * v for c, v in used)
    ss = math.fsum(c * (v - estimate) ** 2 for c, v in used)
    std_error = math.sqrt(ss / (n_paths - 1) / n_paths)
    return MonteCarloResult(estimate, std_error, n_paths, seed, tuple(int(c) for c in counts))
