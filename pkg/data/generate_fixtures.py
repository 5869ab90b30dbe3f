"""Regenerate the fixture corpus in this directory.

The daily series are synthetic (seeded geometric random walks on a weekday
calendar), not market data. Only ``sp500_2007_2008.csv`` holds real closes.
"""
from pathlib import Path

import numpy as np

from structnotes.market_data import BasketHistory, PricePath, dumps_basket_csv, dumps_price_csv
from structnotes.terms import (
    BarrierNoteTerms,
    PpnTerms,
    ReverseExchangeableTerms,
    RosTerms,
    YieldMagnetTerms,
    DiscreteReturnDistribution,
    dumps_distribution,
    dumps_terms,
)

HERE = Path(__file__).parent


def weekdays(start, end):
    days = np.arange(np.datetime64(start), np.datetime64(end) + 1, dtype="datetime64[D]")
    return days[np.is_busday(days)]


def write(name, text):
    (HERE / name).parent.mkdir(parents=True, exist_ok=True)
    (HERE / name).write_text(text, encoding="utf-8")


def main():
    write("sp500_2007_2008.csv", "date,close\n2007-10-05,1557.59\n2008-10-10,899.22\n")

    rng = np.random.default_rng(2007)
    days = weekdays("2006-01-02", "2009-12-31")
    steps = rng.normal(0.0, 0.012, len(days))
    level = np.exp(np.cumsum(steps))
    anchor = int(np.searchsorted(days, np.datetime64("2007-10-05")))
    closes = np.round(level / level[anchor] * 1557.59, 2)
    write("sp500_synthetic_daily.csv", dumps_price_csv(PricePath(tuple(d.item() for d in days), tuple(closes))))

    flat = PricePath.from_closes([100.0] * 5)
    write("flat.csv", dumps_price_csv(flat))
    write("barrier_breach.csv", dumps_price_csv(PricePath.from_closes([100.0, 118.0, 141.5, 120.0, 105.0])))
    write("barrier_inside.csv", dumps_price_csv(PricePath.from_closes([100.0, 120.0, 90.0])))

    bdays = weekdays("2006-03-01", "2011-03-31")
    shocks = rng.normal(0.0, 0.015, (len(bdays), 15))
    basket = 50.0 * np.exp(np.cumsum(shocks, axis=0))
    write(
        "titans_basket_synthetic.csv",
        dumps_basket_csv(BasketHistory(tuple(d.item() for d in bdays), np.round(basket, 2))),
    )

    write("terms/ros.json", dumps_terms(RosTerms(cap_m=0.30)) + "\n")
    write("terms/yield_magnet.json", dumps_terms(YieldMagnetTerms()) + "\n")
    write("terms/rev_exch.json", dumps_terms(ReverseExchangeableTerms()) + "\n")
    write("terms/ppn.json", dumps_terms(PpnTerms()) + "\n")
    write("terms/barrier.json", dumps_terms(BarrierNoteTerms()) + "\n")

    write("dist/rev_exch_two_outcome.json",
          dumps_distribution(DiscreteReturnDistribution([(-0.42, 0.95), (0.10, 0.05)])) + "\n")
    write("dist/point_mass.json", dumps_distribution(DiscreteReturnDistribution([(-0.42, 1.0)])) + "\n")
    write("dist/ppn_two_outcome.json",
          dumps_distribution(DiscreteReturnDistribution([(-0.30, 0.9), (0.25, 0.1)])) + "\n")


if __name__ == "__main__":
    main()
