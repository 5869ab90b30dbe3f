# Principal-protected notes and absolute-return barrier notes.
#
# Run from the repository root:  python demos/04_principal_protected.py
import datetime as dt
from pathlib import Path

import numpy as np

from structnotes.expectation import ppn_expected_return
from structnotes.market_data import load_price_csv, window
from structnotes.payoffs import barrier_breached, barrier_note_return, ppn_return
from structnotes.terms import BarrierNoteTerms, PpnTerms, Scenario

DATA = Path(__file__).resolve().parent.parent / "data"
ppn = PpnTerms()

print([ppn_return(i, ppn) for i in (-0.3, 0.0, 0.25)])

# A small grid of outlooks. Only generous assumptions give a decent return.
p_grid = np.array([0.1, 0.3, 0.5, 0.8])
g_grid = np.array([0.10, 0.25, 0.40])
table = np.array([[ppn_expected_return(Scenario(p, cond_gain=g), ppn).value for g in g_grid] for p in p_grid])
print("\nE(R)      " + "".join(f"g={g:<8}" for g in g_grid))
for p, row in zip(p_grid, table):
    print(f"P={p:<7}" + "".join(f"{v:<10.4f}" for v in row))

# Barrier notes on a synthetic daily history: start every 21 trading days,
# hold for three years, and count how often the band survives.
daily = load_price_csv(DATA / "sp500_synthetic_daily.csv")
barrier = BarrierNoteTerms(maturity_days=3 * 365)
outcomes = []
for start in daily.dates[::21]:
    if start + dt.timedelta(days=barrier.maturity_days) > daily.dates[-1]:
        break
    w = window(daily, start, barrier.maturity_days)
    outcomes.append((barrier_breached(w, barrier), barrier_note_return(w, barrier)))
held = [r for hit, r in outcomes if not hit]
print(f"\n{len(outcomes)} start dates, band held in {len(held)}")
if held:
    print(f"mean |I| when held: {np.mean(held):.4f}")
print(f"mean return overall: {np.mean([r for _, r in outcomes]):.4f}")
