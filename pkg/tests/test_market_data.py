import datetime as dt
import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from structnotes.errors import DomainError, ParseError
from structnotes.market_data import (
    PricePath,
    dumps_basket_csv,
    dumps_price_csv,
    empirical_sign_stats,
    load_basket_csv,
    load_price_csv,
    realized_return,
    rolling_returns,
    window,
)

CLOSES_2007_2008 = b"date,close\n2007-10-05,1557.59\n2008-10-10,899.22"
D = dt.date


def test_load_2007_2008_closes():
    path = load_price_csv(CLOSES_2007_2008)
    assert path.dates == (D(2007, 10, 5), D(2008, 10, 10))
    assert path.closes == (1557.59, 899.22)


def test_load_accepts_streams_and_paths(data_dir):
    assert load_price_csv(io.BytesIO(CLOSES_2007_2008)) == load_price_csv(data_dir / "sp500_2007_2008.csv")
    assert load_price_csv(io.StringIO(CLOSES_2007_2008.decode())) == load_price_csv(CLOSES_2007_2008)


def test_empty_after_header_is_domain_error():
    with pytest.raises(DomainError):
        load_price_csv(b"date,close\n")


def test_nonpositive_price_is_domain_error():
    with pytest.raises(DomainError) as exc:
        load_price_csv(b"date,close\n2008-01-02,-5\n")
    assert not isinstance(exc.value, ParseError)


@pytest.mark.parametrize(
    "text, line",
    [
        (b"date,price\n2008-01-02,5\n", 1),
        (b"date,close\n2008-01-02,5\n2008-13-01,6\n", 3),
        (b"date,close\n2008-01-02,abc\n", 2),
        (b"date,close\n2008-01-02,5,7\n", 2),
    ],
)
def test_malformed_rows_report_line(text, line):
    with pytest.raises(ParseError) as exc:
        load_price_csv(text)
    assert exc.value.line == line


def test_duplicate_and_unsorted_dates_rejected():
    with pytest.raises(DomainError, match="duplicate"):
        load_price_csv(b"date,close\n2008-01-02,5\n2008-01-02,6\n")
    with pytest.raises(DomainError, match="ascending"):
        load_price_csv(b"date,close\n2008-01-03,5\n2008-01-02,6\n")


def test_price_csv_round_trip(data_dir):
    path = load_price_csv(data_dir / "sp500_synthetic_daily.csv")
    text = dumps_price_csv(path)
    again = load_price_csv(text.encode())
    assert again == path
    assert dumps_price_csv(again) == text


def test_basket_csv_round_trip(data_dir):
    basket = load_basket_csv(data_dir / "titans_basket_synthetic.csv")
    assert basket.n_stocks == 15
    again = load_basket_csv(dumps_basket_csv(basket).encode())
    assert again.dates == basket.dates
    assert np.array_equal(again.prices, basket.prices)


def test_basket_header_checked():
    with pytest.raises(ParseError):
        load_basket_csv(b"date,a,b\n2008-01-02,1,2\n")


# --- windows ----------------------------------------------------------------


def test_window_on_two_point_closes():
    w = window(load_price_csv(CLOSES_2007_2008), D(2007, 10, 5), 369)
    assert w.dates == (D(2007, 10, 5), D(2008, 10, 10))


def test_window_on_daily_series_ends_at_calendar_target(data_dir):
    # 2007-10-05 + 369 days is Wednesday 2008-10-08, a weekday in the series
    w = window(load_price_csv(data_dir / "sp500_synthetic_daily.csv"), D(2007, 10, 5), 369)
    assert w.dates[0] == D(2007, 10, 5)
    assert w.dates[-1] == D(2008, 10, 8)


def test_window_single_observation_errors():
    path = PricePath((D(2008, 1, 2),), (100.0,))
    with pytest.raises(DomainError):
        window(path, D(2008, 1, 2), 30)


def test_window_start_snaps_forward_over_weekend():
    path = PricePath.from_closes([100.0 + k for k in range(10)], start=D(2007, 10, 1))
    w = window(path, D(2007, 10, 6), 5)  # Saturday
    assert w.dates[0] == D(2007, 10, 8)
    # target Saturday 10-13 is nearer Friday 10-12 than Monday 10-15
    assert w.dates[-1] == D(2007, 10, 12)


def test_window_end_tie_goes_earlier():
    path = PricePath((D(2008, 1, 1), D(2008, 1, 9), D(2008, 1, 11)), (1.0, 2.0, 3.0))
    assert window(path, D(2008, 1, 1), 9).dates[-1] == D(2008, 1, 9)


def test_window_without_maturity_runs_to_end():
    path = PricePath.from_closes([1.0, 2.0, 3.0])
    assert window(path, path.dates[1], None).closes == (2.0, 3.0)


def test_window_start_after_data():
    path = PricePath.from_closes([1.0, 2.0])
    with pytest.raises(DomainError):
        window(path, D(2030, 1, 1), 10)


@pytest.mark.parametrize("closes, expected", [((1557.59, 899.22), -0.42269), ((100, 100), 0.0), ((100, 250), 1.5)])
def test_realized_return(closes, expected):
    r = realized_return(PricePath.from_closes(closes))
    assert r == pytest.approx(expected, abs=5e-6)


def test_realized_return_2007_2008_rounds_to_minus_0_42():
    assert round(realized_return(load_price_csv(CLOSES_2007_2008)), 2) == -0.42


def test_realized_return_needs_two_points():
    with pytest.raises(DomainError):
        realized_return(PricePath.from_closes([100.0]))


closes_st = st.lists(st.floats(min_value=1.0, max_value=1e4), min_size=3, max_size=40)


@given(closes_st, st.floats(min_value=1e-3, max_value=1e3), st.integers(1, 20))
def test_window_return_scale_invariant(closes, scale, days):
    path = PricePath.from_closes(closes)
    a = realized_return(window(path, path.dates[0], days))
    b = realized_return(window(path.scaled(scale), path.dates[0], days))
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


# --- empirical sign statistics ------------------------------------------------


def test_sign_stats_increasing_series():
    sc = empirical_sign_stats(PricePath.from_closes(np.linspace(100, 200, 60)), 10)
    assert sc.p_nonneg == 1.0 and sc.cond_loss is None


def test_sign_stats_decreasing_series():
    sc = empirical_sign_stats(PricePath.from_closes(np.linspace(200, 100, 60)), 10)
    assert sc.p_nonneg == 0.0 and sc.cond_gain is None


def test_sign_stats_four_constructed_windows():
    # starts on days 0..3 at 100, ends on days 10..13; only four full windows
    base = D(2008, 1, 1)
    days = [0, 1, 2, 3, 10, 11, 12, 13]
    closes = [100, 100, 100, 100, 110, 80, 60, 130]
    path = PricePath(tuple(base + dt.timedelta(days=d) for d in days), tuple(closes))
    assert rolling_returns(path, 10) == pytest.approx([0.1, -0.2, -0.4, 0.3])
    sc = empirical_sign_stats(path, 10)
    assert sc.p_nonneg == 0.5
    assert sc.cond_loss == pytest.approx(-0.3)
    assert sc.cond_gain == pytest.approx(0.2)


def test_sign_stats_needs_full_horizon():
    with pytest.raises(DomainError):
        empirical_sign_stats(PricePath.from_closes([1.0, 2.0, 3.0]), 30)


@given(st.lists(st.floats(min_value=10.0, max_value=20.0), min_size=15, max_size=80), st.integers(1, 10))
def test_sign_stats_total_expectation_identity(closes, horizon):
    path = PricePath.from_closes(closes)
    rets = rolling_returns(path, horizon)
    if not rets:
        return
    sc = empirical_sign_stats(path, horizon)
    gain = sc.cond_gain or 0.0
    loss = sc.cond_loss or 0.0
    mean = math.fsum(rets) / len(rets)
    assert abs(sc.p_nonneg * gain + (1 - sc.p_nonneg) * loss - mean) <= 1e-12
