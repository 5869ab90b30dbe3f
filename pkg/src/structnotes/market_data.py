"""Daily close histories: CSV ingestion, maturity windows, realized returns."""
from __future__ import annotations

import csv
import datetime as dt
import io
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, ParseError
from .terms import Scenario


@dataclass(frozen=True)
class PricePath:
    """Dated closes with strictly ascending dates and positive prices."""

    dates: tuple
    closes: tuple

    def __post_init__(self):
        dates = tuple(self.dates)
        closes = tuple(float(c) for c in self.closes)
        if not dates:
            raise DomainError("price path needs at least one observation")
        if len(dates) != len(closes):
            raise DomainError("dates and closes differ in length")
        for d, c in zip(dates, closes):
            if not math.isfinite(c) or c <= 0:
                raise DomainError(f"close on {d} must be positive, got {c!r}")
        for a, b in zip(dates, dates[1:]):
            if b <= a:
                raise DomainError(f"dates must be strictly increasing ({a} then {b})")
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "closes", closes)

    @classmethod
    def from_closes(cls, closes, start=dt.date(2000, 1, 3)):
        """Build a path on consecutive weekdays. Handy for synthetic data."""
        days = np.busday_offset(np.datetime64(start, "D"), np.arange(len(closes)), roll="forward")
        return cls(tuple(d.item() for d in days), tuple(closes))

    def __len__(self):
        return len(self.dates)

    @property
    def first(self):
        return self.closes[0]

    @property
    def last(self):
        return self.closes[-1]

    def scaled(self, factor):
        return PricePath(self.dates, tuple(c * factor for c in self.closes))

    def close_on_or_before(self, day):
        i = bisect_right(self.dates, day) - 1
        if i < 0:
            raise DomainError(f"no observation on or before {day}")
        return self.closes[i]


def _read_rows(source):
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    if isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    else:
        data = source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from None
    return list(csv.reader(io.StringIO(data)))


def _parse_date(text, line):
    try:
        return dt.date.fromisoformat(text.strip())
    except ValueError:
        raise ParseError(f"bad date {text!r}", line) from None


def _parse_price(text, line):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"bad price {text!r}", line) from None
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"line {line}: price must be positive, got {text.strip()}")
    return value


def _check_order(dates, lines):
    for k in range(1, len(dates)):
        if dates[k] == dates[k - 1]:
            raise DomainError(f"line {lines[k]}: duplicate date {dates[k]}")
        if dates[k] < dates[k - 1]:
            raise DomainError(f"line {lines[k]}: dates not ascending ({dates[k - 1]} then {dates[k]})")


def load_price_csv(source) -> PricePath:
    """Parse a ``date,close`` CSV from bytes, a path, or a binary/text stream."""
    rows = _read_rows(source)
    if not rows or [h.strip().lower() for h in rows[0]] != ["date", "close"]:
        raise ParseError("expected header 'date,close'", 1)
    dates, closes, lines = [], [], []
    for n, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", n)
        dates.append(_parse_date(row[0], n))
        closes.append(_parse_price(row[1], n))
        lines.append(n)
    if not dates:
        raise DomainError("no observations after header")
    _check_order(dates, lines)
    return PricePath(tuple(dates), tuple(closes))


def dumps_price_csv(path: PricePath) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["date", "close"])
    for d, c in zip(path.dates, path.closes):
        w.writerow([d.isoformat(), repr(c)])
    return buf.getvalue()


@dataclass(frozen=True)
class BasketHistory:
    """Daily closes for every stock in a basket, one column per stock."""

    dates: tuple
    prices: np.ndarray  # shape (n_days, n_stocks)

    @property
    def n_stocks(self):
        return self.prices.shape[1]

    def prices_on_or_before(self, day):
        i = bisect_right(self.dates, day) - 1
        if i < 0:
            raise DomainError(f"no basket observation on or before {day}")
        return self.prices[i]


def load_basket_csv(source) -> BasketHistory:
    """Parse a ``date,stock_1,...,stock_n`` CSV."""
    rows = _read_rows(source)
    if not rows:
        raise ParseError("empty file", 1)
    header = [h.strip().lower() for h in rows[0]]
    n = len(header) - 1
    if n < 1 or header != ["date"] + [f"stock_{i}" for i in range(1, n + 1)]:
        raise ParseError("expected header 'date,stock_1,...,stock_n'", 1)
    dates, prices, lines = [], [], []
    for k, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != n + 1:
            raise ParseError(f"expected {n + 1} fields, got {len(row)}", k)
        dates.append(_parse_date(row[0], k))
        prices.append([_parse_price(c, k) for c in row[1:]])
        lines.append(k)
    if not dates:
        raise DomainError("no observations after header")
    _check_order(dates, lines)
    arr = np.array(prices, dtype=float)
    arr.setflags(write=False)
    return BasketHistory(tuple(dates), arr)


def dumps_basket_csv(basket: BasketHistory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["date"] + [f"stock_{i}" for i in range(1, basket.n_stocks + 1)])
    for d, row in zip(basket.dates, basket.prices):
        w.writerow([d.isoformat()] + [repr(float(x)) for x in row])
    return buf.getvalue()


def window(path: PricePath, start: dt.date, maturity_days: int | None) -> PricePath:
    """Cut the maturity window beginning at ``start``.

    The first endpoint is the first observation on or after ``start``. The
    last endpoint is the observation nearest to ``start + maturity_days``
    among those after the first endpoint (ties go to the earlier date).
    ``maturity_days=None`` runs to the end of the path.
    """
    i0 = bisect_left(path.dates, start)
    if i0 >= len(path):
        raise DomainError(f"no observation on or after {start}")
    if maturity_days is None:
        i1 = len(path) - 1
    else:
        if maturity_days <= 0:
            raise DomainError("maturity_days must be positive")
        target = path.dates[i0] + dt.timedelta(days=maturity_days)
        j = bisect_left(path.dates, target)
        candidates = [k for k in (j - 1, j) if i0 < k < len(path)]
        if not candidates:
            raise DomainError(f"window starting {path.dates[i0]} has fewer than 2 observations")
        i1 = min(candidates, key=lambda k: (abs((path.dates[k] - target).days), k))
    if i1 <= i0:
        raise DomainError(f"window starting {path.dates[i0]} has fewer than 2 observations")
    return PricePath(path.dates[i0 : i1 + 1], path.closes[i0 : i1 + 1])


def realized_return(path: PricePath) -> float:
    if len(path) < 2:
        raise DomainError("realized return needs at least 2 observations")
    return (path.last - path.first) / path.first


def rolling_returns(path: PricePath, horizon_days: int):
    """Returns over every full-horizon window, advancing one observation at a time."""
    if horizon_days <= 0:
        raise DomainError("horizon_days must be positive")
    out = []
    last = path.dates[-1]
    for d in path.dates:
        if d + dt.timedelta(days=horizon_days) > last:
            break
        out.append(realized_return(window(path, d, horizon_days)))
    return out


def empirical_sign_stats(path: PricePath, horizon_days: int) -> Scenario:
    """Estimate P(I >= 0), E(I | I < 0) and E(I | I >= 0) from rolling windows.

    Windows overlap, so the samples are not independent.
    """
    rets = rolling_returns(path, horizon_days)
    if not rets:
        raise DomainError(f"path spans less than one {horizon_days}-day horizon")
    gains = [r for r in rets if r >= 0]
    losses = [r for r in rets if r < 0]
    return Scenario(
        p_nonneg=len(gains) / len(rets),
        cond_loss=math.fsum(losses) / len(losses) if losses else None,
        cond_gain=math.fsum(gains) / len(gains) if gains else None,
    )
