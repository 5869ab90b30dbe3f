"""Term sheets, scenarios and return distributions.

Every value object here is a frozen dataclass. Construction never raises for
out-of-range values, so a bad term sheet can still be loaded and reported on;
``validate_terms`` describes what is wrong and ``require_valid`` is the gate
that the payoff and expectation code goes through.

All rates and returns are dimensionless fractions (``-0.42`` is a 42% fall).
"""
from __future__ import annotations

import datetime as dt
import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import ClassVar, Union

from .errors import DomainError, ParseError

PROB_TOL = 1e-9

RATCHET_POLICIES = ("running_max", "floor_first")


def check_return(value, name="return"):
    """Validate a realized return fraction and hand it back as a float."""
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    if value <= -1.0:
        raise DomainError(f"{name} must be > -1 (prices are positive), got {value!r}")
    return value


def _finite(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


@dataclass(frozen=True)
class RosTerms:
    """Return optimization security: capped 5x upside, uncapped downside."""

    cap_m: float
    price_per_note: float = 10.0
    maturity_days: int = 369

    product: ClassVar[str] = "ros"
    CAP_RANGE: ClassVar[tuple] = (0.25, 0.30)

    def problems(self):
        out = []
        lo, hi = self.CAP_RANGE
        if not _finite(self.cap_m):
            out.append("cap_m must be a finite number")
        elif self.cap_m < lo:
            out.append(f"cap_m below {lo:.2f}")
        elif self.cap_m > hi:
            out.append(f"cap_m above {hi:.2f}")
        if not _finite(self.price_per_note) or self.price_per_note <= 0:
            out.append("price_per_note must be > 0")
        if not isinstance(self.maturity_days, int) or self.maturity_days <= 0:
            out.append("maturity_days must be a positive integer")
        return out


def _default_payment_dates():
    return tuple(dt.date(y, 3, 15) for y in range(2007, 2012))


@dataclass(frozen=True)
class YieldMagnetTerms:
    """Yield magnet note on a basket of stocks.

    ``payment_dates[0]`` closes the fixed-coupon year; every later payment
    date closes a variable-coupon year.
    """

    redemption_price: float = 1000.0
    n_stocks: int = 15
    theta_floor: float = -0.125
    theta_cap: float = 0.08
    fixed_first_coupon: float = 0.055
    settlement_date: dt.date = dt.date(2006, 3, 15)
    redemption_date: dt.date = dt.date(2011, 3, 15)
    payment_dates: tuple = field(default_factory=_default_payment_dates)
    d_date_offset: int = 3
    ratchet: str = "running_max"

    product: ClassVar[str] = "yield_magnet"

    def __post_init__(self):
        object.__setattr__(self, "payment_dates", tuple(self.payment_dates))

    def problems(self):
        out = []
        if not _finite(self.redemption_price) or self.redemption_price <= 0:
            out.append("redemption_price must be > 0")
        if not isinstance(self.n_stocks, int) or self.n_stocks < 1:
            out.append("n_stocks must be >= 1")
        if not (_finite(self.theta_floor) and _finite(self.theta_cap)):
            out.append("theta_floor and theta_cap must be finite")
        elif not self.theta_floor < 0 < self.theta_cap:
            out.append("need theta_floor < 0 < theta_cap")
        if not _finite(self.fixed_first_coupon) or self.fixed_first_coupon < 0:
            out.append("fixed_first_coupon must be >= 0")
        if not self.payment_dates:
            out.append("payment_dates must be nonempty")
        else:
            pd = self.payment_dates
            if any(b <= a for a, b in zip(pd, pd[1:])):
                out.append("payment_dates must be strictly increasing")
            if pd[0] <= self.settlement_date or pd[-1] > self.redemption_date:
                out.append("payment_dates must lie in (settlement_date, redemption_date]")
        if not isinstance(self.d_date_offset, int) or self.d_date_offset < 0:
            out.append("d_date_offset must be a nonnegative integer")
        if self.ratchet not in RATCHET_POLICIES:
            out.append(f"ratchet must be one of {RATCHET_POLICIES}")
        return out


@dataclass(frozen=True)
class ReverseExchangeableTerms:
    price_per_note: float = 1000.0
    maturity_years: int = 1
    coupon_rate: float = 0.12
    coupon_frequency: int = 4

    product: ClassVar[str] = "rev_exch"

    def problems(self):
        out = []
        if not _finite(self.price_per_note) or self.price_per_note <= 0:
            out.append("price_per_note must be > 0")
        if not isinstance(self.maturity_years, int) or self.maturity_years <= 0:
            out.append("maturity_years must be a positive integer")
        if not _finite(self.coupon_rate) or not 0 < self.coupon_rate < 1:
            out.append("coupon_rate must be in (0, 1)")
        if not isinstance(self.coupon_frequency, int) or self.coupon_frequency < 1:
            out.append("coupon_frequency must be >= 1")
        return out


@dataclass(frozen=True)
class PpnTerms:
    """Principal-protected note with partial participation in index gains."""

    price_per_note: float = 1000.0
    maturity_years: int = 3
    participation_rate: float = 0.80

    product: ClassVar[str] = "ppn"

    def problems(self):
        out = []
        if not _finite(self.price_per_note) or self.price_per_note <= 0:
            out.append("price_per_note must be > 0")
        if not isinstance(self.maturity_years, int) or self.maturity_years <= 0:
            out.append("maturity_years must be a positive integer")
        if not _finite(self.participation_rate) or not 0 < self.participation_rate <= 1:
            out.append("participation_rate must be in (0, 1]")
        return out


@dataclass(frozen=True)
class BarrierNoteTerms:
    """Absolute-return barrier note. Barriers are multiples of the first close.

    ``maturity_days`` is only used when windowing a longer price history; when
    it is None the whole path after the start date is monitored.
    """

    upper_multiple: float = 1.4
    lower_multiple: float = 0.6
    barrier_touch_is_breach: bool = True
    maturity_days: int | None = None

    product: ClassVar[str] = "barrier"

    def problems(self):
        out = []
        if not (_finite(self.upper_multiple) and _finite(self.lower_multiple)):
            out.append("barrier multiples must be finite")
        elif not 0 < self.lower_multiple < 1 < self.upper_multiple:
            out.append("need 0 < lower_multiple < 1 < upper_multiple")
        if not isinstance(self.barrier_touch_is_breach, bool):
            out.append("barrier_touch_is_breach must be a boolean")
        if self.maturity_days is not None and (
            not isinstance(self.maturity_days, int) or self.maturity_days <= 0
        ):
            out.append("maturity_days must be a positive integer or null")
        return out


ProductTerms = Union[RosTerms, YieldMagnetTerms, ReverseExchangeableTerms, PpnTerms, BarrierNoteTerms]

PRODUCTS = {
    cls.product: cls
    for cls in (RosTerms, YieldMagnetTerms, ReverseExchangeableTerms, PpnTerms, BarrierNoteTerms)
}


@dataclass(frozen=True)
class Scenario:
    """Sign probability plus conditional expected returns.

    ``p_nonneg`` is the probability of the product's "up" branch. Which side
    the zero return falls on is product specific, see ``expectation``.
    """

    p_nonneg: float
    cond_loss: float | None = None
    cond_gain: float | None = None

    def problems(self):
        out = []
        if not _finite(self.p_nonneg) or not 0 <= self.p_nonneg <= 1:
            out.append("p_nonneg must be in [0, 1]")
        if self.cond_loss is not None and (not _finite(self.cond_loss) or self.cond_loss > 0):
            out.append("cond_loss must be a finite value <= 0")
        if self.cond_gain is not None and (not _finite(self.cond_gain) or self.cond_gain < 0):
            out.append("cond_gain must be a finite value >= 0")
        return out


@dataclass(frozen=True)
class DiscreteReturnDistribution:
    """Finite set of (return, probability) outcomes."""

    outcomes: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "outcomes", tuple((float(r), float(p)) for r, p in self.outcomes)
        )

    @property
    def returns(self):
        return [r for r, _ in self.outcomes]

    @property
    def probs(self):
        return [p for _, p in self.outcomes]

    def problems(self):
        if not self.outcomes:
            return ["outcomes must be nonempty"]
        out = []
        if any(not math.isfinite(r) or r <= -1 for r, _ in self.outcomes):
            out.append("returns must be finite and > -1")
        if any(not math.isfinite(p) or p < 0 for _, p in self.outcomes):
            out.append("probabilities must be finite and >= 0")
        elif abs(math.fsum(self.probs) - 1.0) > PROB_TOL:
            out.append("mass != 1")
        return out


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    reason: str | None = None
    problems: tuple = ()

    def __bool__(self):
        return self.ok


def validate_terms(obj) -> ValidationReport:
    """Check a term sheet, scenario or distribution. Never raises."""
    try:
        probs = obj.problems()
    except AttributeError:
        return ValidationReport(False, f"not a validatable object: {type(obj).__name__}")
    except TypeError as exc:
        return ValidationReport(False, f"malformed field: {exc}")
    if probs:
        return ValidationReport(False, probs[0], tuple(probs))
    return ValidationReport(True)


def require_valid(obj):
    report = validate_terms(obj)
    if not report.ok:
        raise DomainError(f"invalid {type(obj).__name__}: {report.reason}")
    return obj


# --- JSON -------------------------------------------------------------------


def _encode(value):
    if isinstance(value, dt.date):
        return value.isoformat()
    if isinstance(value, tuple):
        return [_encode(v) for v in value]
    return value


def terms_to_dict(terms) -> dict:
    return {
        "product": terms.product,
        "terms": {f.name: _encode(getattr(terms, f.name)) for f in fields(terms)},
    }


def _parse_date(text, name):
    try:
        return dt.date.fromisoformat(text)
    except (TypeError, ValueError):
        raise ParseError(f"{name}: expected ISO-8601 date, got {text!r}") from None


def terms_from_dict(doc: dict):
    if not isinstance(doc, dict) or "product" not in doc or "terms" not in doc:
        raise ParseError("terms document needs top-level 'product' and 'terms'")
    tag = doc["product"].replace("-", "_") if isinstance(doc["product"], str) else None
    cls = PRODUCTS.get(tag)
    if cls is None:
        raise ParseError(f"unknown product {doc['product']!r}; expected one of {sorted(PRODUCTS)}")
    raw = doc["terms"]
    if not isinstance(raw, dict):
        raise ParseError("'terms' must be an object")
    known = {f.name for f in fields(cls)}
    unknown = set(raw) - known
    if unknown:
        raise ParseError(f"unknown {tag} field(s): {', '.join(sorted(unknown))}")
    kwargs = dict(raw)
    if cls is YieldMagnetTerms:
        for name in ("settlement_date", "redemption_date"):
            if name in kwargs:
                kwargs[name] = _parse_date(kwargs[name], name)
        if "payment_dates" in kwargs:
            if not isinstance(kwargs["payment_dates"], list):
                raise ParseError("payment_dates must be a list")
            kwargs["payment_dates"] = tuple(
                _parse_date(d, "payment_dates") for d in kwargs["payment_dates"]
            )
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ParseError(str(exc)) from None


def dumps_terms(terms) -> str:
    return json.dumps(terms_to_dict(terms), indent=2)


def loads_terms(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    return terms_from_dict(doc)


def load_terms(path):
    return loads_terms(Path(path).read_text(encoding="utf-8"))


def dumps_distribution(dist: DiscreteReturnDistribution) -> str:
    return json.dumps({"outcomes": [{"r": r, "p": p} for r, p in dist.outcomes]})


def loads_distribution(text: str) -> DiscreteReturnDistribution:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    rows = doc.get("outcomes") if isinstance(doc, dict) else None
    if not isinstance(rows, list):
        raise ParseError("distribution document needs an 'outcomes' list")
    outcomes = []
    for i, row in enumerate(rows):
        try:
            outcomes.append((float(row["r"]), float(row["p"])))
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"outcome {i} needs numeric 'r' and 'p'") from None
    return DiscreteReturnDistribution(tuple(outcomes))


def load_distribution(path) -> DiscreteReturnDistribution:
    return loads_distribution(Path(path).read_text(encoding="utf-8"))
