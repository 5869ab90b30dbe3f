"""Command line entry point.

    structnotes payoff   <product> --terms T.json (--index-return X | --stock-return X | --prices P.csv)
    structnotes bound    <product> --terms T.json --p-nonneg P [--cond-loss L] [--cond-gain G]
    structnotes sweep    <product> --terms T.json --p-nonneg A:B:S (--cond-loss A:B:S | --cond-gain A:B:S)
    structnotes backtest <product> --terms T.json --prices P.csv [--start YYYY-MM-DD]
    structnotes simulate <product> --terms T.json --dist D.json --paths N --seed S

Exit status: 0 on success, 2 for bad input, 1 for anything unexpected.
"""
from __future__ import annotations

import argparse
import datetime as dt
import sys
from decimal import Decimal, InvalidOperation

from . import coupons, expectation, market_data, payoffs
from .errors import StructNotesError, UsageError
from .reports import (
    bound_fields,
    build_report,
    dumps_report,
    money,
    num,
    sweep_csv,
)
from .terms import (
    BarrierNoteTerms,
    PpnTerms,
    ReverseExchangeableTerms,
    RosTerms,
    Scenario,
    YieldMagnetTerms,
    load_distribution,
    load_terms,
    require_valid,
    terms_to_dict,
)

PRODUCT_NAMES = {
    "ros": RosTerms,
    "yield-magnet": YieldMagnetTerms,
    "rev-exch": ReverseExchangeableTerms,
    "ppn": PpnTerms,
    "barrier": BarrierNoteTerms,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def _product(text):
    key = text.replace("_", "-")
    if key not in PRODUCT_NAMES:
        raise argparse.ArgumentTypeError(f"unknown product {text!r}")
    return key


def _date(text):
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {text!r}") from None


def parse_grid(text):
    """``start:stop:step`` (stop inclusive) or a single value."""
    parts = text.split(":")
    try:
        nums = [Decimal(p) for p in parts]
    except InvalidOperation:
        raise UsageError(f"bad grid {text!r}") from None
    if len(nums) == 1:
        return [float(nums[0])]
    if len(nums) != 3:
        raise UsageError(f"grid must be start:stop:step, got {text!r}")
    start, stop, step = nums
    if step == 0:
        raise UsageError("grid step must be nonzero")
    out = []
    v = start
    while (step > 0 and v <= stop) or (step < 0 and v >= stop):
        out.append(float(v))
        v += step
    return out


def _load_product_terms(args):
    terms = load_terms(args.terms)
    expected = PRODUCT_NAMES[args.product]
    if not isinstance(terms, expected):
        raise UsageError(f"--terms holds a {terms.product} term sheet, command asked for {args.product}")
    return require_valid(terms)


def _need(value, flag, product):
    if value is None:
        raise UsageError(f"{product} needs {flag}")
    return value


# --- commands -----------------------------------------------------------------


def cmd_payoff(args):
    terms = _load_product_terms(args)
    inputs = {"product": args.product, "terms": terms_to_dict(terms)}
    files = {"terms": args.terms}
    if args.product in ("ros", "ppn"):
        i = _need(args.index_return, "--index-return", args.product)
        inputs["index_return"] = i
        kernel = payoffs.ros_return if args.product == "ros" else payoffs.ppn_return
        r = kernel(i, terms)
        net = payoffs.ros_net_payment(i, terms) if args.product == "ros" else r * terms.price_per_note
        outputs = {"return": num(r), "net_payment": money(net)}
    elif args.product == "rev-exch":
        x = _need(args.stock_return, "--stock-return", args.product)
        inputs["stock_return"] = x
        r = payoffs.rev_exch_return(x, terms)
        outputs = {"return": num(r), "net_payment": money(r * terms.price_per_note)}
    elif args.product == "barrier":
        path = market_data.load_price_csv(_need(args.prices, "--prices", args.product))
        files["prices"] = args.prices
        inputs["observations"] = len(path)
        outputs = {
            "breached": payoffs.barrier_breached(path, terms),
            "return": num(payoffs.barrier_note_return(path, terms)),
        }
    else:
        tbar = _need(args.theta_bar, "--theta-bar", args.product)
        inputs["theta_bar"] = tbar
        outputs = {"coupon_rate": num(coupons.coupon_rate(tbar, terms))}
    return build_report(args.argv, inputs, outputs, files, timestamp=not args.no_timestamp)


def compute_bound(product, terms, p, cond_loss=None, cond_gain=None):
    if product == "ros":
        return expectation.ros_expected_return_bound(Scenario(p, cond_loss, cond_gain), terms)
    if product == "yield-magnet":
        return expectation.ym_expected_coupon_bound(p, terms)
    if product == "rev-exch":
        _need(cond_loss, "--cond-loss", product)
        return expectation.rev_exch_expected_return(Scenario(p, cond_loss, cond_gain), terms)
    if product == "ppn":
        _need(cond_gain, "--cond-gain", product)
        return expectation.ppn_expected_return(Scenario(p, cond_loss, cond_gain), terms)
    raise UsageError("barrier notes have no closed-form bound; they need path distributions")


def cmd_bound(args):
    terms = _load_product_terms(args)
    b = compute_bound(args.product, terms, args.p_nonneg, args.cond_loss, args.cond_gain)
    inputs = {
        "product": args.product,
        "terms": terms_to_dict(terms),
        "p_nonneg": args.p_nonneg,
        "cond_loss": args.cond_loss,
        "cond_gain": args.cond_gain,
    }
    return build_report(args.argv, inputs, bound_fields(b), {"terms": args.terms}, timestamp=not args.no_timestamp)


def cmd_sweep(args):
    """Returns CSV text rather than a JSON report."""
    terms = _load_product_terms(args)
    ps = parse_grid(args.p_nonneg)
    if args.product == "ppn":
        axis, grid = "cond_gain", parse_grid(_need(args.cond_gain, "--cond-gain", "ppn sweep"))
    elif args.product == "yield-magnet":
        axis, grid = None, [None]
    elif args.product == "rev-exch" or args.cond_loss is not None:
        axis, grid = "cond_loss", parse_grid(_need(args.cond_loss, "--cond-loss", args.product))
    else:
        # ros without a loss estimate: one-term bound
        axis, grid = None, [None]
    if not ps or not grid:
        raise UsageError("sweep grid is empty")
    rows = []
    for p in ps:
        for v in grid:
            kw = {axis: v} if axis else {}
            b = compute_bound(args.product, terms, p, **kw)
            rows.append((p, v, b.value) if axis else (p, b.value))
    header = ["p_nonneg", axis, "bound"] if axis else ["p_nonneg", "bound"]
    return sweep_csv(header, rows)


def _years_later(start, years):
    try:
        return start.replace(year=start.year + years)
    except ValueError:  # Feb 29
        return start.replace(year=start.year + years, day=28)


def backtest_window(product, terms, path, start):
    if product in ("ppn", "rev-exch"):
        days = (_years_later(start, terms.maturity_years) - start).days
    else:
        days = terms.maturity_days
    return market_data.window(path, start, days), days


def cmd_backtest(args):
    terms = _load_product_terms(args)
    files = {"terms": args.terms, "prices": args.prices}
    inputs = {"product": args.product, "terms": terms_to_dict(terms), "start": args.start and args.start.isoformat()}
    if args.product == "yield-magnet":
        basket = market_data.load_basket_csv(args.prices)
        outputs = {"years": yield_magnet_backtest(terms, basket)}
        return build_report(args.argv, inputs, outputs, files, timestamp=not args.no_timestamp)

    if args.start is None:
        raise UsageError(f"{args.product} backtest needs --start")
    path = market_data.load_price_csv(args.prices)
    win, days = backtest_window(args.product, terms, path, args.start)
    i = market_data.realized_return(win)
    target = win.dates[0] + dt.timedelta(days=days) if days else None
    outputs = {
        "window": {
            "start": win.dates[0].isoformat(),
            "end": win.dates[-1].isoformat(),
            "target_end": target.isoformat() if target else None,
            "observations": len(win),
        },
        "realized_return": num(i),
    }
    if args.product == "ros":
        outputs["net_payment"] = money(payoffs.ros_net_payment(i, terms))
        outputs["return"] = num(payoffs.ros_return(i, terms))
    elif args.product == "ppn":
        r = payoffs.ppn_return(i, terms)
        outputs["return"] = num(r)
        outputs["net_payment"] = money(r * terms.price_per_note)
    elif args.product == "rev-exch":
        r = payoffs.rev_exch_return(i, terms)
        outputs["return"] = num(r)
        outputs["net_payment"] = money(r * terms.price_per_note)
        outputs["shares_delivered"] = payoffs.rev_exch_shares_delivered(i, terms, win.first)
    else:
        outputs["breached"] = payoffs.barrier_breached(win, terms)
        outputs["return"] = num(payoffs.barrier_note_return(win, terms))
    return build_report(args.argv, inputs, outputs, files, timestamp=not args.no_timestamp)


def yield_magnet_backtest(terms, basket):
    rows = coupons.basket_observations(terms, basket)
    state = coupons.CouponState.initial(terms)
    out = []
    for pay, dd, obs in rows:
        state, res = coupons.advance_coupon_year_detail(state, obs, terms)
        out.append(
            {
                "payment_date": pay.isoformat(),
                "d_date": dd.isoformat() if dd else None,
                "theta_bar": res.tbar,
                "coupon": num(res.coupon),
                "coupon_payment": money(res.coupon * terms.redemption_price),
                "frozen_stocks": state.n_frozen,
            }
        )
    return out


def cmd_simulate(args):
    terms = _load_product_terms(args)
    dist = require_valid(load_distribution(args.dist))
    oracle = expectation.expected_return_oracle(terms, dist)
    mc = expectation.monte_carlo_expected_return(terms, dist, args.paths, args.seed, workers=args.workers)
    diff = abs(mc.estimate - oracle)
    if diff == 0:
        z = 0.0
    elif mc.std_error > 0:
        z = diff / mc.std_error
    else:
        z = None
    inputs = {
        "product": args.product,
        "terms": terms_to_dict(terms),
        "distribution": [{"r": r, "p": p} for r, p in dist.outcomes],
        "paths": args.paths,
        "seed": args.seed,
    }
    outputs = {
        "oracle": num(oracle),
        "estimate": num(mc.estimate),
        "std_error": num(mc.std_error),
        "z_score": z,
    }
    return build_report(
        args.argv, inputs, outputs, {"terms": args.terms, "dist": args.dist},
        seed=args.seed, timestamp=not args.no_timestamp,
    )


# --- parser -----------------------------------------------------------------


def build_parser():
    parser = _Parser(prog="structnotes", description="Structured note payoffs, bounds and backtests.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("product", type=_product, help="ros | yield-magnet | rev-exch | ppn | barrier")
        p.add_argument("--terms", required=True, help="term sheet JSON")
        p.add_argument("--no-timestamp", action="store_true", help="omit the report timestamp")
        p.set_defaults(func=func)
        return p

    p = add("payoff", cmd_payoff, "evaluate one payoff")
    p.add_argument("--index-return", type=float)
    p.add_argument("--stock-return", type=float)
    p.add_argument("--theta-bar", type=float)
    p.add_argument("--prices")

    p = add("bound", cmd_bound, "expected-return bound for a scenario")
    p.add_argument("--p-nonneg", type=float, required=True)
    p.add_argument("--cond-loss", type=float)
    p.add_argument("--cond-gain", type=float)

    p = add("sweep", cmd_sweep, "tabulate bounds over a scenario grid (CSV)")
    p.add_argument("--p-nonneg", required=True)
    p.add_argument("--cond-loss")
    p.add_argument("--cond-gain")

    p = add("backtest", cmd_backtest, "realized payoff on historical closes")
    p.add_argument("--prices", required=True)
    p.add_argument("--start", type=_date)

    p = add("simulate", cmd_simulate, "Monte Carlo vs brute-force expectation")
    p.add_argument("--dist", required=True)
    p.add_argument("--paths", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    return parser


def run(argv):
    """Parse and dispatch. Returns the output text; raises on errors."""
    args = build_parser().parse_args(argv)
    args.argv = ["structnotes", *argv]
    result = args.func(args)
    return result if isinstance(result, str) else dumps_report(result) + "\n"


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        text = run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (StructNotesError, OSError) as exc:
        print(f"structnotes: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"structnotes: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
