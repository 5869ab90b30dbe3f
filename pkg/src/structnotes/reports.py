"""Report assembly and number formatting for the command line."""
from __future__ import annotations

import csv
import datetime as dt
import hashlib
import io
import json
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path

from . import __version__


def display(x, sig=4):
    """Round to ``sig`` significant figures for human-facing output."""
    if x is None:
        return None
    return format(float(x), f".{sig}g")


def dollars(x):
    """Two-decimal money string, rounded half to even."""
    return str(Decimal(repr(float(x))).quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN))


def num(x):
    return {"value": x, "display": display(x)}


def money(x):
    return {"value": x, "display": display(x), "dollars": dollars(x)}


def bound_fields(bound):
    return {
        "value": num(bound.value),
        "kind": bound.kind,
        "decomposition": [
            {
                "branch": b.label,
                "conditional_expectation": b.cond_expectation,
                "probability": b.probability,
                "contribution": b.contribution,
            }
            for b in bound.decomposition
        ],
    }


def file_digest(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def build_report(argv, inputs, outputs, files=None, seed=None, timestamp=True):
    report = {
        "command": " ".join(argv),
        "inputs": inputs,
        "outputs": outputs,
        "provenance": {
            "files": {k: {"path": str(v), "sha256": file_digest(v)} for k, v in (files or {}).items()},
            "seed": seed,
            "version": __version__,
        },
    }
    if timestamp:
        report["timestamp"] = dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")
    return report


def dumps_report(report):
    return json.dumps(report, indent=2, allow_nan=False)


def sweep_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()
