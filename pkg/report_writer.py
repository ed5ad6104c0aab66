"""
Run manifests and report emission (JSON schema v1, optional CSV tables).

JSON output is canonical: sorted keys, two-space indent, LF line endings and
a trailing newline, so identical runs give identical bytes. Wall-clock fields
only appear when timing is switched on.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from utils import ValidationError, log

LOG_PREFIX = "[report_writer]"

SCHEMA = "pr-lab/report/v1"
VERSION = "1.0.0"


@dataclass
class RunManifest:
    command: str
    params: dict
    seed: int = None
    workers: int = 1
    version: str = VERSION
    wall_time: float = None

    def to_dict(self) -> dict:
        data = {
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "workers": self.workers,
            "version": self.version,
        }
        if self.wall_time is not None:
            data["wall_time"] = self.wall_time
        return data


@dataclass
class Report:
    manifest: RunManifest
    outcome: dict
    rows: list = field(default=None)

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, "manifest": self.manifest.to_dict(), "outcome": self.outcome}


def _plain(value):
    """json.dumps fallback for numpy scalars, arrays, sets and tuples inside sets."""
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2, ensure_ascii=False, default=_plain) + "\n"


def to_csv(report: Report) -> str:
    """
    Table rows when the command produced them, otherwise the outcome
    flattened into a single row.
    """
    if report.rows:
        df = pd.DataFrame(report.rows)
    else:
        flat = json.loads(json.dumps(report.outcome, default=_plain))
        df = pd.json_normalize(flat, sep=".")
    df.insert(0, "command", report.manifest.command)
    return df.to_csv(index=False, lineterminator="\n")


def emit_report(report: Report, fmt: str = "json", destination: str = None):
    """
    Write the report to ``destination`` (stdout when None or '-').

    Raises:
        ValidationError: unknown format or unwritable destination
    """
    if fmt == "json":
        text = to_json(report)
    elif fmt == "csv":
        text = to_csv(report)
    else:
        raise ValidationError(f"report format must be json or csv, got {fmt!r}")

    if destination in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise ValidationError(f"cannot write report to {destination}: {e}")
    log(LOG_PREFIX, f"✅ Report written to {destination} ({fmt})")
