"""Experiment report serialization: flat CSV rows and nested JSON.

Floats are written with 17 significant digits so CSV output round-trips
doubles exactly and repeated runs are byte-identical.
"""

from __future__ import annotations

import io
import json
import numbers
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


def format_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, numbers.Integral):
        return str(int(v))
    if isinstance(v, numbers.Real):
        return "%.17g" % float(v)
    if isinstance(v, numbers.Complex):
        return "%.17g%+.17gj" % (v.real, v.imag)
    return str(v)


@dataclass
class ExperimentReport:
    command: str
    seed: int
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)       # list of per-column tuples
    timings: dict = field(default_factory=dict)    # stage -> seconds

    def add_row(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError("row width does not match columns")
        self.rows.append(tuple(values))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(format_value(v) for v in row) + "\n")
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "seed": self.seed,
            "timings": {k: format_value(v) for k, v in sorted(self.timings.items())},
            "columns": self.columns,
            "rows": [[format_value(v) for v in row] for row in self.rows],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
