"""Run reports: diffable CSV series, per-run traces, and a JSON mirror.

The CSV series has exactly the columns ``round,min,avg,max``; averages are
written with six fixed decimals and integral extremes as plain integers, so
re-running with the same seed produces byte-identical files. Wall-clock
timings live only in the JSON report, keeping the CSV deterministic.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import TaskgridError


def format_number(x):
    """Plain integer text when integral, six fixed decimals otherwise."""
    if isinstance(x, bool):
        raise TaskgridError("booleans are not report numbers")
    if isinstance(x, int):
        return str(x)
    if float(x).is_integer():
        return str(int(x))
    return f"{float(x):.6f}"


def write_series_csv(path, series):
    """Write (round, min, avg, max) rows.

    The average column always carries six decimals; min and max are
    integers whenever the underlying values are.
    """
    lines = ["round,min,avg,max"]
    for rnd, mn, avg, mx in series:
        lines.append(
            f"{rnd},{format_number(mn)},{float(avg):.6f},{format_number(mx)}"
        )
    _write_text(path, "\n".join(lines) + "\n")


def write_trace_csv(path, trace):
    """Write one run's per-round records: round, robot, action, value."""
    lines = ["round,robot,action,value"]
    for rnd, robot_id, action_id, value in trace.records:
        lines.append(f"{rnd},{robot_id},{action_id},{format_number(value)}")
    _write_text(path, "\n".join(lines) + "\n")


def _write_text(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise TaskgridError(f"cannot write {path}: {exc}") from None


@dataclass
class RunReport:
    """Everything one learning invocation produced.

    All numeric content is reproducible from (scenario, config, seed);
    timings are informational only.
    """

    scenario_digest: str
    config: dict
    action_set_sizes: list
    series: list
    terminal_histogram: dict
    timings: dict = field(default_factory=dict)
    traces: list = None

    def to_object(self):
        out = {
            "scenario_digest": self.scenario_digest,
            "config": self.config,
            "action_set_sizes": list(self.action_set_sizes),
            "series": [
                [rnd, mn, float(avg), mx] for rnd, mn, avg, mx in self.series
            ],
            "terminal_histogram": {
                str(k): v for k, v in sorted(self.terminal_histogram.items())
            },
            "timings": {k: round(v, 6) for k, v in self.timings.items()},
        }
        if self.traces is not None:
            out["traces"] = [
                {
                    "initial_plan": list(t.initial_plan.action_ids),
                    "initial_value": t.initial_value,
                    "records": [list(r) for r in t.records],
                }
                for t in self.traces
            ]
        return out


def write_report_json(path, report):
    _write_text(path, json.dumps(report.to_object(), indent=2) + "\n")
