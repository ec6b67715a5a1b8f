"""Machine-readable check results.

Every verification emits a flat record with a fixed key set so CI can
diff reports across runs. Reports are deterministic: given the same
seed and grids, the serialized bytes are identical run to run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = 1

ERROR_FLOOR = 1e-16


def nearest_int_distance(x: float) -> float:
    """Distance from x to the nearest integer."""
    x = float(x)
    return abs(x - round(x))


def observed_order(errors, resolutions) -> float:
    """Least convergence order across successive grid refinements.

    Errors are floored at ERROR_FLOOR so a machine-zero entry does not
    produce an infinite or undefined rate.
    """
    if len(errors) != len(resolutions) or len(errors) < 2:
        raise ValueError("need one error per resolution, at least two of each")
    errs = [max(float(e), ERROR_FLOOR) for e in errors]
    ns = [float(n) for n in resolutions]
    rates = []
    for i in range(len(errs) - 1):
        if ns[i + 1] <= ns[i]:
            raise ValueError("resolutions must increase")
        rates.append(np.log(errs[i] / errs[i + 1]) / np.log(ns[i + 1] / ns[i]))
    return float(min(rates))


def _opt_float(x):
    return None if x is None else float(x)


@dataclass(frozen=True)
class CheckResult:
    """One verification outcome in the stable report schema."""

    check: str
    passed: bool
    value: float | None = None
    residual: float | None = None
    nearest_int_distance: float | None = None
    grids: tuple | None = None
    observed_order: float | None = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "value": _opt_float(self.value),
            "residual": _opt_float(self.residual),
            "nearest_int_distance": _opt_float(self.nearest_int_distance),
            "grids": None if self.grids is None else [list(g) for g in self.grids],
            "observed_order": _opt_float(self.observed_order),
            "pass": bool(self.passed),
        }
        if self.detail:
            out["detail"] = _plain(self.detail)
        return out


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def build_report(suite: str, results, *, seed=None, grid=None, corpus=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "seed": seed,
        "grid": None if grid is None else list(grid),
        "corpus": corpus,
        "results": [r.to_dict() for r in results],
        "all_pass": all(r.passed for r in results),
    }


def render_report(report: dict) -> str:
    """Deterministic serialization: sorted keys, fixed indentation."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_report(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_report(report))


def format_lines(report: dict) -> str:
    """Human-oriented one-line-per-check summary."""
    lines = [f"suite {report['suite']}: {'PASS' if report['all_pass'] else 'FAIL'}"]
    for r in report["results"]:
        mark = "pass" if r["pass"] else "FAIL"
        bits = [f"  [{mark}] {r['check']}"]
        if r["value"] is not None:
            bits.append(f"value={r['value']:.6g}")
        if r["residual"] is not None:
            bits.append(f"residual={r['residual']:.3g}")
        if r["nearest_int_distance"] is not None:
            bits.append(f"mod1={r['nearest_int_distance']:.3g}")
        if r["observed_order"] is not None:
            bits.append(f"order={r['observed_order']:.2f}")
        lines.append(" ".join(bits))
    return "\n".join(lines) + "\n"
