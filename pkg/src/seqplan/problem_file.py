"""Reading problem files and writing trajectory reports.

A problem file is a JSON object::

    {"d": 2, "k": 2, "r": 2, "n": 2,
     "tol_proj": 1e-9, "tol_valid": 1e-9,          # optional
     "waypoints": [[[0.5, 2.0], [0.5, -1.0]],      # n x k x d
                   [[0.25, 1.0], [0.75, 1.0]]]}

Floats are written with ``repr`` so every value round-trips exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .configuration import DEFAULT_TOL_PROJ, DEFAULT_TOL_VALID, Configuration, ProblemSpec, UnsupportedRegimeError
from .planner import PlanReport, PlanRequest, sample_times


class ProblemFileError(ValueError):
    """Malformed problem file; the message names the offending location."""


def _int_field(doc: dict, key: str) -> int:
    if key not in doc:
        raise ProblemFileError(f"missing required key '{key}'")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemFileError(f"'{key}': expected an integer, got {value!r}")
    return value


def _float_field(doc: dict, key: str, default: float) -> float:
    value = doc.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProblemFileError(f"'{key}': expected a number, got {value!r}")
    return float(value)


def parse_problem(text: str, source: str = "<input>") -> PlanRequest:
    """Parse problem-file text.

    Raises:
        ProblemFileError: for syntax or schema problems, with a location.
        UnsupportedRegimeError: when ``r < 2``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ProblemFileError(f"{source}: top level must be an object")

    try:
        d, k, r, n = (_int_field(doc, key) for key in ("d", "k", "r", "n"))
        tol_proj = _float_field(doc, "tol_proj", DEFAULT_TOL_PROJ)
        tol_valid = _float_field(doc, "tol_valid", DEFAULT_TOL_VALID)
    except ProblemFileError as exc:
        raise ProblemFileError(f"{source}: {exc}") from None
    try:
        spec = ProblemSpec(d, k, r, n, tol_proj, tol_valid)
    except UnsupportedRegimeError:
        raise
    except ValueError as exc:
        raise ProblemFileError(f"{source}: {exc}") from None

    raw = doc.get("waypoints")
    if not isinstance(raw, list):
        raise ProblemFileError(f"{source}: 'waypoints' must be a list of {n} configurations")
    if len(raw) != n:
        raise ProblemFileError(f"{source}: 'waypoints' has {len(raw)} entries, expected n={n}")
    waypoints = []
    for m, config in enumerate(raw):
        where = f"{source}: waypoints[{m}]"
        if not isinstance(config, list) or len(config) != k:
            raise ProblemFileError(f"{where}: expected a list of k={k} points")
        for i, point in enumerate(config):
            if not isinstance(point, list) or len(point) != d:
                raise ProblemFileError(f"{where}[{i}]: expected {d} coordinates")
            for c, value in enumerate(point):
                if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                    raise ProblemFileError(f"{where}[{i}][{c}]: expected a finite number, got {value!r}")
        waypoints.append(Configuration(np.array(config, dtype=float)))
    return PlanRequest(spec, tuple(waypoints))


def load_problem(path: str | Path) -> PlanRequest:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(f"{path}: {exc.strerror}") from exc
    return parse_problem(text, str(path))


def dump_problem(request: PlanRequest) -> str:
    doc = request.spec.to_dict()
    doc["waypoints"] = [w.to_list() for w in request.waypoints]
    return json.dumps(doc, indent=2)


def report_dict(request: PlanRequest, report: PlanReport, samples: int) -> dict[str, Any]:
    taus = sample_times(report.path, samples)
    values = report.path.evaluate(taus)
    return {
        "spec": request.spec.to_dict(),
        "strata": list(report.strata),
        "region": report.region,
        "region_range": list(request.spec.region_range),
        "region_count": request.spec.region_count,
        "breakpoints": report.path.breaks.tolist(),
        "validation": report.validation.to_dict(),
        "samples": [{"tau": float(t), "points": v.tolist()} for t, v in zip(taus, values)],
    }


def summary_dict(request: PlanRequest, report: PlanReport) -> dict[str, Any]:
    doc = report_dict(request, report, 2)
    del doc["samples"]
    return doc


def csv_header(d: int) -> list[str]:
    return ["tau", "robot"] + [f"x{c}" for c in range(1, d + 1)]


def trajectory_rows(taus: np.ndarray, values: np.ndarray) -> Iterable[list[str]]:
    for t, config in zip(taus, values):
        for i, point in enumerate(config, start=1):
            yield [repr(float(t)), str(i)] + [repr(float(x)) for x in point]


def trajectory_csv(report: PlanReport, samples: int) -> str:
    taus = sample_times(report.path, samples)
    values = report.path.evaluate(taus)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(csv_header(values.shape[2]))
    writer.writerows(trajectory_rows(taus, values))
    return buf.getvalue()


def read_trajectory_csv(text: str) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`trajectory_csv`: returns ``(taus, (m, k, d) values)``."""
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    d = len(header) - 2
    taus: list[float] = []
    points: dict[float, list[list[float]]] = {}
    for row in body:
        t = float(row[0])
        if t not in points:
            taus.append(t)
            points[t] = []
        points[t].append([float(x) for x in row[2 : 2 + d]])
    return np.array(taus), np.array([points[t] for t in taus])
