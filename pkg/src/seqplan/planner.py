"""End-to-end sequential planning: stratify the waypoints, assemble the glued
path and check it by dense sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .configuration import (
    Configuration,
    InvalidConfigurationError,
    ProblemSpec,
    UnsupportedRegimeError,
    stratum,
    validate_configuration,
)
from .deform import deformation_to_axis
from .sections import PiecewisePath, gamma_n, glue_path

WAYPOINT_TOL = 1e-9
DEFAULT_VALIDATION_SAMPLES = 10_000


class InvalidWaypointError(InvalidConfigurationError):
    def __init__(self, index: int, verdict):
        self.index = index
        super().__init__(verdict, f"waypoint {index}: {verdict.describe()}")


@dataclass(frozen=True)
class PlanRequest:
    spec: ProblemSpec
    waypoints: tuple[Configuration, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "waypoints", tuple(self.waypoints))
        if len(self.waypoints) != self.spec.n:
            raise ValueError(f"expected {self.spec.n} waypoints, got {len(self.waypoints)}")


@dataclass(frozen=True)
class ValidationStats:
    samples: int
    min_robot_distance: float  # inf when k = 1
    min_obstacle_distance: float
    max_waypoint_deviation: float
    passed: bool

    @property
    def min_clearance(self) -> float:
        return min(self.min_robot_distance, self.min_obstacle_distance)

    def to_dict(self) -> dict:
        rr = self.min_robot_distance
        return {
            "samples": self.samples,
            "min_robot_distance": None if math.isinf(rr) else rr,
            "min_obstacle_distance": self.min_obstacle_distance,
            "max_waypoint_deviation": self.max_waypoint_deviation,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class PlanReport:
    strata: tuple[int, ...]
    region: int
    path: PiecewisePath
    validation: ValidationStats


def region_index(spec: ProblemSpec, waypoints: Sequence[Configuration]) -> tuple[tuple[int, ...], int]:
    """Strata ``cp(C_m)`` of the waypoints and their sum, the region index.

    Raises:
        InvalidWaypointError: naming the first invalid waypoint (1-based).
    """
    strata = []
    for m, c in enumerate(waypoints, start=1):
        verdict = validate_configuration(spec, c)
        if not verdict:
            raise InvalidWaypointError(m, verdict)
        strata.append(stratum(spec, c).cp)
    return tuple(strata), sum(strata)


def build_path(spec: ProblemSpec, waypoints: Sequence[Configuration]) -> PiecewisePath:
    """The glued section: deform each waypoint onto the axis, ladder between
    the images, and splice the deformations in and out around each leg."""
    h = deformation_to_axis(spec)
    return glue_path([h] * len(waypoints), lambda ys: gamma_n(spec, ys), waypoints)


def plan(request: PlanRequest, validation_samples: int = DEFAULT_VALIDATION_SAMPLES) -> PlanReport:
    spec = request.spec
    if spec.r < 2:  # ProblemSpec already refuses this; kept for hand-built specs
        raise UnsupportedRegimeError(f"r={spec.r} is not supported")
    strata, region = region_index(spec, request.waypoints)
    path = build_path(spec, request.waypoints)
    stats = validate_path(spec, path, request.waypoints, validation_samples)
    return PlanReport(strata, region, path, stats)


def sample_times(path: PiecewisePath, m: int) -> np.ndarray:
    if m < 2:
        raise ValueError("need at least two samples")
    return np.unique(np.concatenate([np.linspace(0.0, 1.0, m), path.breaks]))


def sample_path(path: PiecewisePath, m: int) -> list[tuple[float, Configuration]]:
    """``m`` uniform samples plus every breakpoint, sorted and deduplicated."""
    taus = sample_times(path, m)
    values = path.evaluate(taus)
    return [(float(t), Configuration(v)) for t, v in zip(taus, values)]


def clearances(spec: ProblemSpec, samples: np.ndarray) -> tuple[float, float]:
    """Minimum robot/robot and robot/obstacle distances over ``(m, k, d)`` samples."""
    to_obstacles = np.linalg.norm(samples[:, :, None, :] - spec.obstacles[None, None, :, :], axis=-1)
    ro = float(to_obstacles.min())
    if spec.k < 2:
        return math.inf, ro
    i, j = np.triu_indices(spec.k, 1)
    rr = float(np.linalg.norm(samples[:, i, :] - samples[:, j, :], axis=-1).min())
    return rr, ro


def waypoint_times(n: int) -> np.ndarray:
    return np.array([m / (n - 1) for m in range(n)])


def validate_path(
    spec: ProblemSpec,
    path: PiecewisePath,
    waypoints: Sequence[Configuration],
    sample_count: int = DEFAULT_VALIDATION_SAMPLES,
) -> ValidationStats:
    """Sample the path densely (breakpoints included) and measure clearances and
    the deviation from the waypoints at their scheduled times ``m/(n-1)``."""
    taus = sample_times(path, sample_count)
    rr, ro = clearances(spec, path.evaluate(taus))
    at_waypoints = path.evaluate(waypoint_times(len(waypoints)))
    targets = np.stack([w.points for w in waypoints])
    deviation = float(np.max(np.abs(at_waypoints - targets)))
    passed = rr > 0.0 and ro > 0.0 and deviation <= WAYPOINT_TOL
    return ValidationStats(taus.size, rr, ro, deviation, passed)
