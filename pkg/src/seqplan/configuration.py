"""Problem setup, robot configurations and projection strata.

Obstacles sit at the canonical positions ``(i - 1, 0, ..., 0)`` for
``i = 1..r``. Points are indexed globally the way the planner formulas
expect: obstacles carry indices ``1..r`` and robot ``i`` carries ``r + i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

DEFAULT_TOL_PROJ = 1e-9
DEFAULT_TOL_VALID = 1e-9


class UnsupportedRegimeError(ValueError):
    """Raised for fewer than two obstacles; those planners are not provided here."""


class DimensionMismatchError(ValueError):
    pass


class InvalidConfigurationError(ValueError):
    def __init__(self, verdict: "Verdict", message: str | None = None):
        self.verdict = verdict
        super().__init__(message or verdict.describe())


@dataclass(frozen=True)
class ProblemSpec:
    """Dimensions, robot/obstacle/waypoint counts and tolerances of one problem."""

    d: int
    k: int
    r: int
    n: int
    tol_proj: float = DEFAULT_TOL_PROJ
    tol_valid: float = DEFAULT_TOL_VALID

    def __post_init__(self) -> None:
        if self.r < 2:
            raise UnsupportedRegimeError(
                f"r={self.r}: only r >= 2 obstacles are supported; the r in {{0, 1}} "
                "planners follow from the obstacle-free case and are out of scope"
            )
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.tol_proj < 0 or self.tol_valid < 0:
            raise ValueError("tolerances must be nonnegative")
        if not self.tol_proj < 1.0 / (4 * (self.k + self.r)):
            raise ValueError(
                f"tol_proj={self.tol_proj} must be below 1/(4(k+r)) = {1.0 / (4 * (self.k + self.r))}"
            )

    @cached_property
    def obstacles(self) -> np.ndarray:
        """``(r, d)`` array of canonical obstacle positions."""
        q = np.zeros((self.r, self.d))
        q[:, 0] = np.arange(self.r, dtype=float)
        q.setflags(write=False)
        return q

    @property
    def size(self) -> int:
        """Total number of points, obstacles included."""
        return self.k + self.r

    @property
    def region_count(self) -> int:
        return self.n * self.k + 1

    @property
    def region_range(self) -> tuple[int, int]:
        return self.n * self.r, self.n * (self.k + self.r)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "k": self.k,
            "r": self.r,
            "n": self.n,
            "tol_proj": self.tol_proj,
            "tol_valid": self.tol_valid,
        }


@dataclass(frozen=True, eq=False)
class Configuration:
    """Ordered positions of the k robots, stored as a read-only ``(k, d)`` array."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2:
            raise DimensionMismatchError(f"expected a (k, d) array of points, got shape {pts.shape}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, *points: Sequence[float]) -> "Configuration":
        return cls(np.array(points, dtype=float))

    @property
    def k(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return np.array_equal(self.points, other.points)

    def __hash__(self) -> int:
        return hash(self.points.tobytes())

    def __repr__(self) -> str:
        return f"Configuration({self.points.tolist()})"

    def is_on_axis(self) -> bool:
        return bool(np.all(self.points[:, 1:] == 0.0))

    def to_list(self) -> list[list[float]]:
        return self.points.tolist()


@dataclass(frozen=True)
class Verdict:
    """Outcome of a validity check. ``pair`` uses 1-based robot/obstacle numbers."""

    valid: bool
    kind: str | None = None  # "robot-robot" or "robot-obstacle"
    pair: tuple[int, int] | None = None
    distance: float | None = None

    def __bool__(self) -> bool:
        return self.valid

    def describe(self) -> str:
        if self.valid:
            return "valid"
        a, b = self.pair
        if self.kind == "robot-obstacle":
            return f"robot {a} is within tolerance of obstacle {b} (distance {self.distance!r})"
        return f"robots {a} and {b} are within tolerance of each other (distance {self.distance!r})"


@dataclass(frozen=True)
class StratumInfo:
    """Projection stratum of a configuration.

    ``pattern`` lists groups of global point indices (obstacles ``1..r``,
    robots ``r+1..r+k``) whose first coordinates agree up to ``tol_proj``,
    ordered by increasing projection. ``levels`` holds each group's mean
    projection.
    """

    cp: int
    pattern: tuple[tuple[int, ...], ...]
    epsilon: float
    levels: tuple[float, ...] = field(default=())

    def group_of(self, index: int) -> int:
        for g, members in enumerate(self.pattern):
            if index in members:
                return g
        raise KeyError(index)


def project(point: Sequence[float]) -> float:
    """First coordinate of a point."""
    return float(point[0])


def _check_dimensions(spec: ProblemSpec, config: Configuration) -> None:
    if config.points.shape != (spec.k, spec.d):
        raise DimensionMismatchError(
            f"configuration has shape {config.points.shape}, expected ({spec.k}, {spec.d})"
        )


def validate_configuration(spec: ProblemSpec, config: Configuration) -> Verdict:
    """Check robot/robot and robot/obstacle separation against ``tol_valid``.

    Robots are scanned in order; for each robot the obstacles are checked
    first, then the robots with a larger index. The first offending pair is
    reported.

    Raises:
        DimensionMismatchError: if the configuration shape is not ``(k, d)``.
    """
    _check_dimensions(spec, config)
    x = config.points
    if not np.all(np.isfinite(x)):
        raise ValueError("configuration contains non-finite coordinates")
    to_obstacles = np.linalg.norm(x[:, None, :] - spec.obstacles[None, :, :], axis=-1)
    between = np.linalg.norm(x[:, None, :] - x[None, :, :], axis=-1)
    for i in range(spec.k):
        for j in range(spec.r):
            if to_obstacles[i, j] <= spec.tol_valid:
                return Verdict(False, "robot-obstacle", (i + 1, j + 1), float(to_obstacles[i, j]))
        for j in range(i + 1, spec.k):
            if between[i, j] <= spec.tol_valid:
                return Verdict(False, "robot-robot", (i + 1, j + 1), float(between[i, j]))
    return Verdict(True)


def require_valid(spec: ProblemSpec, config: Configuration) -> None:
    verdict = validate_configuration(spec, config)
    if not verdict:
        raise InvalidConfigurationError(verdict)


def all_projections(spec: ProblemSpec, points: np.ndarray) -> np.ndarray:
    """Projections of obstacles followed by robots, in global index order."""
    return np.concatenate([np.arange(spec.r, dtype=float), points[:, 0]])


def cluster_projections(values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Transitively cluster values whose sorted neighbours differ by at most ``tol``.

    Returns index arrays, one per cluster, ordered by increasing value.
    """
    order = np.argsort(values, kind="stable")
    splits = np.nonzero(np.diff(values[order]) > tol)[0] + 1
    return np.split(order, splits)


def stratum(spec: ProblemSpec, config: Configuration) -> StratumInfo:
    """Group the k+r projections and compute ``cp`` and the shift scale epsilon.

    Epsilon is the smallest gap between distinct group means divided by k+r.
    """
    _check_dimensions(spec, config)
    values = all_projections(spec, config.points)
    groups = cluster_projections(values, spec.tol_proj)
    levels = np.array([values[g].mean() for g in groups])
    # r >= 2 distinct obstacle projections guarantee at least two groups
    epsilon = float(np.min(np.diff(levels))) / spec.size
    pattern = tuple(tuple(sorted(int(i) + 1 for i in g)) for g in groups)
    return StratumInfo(len(groups), pattern, epsilon, tuple(float(v) for v in levels))


def min_projection_gap(spec: ProblemSpec, config: Configuration) -> float:
    """Smallest gap between distinct projection groups."""
    return stratum(spec, config).epsilon * spec.size


def min_separation(spec: ProblemSpec, config: Configuration) -> float:
    """Smallest robot/robot or robot/obstacle distance of a configuration."""
    x = config.points
    best = float(np.min(np.linalg.norm(x[:, None, :] - spec.obstacles[None, :, :], axis=-1)))
    if spec.k > 1:
        dd = np.linalg.norm(x[:, None, :] - x[None, :, :], axis=-1)
        best = min(best, float(np.min(dd[np.triu_indices(spec.k, 1)])))
    return best


_FRESH_LOW, _FRESH_MARGIN = -1.0, 1.0
_MIN_GAP = 0.02
_MIN_LIFT = 0.05


def random_configuration(
    spec: ProblemSpec,
    seed: int | np.random.Generator | None = None,
    target_cp: int | None = None,
) -> Configuration:
    """Draw a valid configuration, optionally with a prescribed ``cp``.

    ``target_cp - r`` robots get fresh projection values (kept at least 0.02
    apart from every other value); the rest reuse obstacle projections or one
    of the fresh values. Non-first coordinates are drawn so that robots sharing
    a projection stay at least 0.05 apart from each other and off the axis.
    Without ``target_cp`` all projections are distinct.
    """
    k, r = spec.k, spec.r
    if target_cp is None:
        target_cp = k + r
    if not r <= target_cp <= k + r:
        raise ValueError(f"target_cp must lie in [{r}, {k + r}], got {target_cp}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    fresh_count = target_cp - r
    taken = list(range(r))
    fresh: list[float] = []
    while len(fresh) < fresh_count:
        v = float(rng.uniform(_FRESH_LOW, r - 1 + _FRESH_MARGIN))
        if all(abs(v - w) >= _MIN_GAP for w in taken):
            taken.append(v)
            fresh.append(v)

    robots = rng.permutation(k)
    proj = np.empty(k)
    proj[robots[:fresh_count]] = fresh
    pool = np.array(taken, dtype=float)
    if k > fresh_count:
        proj[robots[fresh_count:]] = rng.choice(pool, size=k - fresh_count)

    points = np.zeros((k, spec.d))
    points[:, 0] = proj
    for i in range(k):
        shares_obstacle = bool(np.any(proj[i] == np.arange(r)))
        while True:
            y = rng.uniform(-2.0, 2.0, size=spec.d - 1)
            if shares_obstacle and np.linalg.norm(y) < _MIN_LIFT:
                continue
            same = [j for j in range(i) if proj[j] == proj[i]]
            if any(np.linalg.norm(points[j, 1:] - y) < _MIN_LIFT for j in same):
                continue
            points[i, 1:] = y
            break
    return Configuration(points)
