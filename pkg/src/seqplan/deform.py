"""Deformations that carry any configuration onto the first axis.

Two homotopies are provided: the desingularization shift, which separates
every projection by nudging robots along ``e_1``, and the flattening, which
moves each robot straight onto its first-axis projection. Their
concatenation deforms an arbitrary valid configuration into one that lies on
the axis with all projections distinct.

Homotopies are evaluated in bulk: ``sweep(config, ts)`` returns an
``(m, k, d)`` array for ``m`` time values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .configuration import Configuration, ProblemSpec, StratumInfo, stratum

Sweep = Callable[[np.ndarray, np.ndarray], np.ndarray]


class StratumError(ValueError):
    """A deformation was applied outside the stratum it is defined on."""


@dataclass(frozen=True)
class Homotopy:
    """A deformation ``(C, t) -> C_t`` with ``C_0 = C``.

    Attributes:
        sweep_fn: maps a ``(k, d)`` point array and a 1-d array of times to
            an ``(m, k, d)`` array.
        stages: names of the concatenated stages, in playback order.
        knots: interior times where the motion may have a corner.
        domain: human-readable description of where the homotopy is defined.
    """

    sweep_fn: Sweep
    stages: tuple[str, ...]
    knots: tuple[float, ...] = ()
    domain: str = ""

    def sweep(self, config: Configuration | np.ndarray, ts) -> np.ndarray:
        points = config.points if isinstance(config, Configuration) else np.asarray(config, float)
        return self.sweep_fn(points, np.atleast_1d(np.asarray(ts, dtype=float)))

    def __call__(self, config: Configuration, t: float) -> Configuration:
        return Configuration(self.sweep(config, [t])[0])

    def end(self, config: Configuration) -> Configuration:
        return self(config, 1.0)


def _check_t(t: float) -> None:
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")


# -- flattening ---------------------------------------------------------------


def _flatten_sweep(points: np.ndarray, ts: np.ndarray) -> np.ndarray:
    target = np.zeros_like(points)
    target[:, 0] = points[:, 0]
    step = target - points
    return points[None, :, :] + ts[:, None, None] * step[None, :, :]


def flattening(spec: ProblemSpec, strict: bool = True) -> Homotopy:
    """Straight-line motion of every robot onto its first-axis projection.

    Collision free only when all k+r projections are distinct. With
    ``strict`` the precondition is checked at every evaluation.
    """

    def sweep_fn(points: np.ndarray, ts: np.ndarray) -> np.ndarray:
        if strict:
            cp = stratum(spec, Configuration(points)).cp
            if cp != spec.size:
                raise StratumError(f"flattening needs cp = {spec.size}, got cp = {cp}")
        return _flatten_sweep(points, ts)

    return Homotopy(sweep_fn, ("flatten",), domain=f"cp = {spec.size}")


def phi(spec: ProblemSpec, config: Configuration, t: float) -> Configuration:
    """Flattening evaluated at a single time.

    Raises:
        StratumError: if some projections coincide.
    """
    _check_t(t)
    return flattening(spec)(config, t)


# -- desingularization --------------------------------------------------------


def _shifts(spec: ProblemSpec, info: StratumInfo) -> np.ndarray:
    # robot i (0-based) has global index j = r + i + 1 and moves by (j - 1) * eps
    return (spec.r + np.arange(spec.k, dtype=float)) * info.epsilon


def _desingularize_sweep(
    spec: ProblemSpec, points: np.ndarray, ts: np.ndarray, info: StratumInfo
) -> np.ndarray:
    out = np.broadcast_to(points, (ts.size,) + points.shape).copy()
    if info.cp == spec.size:
        return out
    out[:, :, 0] += ts[:, None] * _shifts(spec, info)[None, :]
    return out


def desingularization(spec: ProblemSpec) -> Homotopy:
    """Shift robots along ``e_1`` by ``t (j - 1) eps(C)`` so all projections separate.

    The stratum and epsilon are taken from the configuration at ``t = 0``.
    Configurations that already have ``cp = k + r`` stay put.
    """

    def sweep_fn(points: np.ndarray, ts: np.ndarray) -> np.ndarray:
        info = stratum(spec, Configuration(points))
        return _desingularize_sweep(spec, points, ts, info)

    return Homotopy(sweep_fn, ("desingularize",), domain="valid configurations")


def desingularize(
    spec: ProblemSpec, config: Configuration, info: StratumInfo, t: float
) -> Configuration:
    _check_t(t)
    return Configuration(_desingularize_sweep(spec, config.points, np.array([t]), info)[0])


# -- concatenation ------------------------------------------------------------


def concat_homotopy(first: Homotopy, second: Homotopy) -> Homotopy:
    """Play ``first`` on ``[0, 1/2]`` and then ``second`` from its end state on ``[1/2, 1]``."""

    def sweep_fn(points: np.ndarray, ts: np.ndarray) -> np.ndarray:
        out = np.empty((ts.size,) + points.shape)
        early = ts <= 0.5
        if np.any(early):
            out[early] = first.sweep_fn(points, 2.0 * ts[early])
        if not np.all(early):
            mid = first.sweep_fn(points, np.array([1.0]))[0]
            out[~early] = second.sweep_fn(mid, 2.0 * ts[~early] - 1.0)
        return out

    knots = (
        tuple(0.5 * u for u in first.knots)
        + (0.5,)
        + tuple(0.5 + 0.5 * u for u in second.knots)
    )
    return Homotopy(sweep_fn, first.stages + second.stages, knots, first.domain)


def deformation_to_axis(spec: ProblemSpec, strict: bool = False) -> Homotopy:
    """Desingularization followed by flattening.

    The planner runs with ``strict=False`` so that inputs sitting within
    ``tol_proj`` of a stratum boundary still produce a path; path
    validation reports any resulting loss of clearance.
    """
    return concat_homotopy(desingularization(spec), flattening(spec, strict=strict))
