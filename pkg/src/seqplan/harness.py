"""Stratum-targeted generators and the probes behind the acceptance checks.

Every probe takes an explicit seed and is a pure function of its arguments.
"""

from __future__ import annotations

import dataclasses
import itertools
from typing import Sequence

import numpy as np

from .configuration import (
    Configuration,
    ProblemSpec,
    min_projection_gap,
    min_separation,
    random_configuration,
    stratum,
)
from .deform import desingularization, flattening
from .planner import PlanRequest, build_path, clearances, region_index
from .sections import ladder_path

CONTINUITY_SAMPLES = 256


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def check_strata(spec: ProblemSpec, strata: Sequence[int]) -> tuple[int, ...]:
    strata = tuple(int(j) for j in strata)
    if len(strata) != spec.n:
        raise ValueError(f"strata tuple needs {spec.n} entries, got {len(strata)}")
    for j in strata:
        if not spec.r <= j <= spec.size:
            raise ValueError(f"stratum {j} outside [{spec.r}, {spec.size}]")
    return strata


def all_strata(spec: ProblemSpec) -> list[tuple[int, ...]]:
    return list(itertools.product(range(spec.r, spec.size + 1), repeat=spec.n))


def strata_for_region(spec: ProblemSpec, region: int) -> tuple[int, ...]:
    """One strata tuple whose entries sum to ``region`` (extra filled greedily)."""
    lo, hi = spec.region_range
    if not lo <= region <= hi:
        raise ValueError(f"region {region} outside [{lo}, {hi}]")
    extra = region - lo
    strata = []
    for _ in range(spec.n):
        step = min(extra, spec.k)
        strata.append(spec.r + step)
        extra -= step
    return tuple(strata)


def random_request(spec: ProblemSpec, seed, strata: Sequence[int] | None = None) -> PlanRequest:
    """Waypoints with prescribed strata (uniformly random strata when omitted)."""
    rng = _rng(seed)
    if strata is None:
        strata = rng.integers(spec.r, spec.size + 1, size=spec.n)
    strata = check_strata(spec, strata)
    return PlanRequest(spec, tuple(random_configuration(spec, rng, j) for j in strata))


def realized_regions(spec: ProblemSpec, seed=0, trials: int = 0) -> dict[int, tuple[int, ...]]:
    """Region indices exhibited by generated requests, mapped to a witnessing strata tuple.

    One request is targeted at every admissible region; ``trials`` further
    requests use random strata, so a value outside the expected range would
    show up as an extra key.
    """
    rng = _rng(seed)
    found: dict[int, tuple[int, ...]] = {}
    lo, hi = spec.region_range
    targets = [strata_for_region(spec, ell) for ell in range(lo, hi + 1)]
    for strata in targets + [None] * trials:
        request = random_request(spec, rng, strata)
        got, ell = region_index(spec, request.waypoints)
        found.setdefault(ell, got)
    return dict(sorted(found.items()))


def perturb_within_pattern(
    spec: ProblemSpec, config: Configuration, delta: float, rng: np.random.Generator
) -> Configuration:
    """Move every robot coordinate by at most ``delta`` while keeping the
    projection pattern: a projection group moves as one along ``e_1``, and
    groups holding an obstacle do not move along ``e_1`` at all."""
    info = stratum(spec, config)
    pts = np.array(config.points)
    for group in info.pattern:
        robots = [g - spec.r - 1 for g in group if g > spec.r]
        if not robots or len(robots) < len(group):
            continue
        pts[robots, 0] += rng.uniform(-delta, delta)
    pts[:, 1:] += rng.uniform(-delta, delta, size=pts[:, 1:].shape)
    return Configuration(pts)


def continuity_probe(
    spec: ProblemSpec,
    strata: Sequence[int],
    delta: float,
    trials: int,
    seed=0,
    samples: int = CONTINUITY_SAMPLES,
) -> float:
    """Largest sup-distance between the paths of δ-close requests sharing strata and pattern."""
    strata = check_strata(spec, strata)
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    rng = _rng(seed)
    taus = np.linspace(0.0, 1.0, samples)
    worst = 0.0
    for _ in range(trials):
        request = random_request(spec, rng, strata)
        moved = tuple(perturb_within_pattern(spec, c, delta, rng) for c in request.waypoints)
        for a, b in zip(request.waypoints, moved):
            if stratum(spec, a).pattern != stratum(spec, b).pattern:
                raise AssertionError("perturbation changed the projection pattern")
        pa = build_path(spec, request.waypoints).evaluate(taus)
        pb = build_path(spec, moved).evaluate(taus)
        worst = max(worst, float(np.max(np.abs(pa - pb))))
    return worst


def semicontinuity_probe(spec: ProblemSpec, trials: int, seed=0) -> int:
    """Count perturbations (each coordinate moved by at most ``tol_proj/4``)
    under which ``cp`` drops when recomputed with tolerance ``tol_proj/2``."""
    rng = _rng(seed)
    fine = dataclasses.replace(spec, tol_proj=spec.tol_proj / 2)
    delta = spec.tol_proj / 4
    violations = 0
    for _ in range(trials):
        target = int(rng.integers(spec.r, spec.size + 1))
        config = random_configuration(spec, rng, target)
        moved = Configuration(config.points + rng.uniform(-delta, delta, size=config.points.shape))
        if stratum(fine, moved).cp < stratum(spec, config).cp:
            violations += 1
    return violations


def deformation_safety_probe(spec: ProblemSpec, trials: int, t_samples: int = 257, seed=0) -> float:
    """Smallest clearance seen while sweeping the desingularization, the
    flattening and the ladder section over random configurations."""
    rng = _rng(seed)
    ts = np.linspace(0.0, 1.0, max(t_samples, 2))
    shift, flat = desingularization(spec), flattening(spec)
    worst = np.inf
    previous = None
    for _ in range(trials):
        config = random_configuration(spec, rng, int(rng.integers(spec.r, spec.size + 1)))
        spread = shift.sweep(config, ts)
        separated = Configuration(spread[-1])
        flattened = flat.sweep(separated, ts)
        on_axis = Configuration(flattened[-1])
        stages = [spread, flattened]
        if previous is not None:
            stages.append(ladder_path(spec, previous, on_axis).evaluate(ts))
        previous = on_axis
        for stage in stages:
            worst = min(worst, *clearances(spec, stage))
    return float(worst)


def request_margins(spec: ProblemSpec, waypoints: Sequence[Configuration]) -> tuple[float, float]:
    """Smallest input separation and smallest projection gap across the waypoints."""
    return (
        min(min_separation(spec, c) for c in waypoints),
        min(min_projection_gap(spec, c) for c in waypoints),
    )
