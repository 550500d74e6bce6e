import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seqplan import (
    Configuration,
    DimensionMismatchError,
    ProblemSpec,
    UnsupportedRegimeError,
    project,
    random_configuration,
    stratum,
    validate_configuration,
)
from seqplan.configuration import min_projection_gap

from conftest import brute_cp, brute_epsilon


@pytest.mark.parametrize("point, expected", [((0.5, 2.0), 0.5), ((0, 0), 0), ((-3.25, 1, 7), -3.25)])
def test_project(point, expected):
    assert project(point) == expected


def test_obstacles_are_canonical():
    spec = ProblemSpec(d=3, k=2, r=4, n=2)
    assert spec.obstacles.tolist() == [[0, 0, 0], [1, 0, 0], [2, 0, 0], [3, 0, 0]]
    assert np.all(np.diff(spec.obstacles[:, 0]) == 1.0)


@pytest.mark.parametrize("r", [0, 1])
def test_fewer_than_two_obstacles_is_unsupported(r):
    with pytest.raises(UnsupportedRegimeError):
        ProblemSpec(d=2, k=2, r=r, n=2)


@pytest.mark.parametrize("kwargs", [dict(d=1), dict(k=0), dict(n=1), dict(tol_proj=0.2), dict(tol_valid=-1.0)])
def test_spec_rejects_bad_parameters(kwargs):
    base = dict(d=2, k=2, r=2, n=2)
    with pytest.raises(ValueError):
        ProblemSpec(**{**base, **kwargs})


def test_region_bookkeeping():
    spec = ProblemSpec(d=2, k=3, r=2, n=3)
    assert spec.region_range == (6, 15)
    assert spec.region_count == 10


class TestValidate:
    def test_separated_robots_are_valid(self, spec22, worked):
        assert validate_configuration(spec22, worked).valid

    def test_robot_on_obstacle(self, spec22):
        v = validate_configuration(spec22, Configuration.of((0, 0), (5, 5)))
        assert not v.valid
        assert (v.kind, v.pair) == ("robot-obstacle", (1, 1))

    def test_coincident_robots(self, spec22):
        v = validate_configuration(spec22, Configuration.of((2, 2), (2, 2)))
        assert not v.valid
        assert (v.kind, v.pair) == ("robot-robot", (1, 2))

    def test_second_obstacle_named(self, spec22):
        v = validate_configuration(spec22, Configuration.of((3, 3), (1.0, 1e-12)))
        assert (v.kind, v.pair) == ("robot-obstacle", (2, 2))

    def test_dimension_mismatch_is_distinct(self, spec22):
        with pytest.raises(DimensionMismatchError):
            validate_configuration(spec22, Configuration.of((0.5, 1.0, 2.0), (3.0, 1.0, 1.0)))
        with pytest.raises(DimensionMismatchError):
            validate_configuration(spec22, Configuration.of((0.5, 1.0)))


class TestStratum:
    def test_worked_example(self, spec22, worked):
        info = stratum(spec22, worked)
        assert info.cp == 3
        assert sorted(info.pattern) == [(1,), (2,), (3, 4)]
        assert info.epsilon == pytest.approx(brute_epsilon(spec22, worked.points))
        assert info.epsilon == 0.125

    def test_all_distinct(self, spec22):
        c = Configuration.of((0.25, 1.0), (0.75, 1.0))
        info = stratum(spec22, c)
        assert info.cp == 4
        assert info.epsilon == brute_epsilon(spec22, c.points) == 0.0625

    def test_far_robots(self, spec22):
        assert stratum(spec22, Configuration.of((7, 0), (9, 0))).cp == 4

    def test_robot_over_obstacle_joins_its_group(self, spec22):
        info = stratum(spec22, Configuration.of((1.0, 3.0), (0.5, 1.0)))
        assert info.cp == 3
        assert (2, 3) in info.pattern

    def test_tolerance_merges_near_equal_projections(self, spec22):
        c = Configuration.of((0.5, 1.0), (0.5 + 5e-10, -1.0))
        info = stratum(spec22, c)
        assert info.cp == 3
        # the group mean is used, so no spurious tiny gap appears
        assert info.epsilon == pytest.approx(0.125, abs=1e-9)

    def test_transitive_clustering(self):
        spec = ProblemSpec(d=2, k=3, r=2, n=2)
        c = Configuration.of((0.5, 1.0), (0.5 + 8e-10, 2.0), (0.5 + 1.6e-9, 3.0))
        assert stratum(spec, c).cp == 3


class TestRandomConfiguration:
    @pytest.mark.parametrize("k, r", [(1, 2), (2, 2), (3, 2), (2, 3), (4, 3)])
    def test_every_target_is_hit(self, k, r):
        spec = ProblemSpec(d=2, k=k, r=r, n=2)
        for target in range(r, k + r + 1):
            for seed in range(20):
                c = random_configuration(spec, seed, target)
                assert validate_configuration(spec, c).valid
                assert stratum(spec, c).cp == target
                assert brute_cp(spec, c.points) == target

    def test_default_is_generic(self, spec22):
        assert stratum(spec22, random_configuration(spec22, 3)).cp == 4

    def test_lowest_stratum_reuses_obstacle_projections(self, spec22):
        c = random_configuration(spec22, 5, target_cp=2)
        assert set(c.points[:, 0]) <= {0.0, 1.0}

    def test_deterministic(self, spec22):
        assert random_configuration(spec22, 11, 3) == random_configuration(spec22, 11, 3)

    def test_bad_target(self, spec22):
        with pytest.raises(ValueError):
            random_configuration(spec22, 0, target_cp=1)
        with pytest.raises(ValueError):
            random_configuration(spec22, 0, target_cp=5)


specs = st.builds(
    ProblemSpec,
    d=st.integers(2, 4),
    k=st.integers(1, 4),
    r=st.integers(2, 4),
    n=st.just(2),
)


@st.composite
def stratified(draw):
    spec = draw(specs)
    target = draw(st.integers(spec.r, spec.k + spec.r))
    seed = draw(st.integers(0, 2**32 - 1))
    return spec, random_configuration(spec, seed, target)


@settings(max_examples=200, deadline=None)
@given(stratified())
def test_cp_bounds_and_epsilon(case):
    spec, c = case
    info = stratum(spec, c)
    assert spec.r <= info.cp <= spec.k + spec.r
    assert info.cp == len(info.pattern)
    assert sorted(i for g in info.pattern for i in g) == list(range(1, spec.k + spec.r + 1))
    assert info.epsilon > 0
    assert info.epsilon * (spec.k + spec.r - 1) < min_projection_gap(spec, c)
    assert info.epsilon == pytest.approx(brute_epsilon(spec, c.points), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(stratified(), st.integers(0, 2**32 - 1))
def test_cp_lower_semicontinuous(case, seed):
    spec, c = case
    rng = np.random.default_rng(seed)
    delta = spec.tol_proj / 4
    moved = Configuration(c.points + rng.uniform(-delta, delta, c.points.shape))
    fine = dataclasses.replace(spec, tol_proj=spec.tol_proj / 2)
    assert stratum(fine, moved).cp >= stratum(spec, c).cp


@settings(max_examples=200, deadline=None)
@given(stratified(), st.floats(0, 1e-3), st.integers(0, 2**32 - 1))
def test_epsilon_continuous_within_pattern(case, delta, seed):
    spec, c = case
    rng = np.random.default_rng(seed)
    info = stratum(spec, c)
    pts = np.array(c.points)
    for group in info.pattern:
        robots = [g - spec.r - 1 for g in group if g > spec.r]
        if robots and len(robots) == len(group):
            pts[robots, 0] += rng.uniform(-delta, delta)
    moved = Configuration(pts)
    assert stratum(spec, moved).pattern == info.pattern
    dist = float(np.max(np.abs(moved.points - c.points)))
    assert abs(stratum(spec, moved).epsilon - info.epsilon) <= 2 * dist / (spec.k + spec.r) + 1e-15
