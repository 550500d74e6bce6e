import itertools

import numpy as np
import pytest

from seqplan import Configuration, ProblemSpec, stratum
from seqplan.harness import (
    all_strata,
    continuity_probe,
    deformation_safety_probe,
    perturb_within_pattern,
    random_request,
    realized_regions,
    semicontinuity_probe,
    strata_for_region,
)


@pytest.mark.parametrize("k, n, r, expected", [(2, 2, 2, 5), (3, 3, 2, 10), (1, 2, 2, 3), (2, 3, 3, 7)])
def test_realized_regions_match_enumeration(k, n, r, expected):
    spec = ProblemSpec(d=2, k=k, r=r, n=n)
    enumerated = {sum(t) for t in itertools.product(range(r, k + r + 1), repeat=n)}
    found = realized_regions(spec, seed=1, trials=50)
    assert set(found) == enumerated
    assert len(found) == expected == spec.region_count


def test_strata_for_region():
    spec = ProblemSpec(d=2, k=3, r=2, n=3)
    for ell in range(6, 16):
        strata = strata_for_region(spec, ell)
        assert sum(strata) == ell and all(2 <= j <= 5 for j in strata)
    with pytest.raises(ValueError):
        strata_for_region(spec, 5)


def test_random_request_hits_strata():
    spec = ProblemSpec(d=3, k=2, r=3, n=3)
    request = random_request(spec, 4, (3, 5, 4))
    assert [stratum(spec, c).cp for c in request.waypoints] == [3, 5, 4]


def test_all_strata_count():
    assert len(all_strata(ProblemSpec(d=2, k=2, r=2, n=3))) == 27


def test_perturbation_keeps_pattern(spec22, worked):
    rng = np.random.default_rng(0)
    for _ in range(50):
        moved = perturb_within_pattern(spec22, worked, 1e-3, rng)
        assert stratum(spec22, moved).pattern == stratum(spec22, worked).pattern
        assert np.max(np.abs(moved.points - worked.points)) <= 1e-3


class TestContinuityProbe:
    def test_small_delta(self, spec22):
        assert continuity_probe(spec22, (3, 4), 1e-6, 20, seed=0) <= 1e-3

    def test_zero_delta(self, spec22):
        assert continuity_probe(spec22, (2, 3), 0.0, 5, seed=0) == 0.0

    @pytest.mark.parametrize("strata", [(1, 3), (3, 5), (3,), (2, 3, 4)])
    def test_mismatched_strata(self, spec22, strata):
        with pytest.raises(ValueError):
            continuity_probe(spec22, strata, 1e-6, 1)

    def test_deterministic(self, spec22):
        assert continuity_probe(spec22, (4, 2), 1e-5, 5, seed=3) == continuity_probe(spec22, (4, 2), 1e-5, 5, seed=3)


class TestSemicontinuityProbe:
    def test_no_violations(self, spec22):
        assert semicontinuity_probe(spec22, 2000, seed=0) == 0

    def test_shared_projection_only_splits(self):
        spec = ProblemSpec(d=2, k=3, r=2, n=2)
        c = Configuration.of((0.5, 1.0), (0.5, 2.0), (0.5, 3.0))
        base = stratum(spec, c).cp
        rng = np.random.default_rng(1)
        fine = ProblemSpec(d=2, k=3, r=2, n=2, tol_proj=spec.tol_proj / 2)
        for _ in range(200):
            moved = Configuration(c.points + rng.uniform(-spec.tol_proj / 4, spec.tol_proj / 4, (3, 2)))
            assert stratum(fine, moved).cp >= base

    def test_deterministic(self, spec22):
        assert semicontinuity_probe(spec22, 100, seed=9) == semicontinuity_probe(spec22, 100, seed=9)


class TestSafetyProbe:
    def test_default(self, spec22):
        assert deformation_safety_probe(spec22, 50, seed=0) > 0

    def test_single_robot(self):
        # a lone robot never comes closer to an obstacle than its fixed off-axis lift or shift
        spec = ProblemSpec(d=2, k=1, r=3, n=2)
        assert deformation_safety_probe(spec, 100, seed=2) > 0

    def test_endpoints_only(self, spec22):
        assert deformation_safety_probe(spec22, 50, t_samples=2, seed=0) > 0
