import numpy as np
import pytest

from seqplan import Configuration, ProblemSpec


@pytest.fixture
def spec22():
    """d=2, k=2, r=2, n=2: obstacles at (0,0) and (1,0)."""
    return ProblemSpec(d=2, k=2, r=2, n=2)


@pytest.fixture
def worked():
    """Both robots over the midpoint of the obstacles: cp = 3, eps = 0.125."""
    return Configuration.of((0.5, 2.0), (0.5, -1.0))


def brute_epsilon(spec, points):
    """Smallest nonzero projection gap over all point pairs, divided by k + r."""
    values = [float(i) for i in range(spec.r)] + [float(p[0]) for p in points]
    gaps = [abs(a - b) for i, a in enumerate(values) for b in values[i + 1 :] if a != b]
    return min(gaps) / (spec.k + spec.r)


def brute_cp(spec, points):
    return len({float(i) for i in range(spec.r)} | {float(p[0]) for p in points})


def pairwise_clearance(spec, config_points):
    pts = np.asarray(config_points)
    best = min(np.linalg.norm(p - q) for p in pts for q in spec.obstacles)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            best = min(best, np.linalg.norm(pts[i] - pts[j]))
    return float(best)
