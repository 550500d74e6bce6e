"""Exactly evaluable piecewise paths and the sections built from them.

A :class:`PiecewisePath` maps ``tau in [0, 1]`` to an ``(k, d)`` point
array. It is a list of pieces, each replaying a vectorized function of its
own parameter ``u`` over ``[u0, u1]`` (``u1 < u0`` plays backward) while
``tau`` runs over the piece's breakpoint interval. Pieces are closed on the
left; the last one is closed on both ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .configuration import Configuration, ProblemSpec, require_valid
from .deform import Homotopy

CONTINUITY_TOL = 1e-12

PieceFn = Callable[[np.ndarray], np.ndarray]


class OffAxisError(ValueError):
    pass


class EndpointMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Piece:
    fn: PieceFn
    u0: float = 0.0
    u1: float = 1.0
    kind: str = ""


def _lerp(a: float, b: float, s):
    # exact at s = 0 and s = 1
    return a * (1.0 - s) + b * s


class PiecewisePath:
    """Continuous path ``[0, 1] -> (k, d)`` arrays assembled from analytic pieces."""

    def __init__(self, breaks: Sequence[float], pieces: Sequence[Piece], shape: tuple[int, int]):
        breaks = np.asarray(breaks, dtype=float)
        if len(pieces) == 0 or breaks.size != len(pieces) + 1:
            raise ValueError("need one more breakpoint than pieces")
        if breaks[0] != 0.0 or breaks[-1] != 1.0 or np.any(np.diff(breaks) <= 0):
            raise ValueError("breakpoints must increase strictly from 0 to 1")
        breaks.setflags(write=False)
        self.breaks = breaks
        self.pieces = tuple(pieces)
        self.shape = tuple(shape)

    def __len__(self) -> int:
        return len(self.pieces)

    def __repr__(self) -> str:
        kinds = ",".join(p.kind or "?" for p in self.pieces)
        return f"PiecewisePath({len(self)} pieces: {kinds})"

    def locate(self, taus: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.breaks, taus, side="right") - 1
        return np.clip(idx, 0, len(self.pieces) - 1)

    def evaluate(self, taus) -> np.ndarray:
        """Evaluate at an array of times; returns ``(m, k, d)``."""
        taus = np.atleast_1d(np.asarray(taus, dtype=float))
        if np.any((taus < 0.0) | (taus > 1.0)) or np.any(np.isnan(taus)):
            raise ValueError("tau must lie in [0, 1]")
        out = np.empty((taus.size,) + self.shape)
        idx = self.locate(taus)
        for p in np.unique(idx):
            sel = idx == p
            a, b = self.breaks[p], self.breaks[p + 1]
            piece = self.pieces[p]
            s = (taus[sel] - a) / (b - a)
            out[sel] = piece.fn(_lerp(piece.u0, piece.u1, s))
        return out

    def __call__(self, tau: float) -> Configuration:
        return Configuration(self.evaluate([tau])[0])

    def start(self) -> np.ndarray:
        return self.evaluate([0.0])[0]

    def end(self) -> np.ndarray:
        return self.evaluate([1.0])[0]

    def placed(self, lo: float, hi: float) -> tuple[np.ndarray, list[Piece]]:
        """Breakpoints and pieces of this path reparametrized onto ``[lo, hi]``."""
        breaks = _lerp(lo, hi, self.breaks)
        breaks[0], breaks[-1] = lo, hi
        return breaks, list(self.pieces)

    def window(self, a: float, b: float) -> "PiecewisePath":
        """The restriction to ``[a, b]``, reparametrized onto ``[0, 1]``."""
        if not 0.0 <= a < b <= 1.0:
            raise ValueError(f"bad window [{a}, {b}]")
        breaks, pieces = [], []
        for p, piece in enumerate(self.pieces):
            lo, hi = self.breaks[p], self.breaks[p + 1]
            if hi <= a or lo >= b:
                continue
            ca, cb = max(lo, a), min(hi, b)
            u0 = piece.u0 if ca == lo else _lerp(piece.u0, piece.u1, (ca - lo) / (hi - lo))
            u1 = piece.u1 if cb == hi else _lerp(piece.u0, piece.u1, (cb - lo) / (hi - lo))
            breaks.append((ca - a) / (b - a))
            pieces.append(Piece(piece.fn, u0, u1, piece.kind))
        breaks[0] = 0.0
        breaks.append(1.0)
        return PiecewisePath(breaks, pieces, self.shape)


def _join(chunks: Sequence[tuple[np.ndarray, list[Piece]]], shape) -> PiecewisePath:
    breaks: list[float] = [0.0]
    pieces: list[Piece] = []
    for chunk_breaks, chunk_pieces in chunks:
        # the previous chunk's right end is the exact left end of this one
        breaks.extend(float(v) for v in chunk_breaks[1:])
        pieces.extend(chunk_pieces)
    return PiecewisePath(breaks, pieces, shape)


def constant_path(config: Configuration) -> PiecewisePath:
    pts = config.points

    def fn(u: np.ndarray) -> np.ndarray:
        return np.broadcast_to(pts, (u.size,) + pts.shape).copy()

    return PiecewisePath([0.0, 1.0], [Piece(fn, kind="constant")], pts.shape)


def concat_paths(paths: Sequence[PiecewisePath]) -> PiecewisePath:
    """Play the paths one after another on equal sub-intervals of ``[0, 1]``.

    Raises:
        EndpointMismatchError: if consecutive paths do not meet within 1e-12.
    """
    if not paths:
        raise ValueError("need at least one path")
    if len(paths) == 1:
        return paths[0]
    for m in range(len(paths) - 1):
        gap = np.max(np.abs(paths[m].end() - paths[m + 1].start()))
        if gap > CONTINUITY_TOL:
            raise EndpointMismatchError(f"path {m + 1} ends {gap:g} away from the start of path {m + 2}")
    count = len(paths)
    chunks = [p.placed(m / count, (m + 1) / count) for m, p in enumerate(paths)]
    return _join(chunks, paths[0].shape)


# -- the ladder section between on-axis configurations ------------------------


def robot_heights(spec: ProblemSpec) -> np.ndarray:
    """Height ``i`` used by the robot with global index ``i`` (``r+1..r+k``)."""
    return spec.r + 1 + np.arange(spec.k, dtype=float)


def _ladder(x0: np.ndarray, x1: np.ndarray, heights: np.ndarray, ts: np.ndarray) -> np.ndarray:
    k, d = x0.shape
    lift = np.zeros((k, d))
    lift[:, 1] = heights
    t = ts[:, None, None]
    up = x0 + (3.0 * t) * lift
    across = x0 + lift + (3.0 * t - 1.0) * (x1 - x0)
    down = x1 + (3.0 - 3.0 * t) * lift
    return np.where(t < 1.0 / 3.0, up, np.where(t < 2.0 / 3.0, across, down))


def _require_on_axis(spec: ProblemSpec, config: Configuration, label: str) -> None:
    if config.points.shape != (spec.k, spec.d):
        raise ValueError(f"{label}: expected shape ({spec.k}, {spec.d}), got {config.points.shape}")
    if not config.is_on_axis():
        raise OffAxisError(f"{label} has robots off the first axis")


def gamma(spec: ProblemSpec, start: Configuration, stop: Configuration, t: float) -> Configuration:
    """Lift robots to distinct heights, slide across, and set them down.

    Robot with global index ``i`` rises to height ``i`` on ``[0, 1/3]``,
    translates on ``[1/3, 2/3]`` and descends on ``[2/3, 1]``.
    """
    for label, c in (("start", start), ("stop", stop)):
        _require_on_axis(spec, c, label)
        require_valid(spec, c)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return Configuration(_ladder(start.points, stop.points, robot_heights(spec), np.array([t]))[0])


def ladder_path(spec: ProblemSpec, start: Configuration, stop: Configuration) -> PiecewisePath:
    """:func:`gamma` as a three-piece path (lift, translate, descend)."""
    _require_on_axis(spec, start, "start")
    _require_on_axis(spec, stop, "stop")
    x0, x1, h = start.points, stop.points, robot_heights(spec)

    def fn(u: np.ndarray) -> np.ndarray:
        return _ladder(x0, x1, h, u)

    third, two_thirds = 1.0 / 3.0, 2.0 / 3.0
    pieces = [
        Piece(fn, 0.0, third, "lift"),
        Piece(fn, third, two_thirds, "translate"),
        Piece(fn, two_thirds, 1.0, "descend"),
    ]
    return PiecewisePath([0.0, third, two_thirds, 1.0], pieces, x0.shape)


def gamma_n(spec: ProblemSpec, configs: Sequence[Configuration]) -> PiecewisePath:
    """Concatenated ladder paths through on-axis configurations ``C_1..C_n``."""
    if len(configs) < 2:
        raise ValueError("need at least two configurations")
    return concat_paths([ladder_path(spec, a, b) for a, b in zip(configs[:-1], configs[1:])])


# -- building a section from a deformation -------------------------------------


def _homotopy_pieces(h: Homotopy, config: Configuration, forward: bool, kind: str):
    """Pieces replaying ``h`` on ``config``, split at its knots, plus their local breaks."""

    def fn(u: np.ndarray) -> np.ndarray:
        return h.sweep(config, u)

    knots = [0.0, *h.knots, 1.0]
    pieces = [Piece(fn, a, b, kind) for a, b in zip(knots[:-1], knots[1:])]
    local = np.array(knots)
    if not forward:
        pieces = [Piece(fn, p.u1, p.u0, kind) for p in reversed(pieces)]
        local = 1.0 - local[::-1]
    return local, pieces


def glue_path(
    homotopies: Sequence[Homotopy],
    inner_section: Callable[[Sequence[Configuration]], PiecewisePath],
    waypoints: Sequence[Configuration],
) -> PiecewisePath:
    """Turn a section over deformed tuples into a section over the originals.

    Factor ``m`` of the tuple is deformed by ``homotopies[m]``. With
    ``N = n - 1``, the interval ``[(m-1)/N, m/N]`` is split into thirds:
    the first plays ``h_m`` forward from ``y_m``, the middle plays the inner
    section on the deformed tuple over its own parameter window
    ``[(m-1)/N, m/N]`` at triple speed, and the last plays ``h_{m+1}``
    backward into ``y_{m+1}``.
    """
    n = len(waypoints)
    if len(homotopies) != n:
        raise ValueError(f"expected {n} homotopies, got {len(homotopies)}")
    if n < 2:
        raise ValueError("need at least two waypoints")
    deformed = [h.end(y) for h, y in zip(homotopies, waypoints)]
    inner = inner_section(deformed)
    shape = waypoints[0].points.shape
    span = 3 * (n - 1)

    chunks = []
    for m in range(1, n):
        t0, t1, t2, t3 = ((3 * (m - 1) + j) / span for j in range(4))
        local, pieces = _homotopy_pieces(homotopies[m - 1], waypoints[m - 1], True, f"deform[{m}]")
        chunks.append((_lerp(t0, t1, local), pieces))
        sub = inner.window((m - 1) / (n - 1), m / (n - 1))
        chunks.append(sub.placed(t1, t2))
        local, pieces = _homotopy_pieces(homotopies[m], waypoints[m], False, f"undeform[{m + 1}]")
        chunks.append((_lerp(t2, t3, local), pieces))
    return _join(chunks, shape)


def glue(
    homotopies: Sequence[Homotopy],
    inner_section: Callable[[Sequence[Configuration]], PiecewisePath],
    waypoints: Sequence[Configuration],
    tau: float,
) -> Configuration:
    return glue_path(homotopies, inner_section, waypoints)(tau)
