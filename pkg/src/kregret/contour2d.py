"""Exact top-k depth contour (the k-th level of the dual arrangement) in 2D."""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

from .dataset import Dataset, PointId, id_key
from .errors import DomainError, UnsupportedDimensionError
from .kinetic import HALF_PI, LineOrder


@dataclass(frozen=True)
class ContourVertex:
    theta: float
    point: tuple[float, float]
    lines: tuple[PointId, PointId]  # (supporting before, supporting after) in sweep order


@dataclass(frozen=True)
class ContourSegment:
    line_id: PointId
    theta_lo: float
    theta_hi: float


@dataclass(frozen=True)
class Contour:
    k: int
    tau: float
    vertices: tuple[ContourVertex, ...]
    segments: tuple[ContourSegment, ...]
    coeffs: dict  # point id -> (x, y)

    @property
    def contributor_ids(self) -> frozenset:
        return frozenset(s.line_id for s in self.segments)

    def segment_at(self, theta: float) -> ContourSegment:
        keys = [-s.theta_lo for s in self.segments]
        i = bisect.bisect_left(keys, -theta)
        return self.segments[min(i, len(self.segments) - 1)]

    def interior_angles(self) -> list[float]:
        """Junction angles strictly between the axes, descending."""
        return [v.theta for v in self.vertices[1:-1]]


def compute_contour(D: Dataset, k: int, tau: float = 1.0, atol: float = 1e-12) -> Contour:
    """k-th level by a radial sweep; every swap involving rank k is a vertex.

    Equal-angle swaps are merged, so segments always have positive length.
    Worst case O(n^2 log n).
    """
    if D.dim != 2:
        raise UnsupportedDimensionError(f"contours are computed in 2D only (d={D.dim})")
    if not 1 <= k <= D.n:
        raise DomainError(f"k={k} out of range 1..{D.n}")
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")

    # index order = id order, so the engine's index tie-break is the id tie-break
    points = sorted(D.points, key=lambda p: id_key(p.id))
    xs = [p.coords[0] for p in points]
    ys = [p.coords[1] for p in points]
    order = LineOrder(xs, ys, atol)

    def location(i, theta):
        c, s = math.cos(theta), math.sin(theta)
        if theta >= HALF_PI:
            c, s = 0.0, 1.0
        r = tau / order.score(i, c, s)
        return (r * c, r * s)

    initial = current = order.order[k - 1]
    breaks: list[tuple[float, int, int]] = []  # (theta, before, after)
    while True:
        ev = order.next_event()
        if ev is None:
            break
        order.apply(ev)
        if ev.position not in (k - 2, k - 1):  # the rank-k line changed
            continue
        new = order.order[k - 1]
        if not breaks and HALF_PI - ev.theta <= atol:
            initial = current = new
            continue
        if breaks and breaks[-1][0] - ev.theta <= atol:
            theta, before, _ = breaks.pop()
            if before != new:
                breaks.append((theta, before, new))
        elif new != current:
            breaks.append((ev.theta, current, new))
        current = new

    ids = [p.id for p in points]
    vertices = [ContourVertex(HALF_PI, location(initial, HALF_PI), (ids[initial],) * 2)]
    segments = []
    hi = HALF_PI
    for theta, before, after in breaks:
        segments.append(ContourSegment(ids[before], theta, hi))
        vertices.append(ContourVertex(theta, location(before, theta), (ids[before], ids[after])))
        hi = theta
    segments.append(ContourSegment(ids[current], 0.0, hi))
    vertices.append(ContourVertex(0.0, location(current, 0.0), (ids[current],) * 2))
    coeffs = {p.id: p.coords for p in points}
    return Contour(k, float(tau), tuple(vertices), tuple(segments), coeffs)


def contour_distance(c: Contour, theta: float) -> float:
    """Distance from the origin to the contour along the ray at ``theta``."""
    if not -1e-12 <= theta <= HALF_PI + 1e-12:
        raise DomainError(f"angle {theta} is outside [0, pi/2]")
    seg = c.segment_at(theta)
    x, y = c.coeffs[seg.line_id]
    if theta >= HALF_PI:
        return c.tau / y
    if theta <= 0:
        return c.tau / x
    return c.tau / (x * math.cos(theta) + y * math.sin(theta))
