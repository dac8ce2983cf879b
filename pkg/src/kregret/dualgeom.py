"""Translated-nullspace duality and dual-space geometry.

A point ``p`` becomes the hyperplane ``{x : p . x = tau}``.  Along a unit
direction ``w`` that hyperplane sits at distance ``tau / (p . w)`` from the
origin, so higher scores mean closer lines.  In 2D the sweep convention is
``w(theta) = (cos theta, sin theta)`` with the first attribute on the x-axis.
"""
from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .dataset import Point, PointId, UtilityDirection, id_key, score
from .errors import DomainError

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class DualLine:
    source_id: PointId
    coeffs: tuple[float, ...]
    tau: float = 1.0

    def __post_init__(self):
        if not self.tau > 0:
            raise DomainError(f"tau must be positive, got {self.tau}")
        if any(c <= 0 for c in self.coeffs):
            raise DomainError(f"dual line {self.source_id!r} needs strictly positive coefficients")

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def intercepts(self) -> tuple[float, ...]:
        """Where the line meets each positive axis."""
        return tuple(self.tau / c for c in self.coeffs)


@dataclass(frozen=True, order=True)
class SweepAngle:
    theta: float

    @property
    def slope(self) -> float:
        """``tan(theta)``: the slope of the ray, as tabulated alongside the sweep."""
        if self.theta >= HALF_PI:
            return math.inf
        return math.tan(self.theta)

    @property
    def direction(self) -> UtilityDirection:
        return UtilityDirection.from_angle(self.theta)


def to_dual_line(p: Point, tau: float = 1.0) -> DualLine:
    return DualLine(p.id, tuple(p.coords), float(tau))


def to_dual_lines(points: Iterable[Point], tau: float = 1.0) -> list[DualLine]:
    """Transform points, dropping exact duplicates (the smallest id survives)."""
    ordered = sorted(points, key=lambda p: id_key(p.id))
    seen: dict[tuple, PointId] = {}
    lines = []
    for p in ordered:
        if p.coords in seen:
            warnings.warn(f"point {p.id!r} duplicates {seen[p.coords]!r}; its dual line is dropped",
                          stacklevel=2)
            continue
        seen[p.coords] = p.id
        lines.append(to_dual_line(p, tau))
    return lines


def ray_distance(line: DualLine, w) -> float:
    """Distance from the origin to ``line`` along unit direction ``w`` (inf if parallel)."""
    s = score(line.coeffs, w)
    if s <= 0:
        return math.inf
    return line.tau / s


def crossing_angle(a: Sequence[float], b: Sequence[float]) -> float | None:
    """Angle in [0, pi/2] at which two 2D points score equally, if any.

    Equal scores need ``(ax - bx) cos t + (ay - by) sin t = 0``, which has a
    solution in the closed quadrant only when the coordinate differences have
    opposite signs (or one of them is zero).
    """
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    if dx == 0 and dy == 0:
        return None
    if dx * dy > 0:
        return None
    return math.atan2(abs(dx), abs(dy))


def intersection_angle(l1: DualLine, l2: DualLine) -> SweepAngle | None:
    if l1.dim != 2 or l2.dim != 2:
        raise DomainError("intersection angles are only defined for 2D lines")
    if l1.tau != l2.tau:
        raise DomainError("lines must share the same tau")
    if l1.coeffs == l2.coeffs:
        raise DomainError(f"lines {l1.source_id!r} and {l2.source_id!r} coincide")
    theta = crossing_angle(l1.coeffs, l2.coeffs)
    return None if theta is None else SweepAngle(theta)


def intersection_point(l1: DualLine, l2: DualLine) -> tuple[float, float] | None:
    ang = intersection_angle(l1, l2)
    if ang is None:
        return None
    r = ray_distance(l1, ang.direction)
    return (r * math.cos(ang.theta), r * math.sin(ang.theta))


def line_cuts_origin_segment(line: DualLine, w, delta: float, rtol: float = 1e-12) -> bool:
    """Does ``line`` cross the segment from the origin to the point at ``delta`` along ``w``?

    Primal reading: the line's point scores at least ``tau / delta`` under ``w``.
    """
    return ray_distance(line, w) <= delta * (1.0 + rtol)


@dataclass(frozen=True)
class EnvelopeSegment:
    line_id: PointId
    theta_lo: float
    theta_hi: float


@dataclass(frozen=True)
class EnvelopeChain:
    """Lower envelope of 2D dual lines, listed from the y-axis down to the x-axis."""

    segments: tuple[EnvelopeSegment, ...]
    vertices: tuple[tuple[float, tuple[float, float]], ...]
    lines: tuple[DualLine, ...]

    @property
    def ids(self) -> tuple[PointId, ...]:
        return tuple(s.line_id for s in self.segments)

    @property
    def turns(self) -> int:
        return len(self.segments) - 1

    @property
    def tau(self) -> float:
        return self.lines[0].tau

    def line_at(self, theta: float) -> DualLine:
        # segments run in descending angle; search on negated upper bounds
        keys = [-s.theta_lo for s in self.segments]
        i = bisect.bisect_left(keys, -theta)
        return self.lines[min(i, len(self.lines) - 1)]

    def distance(self, theta: float) -> float:
        return ray_distance(self.line_at(theta), UtilityDirection.from_angle(theta))


def lower_envelope(lines: Sequence[DualLine]) -> EnvelopeChain:
    """Lower envelope of 2D lines over the closed positive quadrant.

    The line nearest the origin along ``w`` is the point maximizing ``p . w``,
    so the envelope is the upper-right convex hull of the primal points, from
    the highest point (ties: rightmost) to the rightmost (ties: highest).
    Monotone chain, O(n log n).
    """
    lines = list(lines)
    if not lines:
        raise DomainError("lower envelope of an empty set")
    if any(l.dim != 2 for l in lines):
        raise DomainError("lower envelopes are computed in 2D only")
    taus = {l.tau for l in lines}
    if len(taus) != 1:
        raise DomainError("all lines must share one tau")

    unique: dict[tuple, DualLine] = {}
    for l in sorted(lines, key=lambda l: id_key(l.source_id)):
        unique.setdefault(l.coeffs, l)
    pts = sorted(unique.values(), key=lambda l: (l.coeffs[0], l.coeffs[1]))

    top = max(pts, key=lambda l: (l.coeffs[1], l.coeffs[0]))
    start = pts.index(top)
    hull: list[DualLine] = []
    for l in pts[start:]:
        # keep strictly clockwise turns; collinear middles only touch the envelope at a vertex
        while len(hull) >= 2 and _cross(hull[-2].coeffs, hull[-1].coeffs, l.coeffs) >= 0:
            hull.pop()
        hull.append(l)

    segments, vertices = [], []
    hi = HALF_PI
    tau = lines[0].tau
    vertices.append((HALF_PI, (0.0, tau / top.coeffs[1])))
    for a, b in zip(hull, hull[1:]):
        theta = crossing_angle(a.coeffs, b.coeffs)
        segments.append(EnvelopeSegment(a.source_id, theta, hi))
        r = tau / (a.coeffs[0] * math.cos(theta) + a.coeffs[1] * math.sin(theta))
        vertices.append((theta, (r * math.cos(theta), r * math.sin(theta))))
        hi = theta
    segments.append(EnvelopeSegment(hull[-1].source_id, 0.0, hi))
    vertices.append((0.0, (tau / hull[-1].coeffs[0], 0.0)))
    return EnvelopeChain(tuple(segments), tuple(vertices), tuple(hull))


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
