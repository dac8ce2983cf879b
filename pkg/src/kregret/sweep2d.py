"""Optimal k-regret minimizing sets in 2D by a radial plane sweep with a DP table.

The ray rotates from the y-axis (theta = pi/2) to the x-axis.  Three
structures evolve together:

* ``L``: all lines sorted by distance along the ray (the k-th entry is the
  contour);
* ``Q``: pending crossings of lines that have been adjacent in ``L``;
* ``A``: an n x m table; cell (i, h) is the cheapest convex chain from the
  y-axis to the ray that ends on line i and uses at most h + 1 lines.

At a crossing of ``up`` (closer before, farther after) and ``low`` only a
chain on ``up`` may turn onto ``low``; any other turn would be concave.  At a
contour vertex, and at the x-axis, every line is charged its current
distance beyond the contour.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .dataset import Dataset, PointId, UtilityDirection, id_key
from .dualgeom import DualLine, to_dual_line
from .errors import DomainError, SweepInvariantError, UnsupportedDimensionError
from .kinetic import HALF_PI, LineOrder, SwapEvent
from .metrics import Metric
from .results import Solution

SWAP = "line-swap"
CONTOUR_VERTEX = "contour-vertex"
AXIS_TERMINAL = "axis-terminal"


@dataclass(frozen=True)
class DPCell:
    cost: float
    path: tuple[PointId, ...]  # chain in sweep order, ending on this cell's line
    worst_theta: float


@dataclass(frozen=True)
class EventPoint:
    angle: float
    kind: str
    lines: tuple[PointId, ...] = ()
    location: tuple[float, float] | None = None
    value: float = 0.0  # metric value of the crossing itself (swaps only)
    position: int = -1


@dataclass
class SweepState:
    order: LineOrder
    ids: list
    k: int
    m: int
    metric: Metric
    tau: float
    cost: list[list[float]]
    path: list[list[tuple]]  # linked (line index, previous node) chains
    worst: list[list[float]]
    events: int = 0
    contour_vertices: int = 0
    contour_breaks: list = field(default_factory=list)

    @property
    def L(self) -> list[PointId]:
        return [self.ids[i] for i in self.order.order]

    @property
    def Q(self) -> list[tuple[float, PointId, PointId]]:
        return [(t, self.ids[a], self.ids[b]) for t, a, b in self.order.initial_events()]

    @property
    def theta(self) -> float:
        return self.order.theta

    def index(self, pid: PointId) -> int:
        return self.ids.index(pid)

    def cell(self, pid: PointId, budget: int) -> DPCell:
        """Cell for line ``pid`` using at most ``budget`` lines (1-based)."""
        i, h = self.index(pid), budget - 1
        return DPCell(self.cost[i][h], tuple(self.ids[j] for j in _unlink(self.path[i][h])),
                      self.worst[i][h])

    def table(self) -> dict:
        """{id: [cost for budgets 1..m]}"""
        return {self.ids[i]: list(row) for i, row in enumerate(self.cost)}

    def kth_score(self, c: float, s: float) -> float:
        return self.order.score(self.order.order[self.k - 1], c, s)

    def value(self, i: int, theta: float) -> float:
        c, s = _cs(theta)
        return _metric(self.order.score(i, c, s), self.kth_score(c, s), self.metric, self.tau)


def _cs(theta: float) -> tuple[float, float]:
    if theta >= HALF_PI:
        return 0.0, 1.0
    if theta <= 0.0:
        return 1.0, 0.0
    return math.cos(theta), math.sin(theta)


def _metric(s_line: float, s_k: float, metric: Metric, tau: float) -> float:
    if s_line >= s_k:
        return 0.0
    if metric is Metric.RATIO:
        return (s_k - s_line) / s_k
    if metric is Metric.DISTANCE:
        return tau / s_line - tau / s_k
    return s_k / s_line - 1.0


def _unlink(node) -> list[int]:
    out = []
    while node is not None:
        out.append(node[0])
        node = node[1]
    out.reverse()
    return out


def init_structures(lines: Sequence[DualLine], k: int, m: int,
                    metric: Metric | str = Metric.RATIO, atol: float = 1e-12) -> SweepState:
    """Sort lines along the y-axis, seed Q with adjacent crossings, fill A.

    Line order is by y-intercept; ties go to the larger x coefficient, then
    the smaller id.  Every cell starts as an empty chain costing the line's
    own (clamped) distance beyond the contour at the y-axis.
    """
    lines = sorted(lines, key=lambda l: id_key(l.source_id))
    if not lines:
        raise DomainError("no lines to sweep")
    if not 1 <= k <= len(lines):
        raise DomainError(f"k={k} out of range 1..{len(lines)}")
    if m < 1:
        raise DomainError("m must be at least 1")
    metric = Metric.parse(metric)
    tau = lines[0].tau
    order = LineOrder([l.coeffs[0] for l in lines], [l.coeffs[1] for l in lines], atol)
    ids = [l.source_id for l in lines]
    s_k = order.ys[order.order[k - 1]]
    cost, path, worst = [], [], []
    for i in range(len(lines)):
        v = _metric(order.ys[i], s_k, metric, tau)
        cost.append([v] * m)
        path.append([(i, None)] * m)
        worst.append([HALF_PI] * m)
    state = SweepState(order, ids, k, m, metric, tau, cost, path, worst)
    state.contour_breaks.append((HALF_PI, order.order[k - 1]))
    return state


def process_swap_event(state: SweepState, e: SwapEvent) -> None:
    """Apply one crossing to A and L (and Q, through the line order)."""
    order = state.order
    up, low = e.upper, e.lower
    if order.order[e.position] != up or order.order[e.position + 1] != low:
        raise SweepInvariantError(f"popped pair {state.ids[up]!r}, {state.ids[low]!r} "
                                  f"is not adjacent at theta={e.theta!r}")
    theta = e.theta
    c, s = _cs(theta)
    order.apply(e)
    s_k = state.kth_score(c, s)
    v = _metric(order.score(up, c, s), s_k, state.metric, state.tau)

    cu, cl = state.cost[up], state.cost[low]
    pu, pl = state.path[up], state.path[low]
    wu, wl = state.worst[up], state.worst[low]
    # the low row reads the up row's pre-event values, so update it first
    for h in range(state.m - 1, -1, -1):
        old = cl[h]
        cont = old if old >= v else v
        if h:
            prev = cu[h - 1]
            turn = prev if prev >= v else v
            if turn < cont:
                cl[h] = turn
                pl[h] = (low, pu[h - 1])
                wl[h] = wu[h - 1] if prev >= v else theta
                continue
        if v > old:
            cl[h] = v
            wl[h] = theta
    for h in range(state.m):
        if v > cu[h]:
            cu[h] = v
            wu[h] = theta
    state.events += 1

    if _touches_rank_k(state, e):
        process_contour_vertex(state, theta)
        _record_break(state, theta)


def _touches_rank_k(state: SweepState, e: SwapEvent) -> bool:
    """A swap of ranks (k-1, k) or (k, k+1) moves the contour onto another line."""
    return e.position in (state.k - 2, state.k - 1)


def _record_break(state: SweepState, theta: float) -> None:
    new = state.order.order[state.k - 1]
    breaks = state.contour_breaks
    if theta >= breaks[-1][0] - state.order.atol and len(breaks) > 1:
        breaks[-1] = (breaks[-1][0], new)
    elif HALF_PI - theta <= state.order.atol:
        breaks[-1] = (HALF_PI, new)
    else:
        breaks.append((theta, new))


def process_contour_vertex(state: SweepState, theta: float) -> None:
    """Charge every line its distance beyond the contour at ``theta``."""
    order = state.order
    c, s = _cs(theta)
    s_k = state.kth_score(c, s)
    metric, tau = state.metric, state.tau
    xs, ys = order.xs, order.ys
    for i in range(len(xs)):
        s_line = xs[i] * c + ys[i] * s
        if s_line >= s_k:
            continue
        v = _metric(s_line, s_k, metric, tau)
        row, wrow = state.cost[i], state.worst[i]
        for h in range(state.m):
            if v > row[h]:
                row[h] = v
                wrow[h] = theta
    state.contour_vertices += 1


def contour_contributors(state: SweepState) -> frozenset:
    """Lines that are k-th on an arc of positive length (read from the sweep)."""
    return frozenset(state.ids[i] for _, i in state.contour_breaks)


def extract_solution(state: SweepState) -> Solution:
    """Cheapest cell; ties go to the smaller budget, then the smaller chain ids."""
    best = None
    for h in range(state.m):
        for i in range(len(state.ids)):
            value = state.cost[i][h]
            if best is not None and value > best[0]:
                continue
            chain = tuple(state.ids[j] for j in _unlink(state.path[i][h]))
            key = (value, h, tuple(sorted(map(id_key, chain))))
            if best is None or key < best:
                best = key + (chain, state.worst[i][h])
    value, _, _, chain, worst = best
    ids = tuple(sorted(set(chain), key=id_key))
    return Solution(ids, value, state.metric, UtilityDirection.from_angle(worst), chain,
                    "sweep2d", "exact")


def run_sweep(state: SweepState,
              on_event: Callable[[SweepState, EventPoint], None] | None = None) -> SweepState:
    """Drain Q, then charge the x-axis terminal."""
    order = state.order
    while True:
        e = order.next_event()
        if e is None:
            break
        if on_event is not None:
            on_event(state, _describe(state, e))
        process_swap_event(state, e)
    order.theta = 0.0
    process_contour_vertex(state, 0.0)
    if on_event is not None:
        on_event(state, EventPoint(0.0, AXIS_TERMINAL))
    return state


def _describe(state: SweepState, e: SwapEvent) -> EventPoint:
    c, s = _cs(e.theta)
    r = state.tau / state.order.score(e.upper, c, s)
    kind = CONTOUR_VERTEX if _touches_rank_k(state, e) else SWAP
    return EventPoint(e.theta, kind, (state.ids[e.upper], state.ids[e.lower]), (r * c, r * s),
                      state.value(e.upper, e.theta), e.position)


def solve_2d(D: Dataset, k: int, m: int, tau: float = 1.0,
             metric: Metric | str = Metric.RATIO, atol: float = 1e-12,
             on_event: Callable[[SweepState, EventPoint], None] | None = None) -> Solution:
    """Optimal subset of at most ``m`` points for the given cost metric.

    If the k-contour needs no more than ``m`` points they are returned at cost
    0.  O(n^2 m) time; the contour is read off ``L`` during the same sweep.
    """
    if D.dim != 2:
        raise UnsupportedDimensionError(f"the plane sweep needs d=2, got d={D.dim}")
    if not 1 <= k <= D.n:
        raise DomainError(f"k={k} out of range 1..{D.n}")
    if m < 1:
        raise DomainError("m must be at least 1")
    metric = Metric.parse(metric)
    if m >= D.n:
        return Solution(tuple(sorted(D.ids, key=id_key)), 0.0, metric,
                        UtilityDirection.from_angle(HALF_PI), (), "sweep2d", "exact")
    lines = [to_dual_line(p, tau) for p in D.points]
    state = run_sweep(init_structures(lines, k, m, metric, atol), on_event)
    contour = contour_contributors(state)
    if len(contour) <= m:
        return Solution(tuple(sorted(contour, key=id_key)), 0.0, metric,
                        UtilityDirection.from_angle(HALF_PI), (), "sweep2d", "exact",
                        early_exit=True)
    return extract_solution(state)
