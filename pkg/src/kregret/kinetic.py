"""Kinetic sorted order of 2D dual lines under a radial sweep.

The ray starts on the y-axis (theta = pi/2) and rotates down to the x-axis.
``order`` always lists line indices by increasing ray distance, i.e.
decreasing score ``x cos(theta) + y sin(theta)``.  Only adjacent pairs are ever
scheduled, as in a classic plane sweep.  Two lines ``a`` before ``b`` still
have to swap iff ``x_b > x_a``: the larger x wins at the x-axis, and two
lines cross at most once.

Angles within ``atol`` of each other form one batch.  Within a batch the
adjacent pair with the smallest position goes first (ties: line indices),
so three or more concurrent lines reverse by successive adjacent swaps.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import SweepInvariantError

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class SwapEvent:
    theta: float
    position: int  # index of ``upper`` in the order before the swap
    upper: int  # closer before the event, farther after it
    lower: int  # farther before the event, closer after it


class LineOrder:
    def __init__(self, xs: Sequence[float], ys: Sequence[float], atol: float = 1e-12):
        self.xs = list(xs)
        self.ys = list(ys)
        self.atol = atol
        n = len(self.xs)
        # at the y-axis distance is tau/y; ties go to the larger x (closer just after)
        self.order = sorted(range(n), key=lambda i: (-self.ys[i], -self.xs[i], i))
        self.pos = [0] * n
        for p, i in enumerate(self.order):
            self.pos[i] = p
        self.theta = HALF_PI
        self.queue: list[tuple[float, int, int]] = []
        self.scheduled: set[tuple[int, int]] = set()
        self.pending: list[tuple[float, int, int]] = []
        self.swaps = 0
        for p in range(n - 1):
            self._schedule(self.order[p], self.order[p + 1])

    def __len__(self) -> int:
        return len(self.order)

    def _schedule(self, a: int, b: int) -> None:
        """Schedule adjacent pair ``a`` (closer) / ``b`` if they still have to cross."""
        if self.xs[b] <= self.xs[a] or (a, b) in self.scheduled:
            return
        dy = self.ys[a] - self.ys[b]
        theta = math.atan2(self.xs[b] - self.xs[a], dy) if dy > 0 else HALF_PI
        # a crossing computed above the ray is rounding noise: it is due now
        if theta >= self.theta - self.atol:
            self.pending.append((self.theta, a, b))
        else:
            heapq.heappush(self.queue, (-theta, a, b))
        self.scheduled.add((a, b))

    def initial_events(self) -> list[tuple[float, int, int]]:
        """Scheduled events, nearest to the y-axis first (for inspection)."""
        items = [(-t, a, b) for t, a, b in self.pending] + list(self.queue)
        return [(-t, a, b) for t, a, b in sorted(items)]

    def next_event(self) -> SwapEvent | None:
        if not self.pending:
            if not self.queue:
                return None
            neg, a, b = heapq.heappop(self.queue)
            top = -neg
            self.pending.append((top, a, b))
            while self.queue and -self.queue[0][0] >= top - self.atol:
                neg, a, b = heapq.heappop(self.queue)
                self.pending.append((-neg, a, b))
            self.theta = min(self.theta, top)
        best = None
        for idx, (t, a, b) in enumerate(self.pending):
            if self.pos[b] != self.pos[a] + 1:
                continue
            key = (self.pos[a], a, b)
            if best is None or key < best[0]:
                best = (key, idx)
        if best is None:
            stuck = [(self.order[self.pos[a]], self.pos[a], self.pos[b]) for _, a, b in self.pending]
            raise SweepInvariantError(
                f"no schedulable swap at theta={self.theta!r}; pending positions {stuck}"
            )
        t, a, b = self.pending.pop(best[1])
        self.scheduled.discard((a, b))
        theta = min(t, self.theta)
        return SwapEvent(theta, self.pos[a], a, b)

    def apply(self, event: SwapEvent) -> None:
        p, a, b = event.position, event.upper, event.lower
        if self.order[p] != a or self.order[p + 1] != b:
            raise SweepInvariantError(f"event {event} does not match the current order")
        self.order[p], self.order[p + 1] = b, a
        self.pos[a], self.pos[b] = p + 1, p
        self.swaps += 1
        self.theta = event.theta
        if p > 0:
            self._schedule(self.order[p - 1], b)
        if p + 2 < len(self.order):
            self._schedule(a, self.order[p + 2])

    def score(self, i: int, c: float, s: float) -> float:
        return self.xs[i] * c + self.ys[i] * s
