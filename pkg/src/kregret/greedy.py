"""Greedy single-swap descent for any dimension.

Start from ``m`` points and find the direction ``w*`` where the subset's
regret ratio peaks.  A line can only help if it crosses the segment from the
origin to the subset's envelope along ``w*``, i.e. in primal terms it scores
at least ``gain(S, w*)``.  Such a line is tried in place of each member in
turn; the first swap that lowers the maximum ratio is kept and every
non-member goes back in the queue.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import Dataset, PointId, UtilityDirection, id_key
from .dualgeom import line_cuts_origin_segment, to_dual_line
from .errors import DomainError
from .evaluator import DirectionSample, Exact2D, Sampled, sample_directions
from .metrics import Metric
from .results import Solution

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GreedyConfig:
    seed: str | Sequence[PointId] = "uniform"  # "uniform", "random", or explicit ids
    random_seed: int = 0
    epsilon: float = 1e-9
    evaluator: str = "auto"  # "auto", "exact" (2D only) or "sampled"
    samples: DirectionSample | int | None = None
    max_passes: int = 10_000
    tau: float = 1.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise DomainError("epsilon must be positive")
        if self.max_passes < 1:
            raise DomainError("max_passes must be at least 1")
        if self.evaluator not in ("auto", "exact", "sampled"):
            raise DomainError(f"unknown evaluator {self.evaluator!r}")


@dataclass(frozen=True)
class WorstPoint:
    direction: UtilityDirection
    point: tuple[float, ...]  # dual-space point on the subset's envelope along ``direction``
    delta: float  # its distance from the origin
    ratio: float


class _Evaluator:
    """Uniform front for the exact 2D and the sampled evaluator."""

    def __init__(self, D: Dataset, k: int, cfg: GreedyConfig):
        kind = cfg.evaluator
        if kind == "auto":
            kind = "exact" if D.dim == 2 else "sampled"
        if kind == "exact" and D.dim != 2:
            raise DomainError("the exact evaluator is 2D only")
        self.kind = kind
        self.D, self.k = D, k
        if kind == "exact":
            self.impl = Exact2D(D, k, Metric.RATIO, cfg.tau)
            self.exactness = "exact"
        else:
            samples = cfg.samples
            if samples is None or isinstance(samples, int):
                samples = sample_directions(D.dim, samples, cfg.random_seed)
            self.impl = Sampled(D, k, samples, Metric.RATIO, cfg.tau)
            self.exactness = self.impl.exactness

    def __call__(self, idx: Sequence[int]) -> tuple[float, UtilityDirection]:
        value, where = self.impl.evaluate(sorted(idx))
        if self.kind == "exact":
            return value, UtilityDirection.from_angle(where)
        return value, UtilityDirection(tuple(float(x) for x in self.impl.samples.directions[where]))


def worst_point(S, D: Dataset, k: int, evaluator=None, tau: float = 1.0) -> WorstPoint:
    """Direction of the largest regret ratio and the envelope point along it."""
    if evaluator is None:
        evaluator = _Evaluator(D, k, GreedyConfig(tau=tau))
    ids = S.ids if isinstance(S, Dataset) else list(S)
    if not ids:
        raise DomainError("subset must be nonempty")
    idx = [D.index_of(i) for i in D.resolve_ids(ids)]
    ratio, w = evaluator(idx)
    best = max(float(np.dot(D.matrix[i], w.weights)) for i in idx)
    delta = tau / best
    return WorstPoint(w, tuple(delta * x for x in w.weights), delta, ratio)


def _seed(D: Dataset, m: int, cfg: GreedyConfig, order: list[int]) -> list[int]:
    if isinstance(cfg.seed, str) and cfg.seed == "uniform":
        u = np.full(D.dim, 1.0 / np.sqrt(D.dim))
        scores = D.matrix @ u
        ranked = sorted(order, key=lambda i: (-scores[i], id_key(D.points[i].id)))
        return ranked[:m]
    if isinstance(cfg.seed, str) and cfg.seed == "random":
        rng = np.random.default_rng(cfg.random_seed)
        return sorted(int(i) for i in rng.choice(D.n, size=m, replace=False))
    if isinstance(cfg.seed, str):
        raise DomainError(f"unknown seed strategy {cfg.seed!r}")
    idx = [D.index_of(i) for i in D.resolve_ids(cfg.seed)]
    if len(set(idx)) != len(idx) or not 1 <= len(idx) <= m:
        raise DomainError(f"explicit seed must hold 1..{m} distinct ids")
    return idx


def solve_greedy(D: Dataset, k: int, m: int, cfg: GreedyConfig | None = None) -> Solution:
    cfg = cfg or GreedyConfig()
    if not 1 <= k <= D.n:
        raise DomainError(f"k={k} out of range 1..{D.n}")
    if m < 1:
        raise DomainError("m must be at least 1")
    if m >= D.n:
        return Solution(tuple(sorted(D.ids, key=id_key)), 0.0, Metric.RATIO, None, (),
                        "greedy", "exact")

    evaluate = _Evaluator(D, k, cfg)
    if evaluate.kind == "exact":
        witnesses = sorted(D.index_of(i) for i in evaluate.impl.contour.contributor_ids)
    else:
        witnesses = evaluate.impl.rank_k_witnesses()
    if len(witnesses) <= m:
        value, w = evaluate(witnesses)
        ids = tuple(sorted((D.points[i].id for i in witnesses), key=id_key))
        return Solution(ids, value, Metric.RATIO, w, (), "greedy", evaluate.exactness,
                        early_exit=True)

    order = sorted(range(D.n), key=lambda i: id_key(D.points[i].id))
    S = _seed(D, m, cfg, order)
    ratio, w = evaluate(S)
    trace = [ratio]
    lines = [to_dual_line(p, cfg.tau) for p in D.points]
    warnings = []
    passes = 1

    def restore():
        members = set(S)
        return deque(i for i in order if i not in members)

    gain_at = lambda idx, w: max(float(np.dot(D.matrix[i], w.weights)) for i in idx)
    delta = cfg.tau / gain_at(S, w)
    queue = restore()
    while queue and ratio > 0:
        l = queue.popleft()
        if not line_cuts_origin_segment(lines[l], w, delta):
            continue
        for out in sorted(S, key=lambda i: id_key(D.points[i].id)):
            cand = [i for i in S if i != out] + [l]
            value, w_new = evaluate(cand)
            if value < ratio * (1.0 - cfg.epsilon):
                S, ratio, w = cand, value, w_new
                trace.append(ratio)
                delta = cfg.tau / gain_at(S, w)
                queue = restore()
                passes += 1
                break
        if passes >= cfg.max_passes:
            warnings.append(f"stopped after {passes} passes (max_passes guard)")
            log.warning("greedy search hit the max_passes guard (%d)", cfg.max_passes)
            break

    ids = tuple(sorted((D.points[i].id for i in S), key=id_key))
    return Solution(ids, ratio, Metric.RATIO, w, (), "greedy", evaluate.exactness,
                    warnings=tuple(warnings), trace=tuple(trace))
