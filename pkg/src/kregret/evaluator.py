"""Maximum k-regret ratio of a subset, and the brute-force optimal oracle.

In 2D the supremum over all directions is attained at a finite set of
angles: the axes, the junctions of the subset's lower envelope and the
vertices of the k-contour.  Between two consecutive such angles both the
subset's best point and the k-th point are fixed, and their score ratio is
monotone in ``tan(theta)``.  In higher dimensions we fall back to a fixed,
deterministic sample of directions and tag the result as sampled.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import qmc

from .contour2d import Contour, compute_contour
from .dataset import Dataset, UtilityDirection, id_key
from .dualgeom import HALF_PI, crossing_angle, lower_envelope, to_dual_line
from .errors import DomainError, GuardError
from .metrics import Metric, metric_array
from .results import RegretReport, Solution

DEFAULT_SAMPLES = {2: 10_000, 3: 10_000}
LARGE_SAMPLE = 50_000


@dataclass(frozen=True)
class DirectionSample:
    """Unit directions in the closed positive orthant (rows of ``directions``).

    Always contains every axis and the uniform direction.
    """

    directions: np.ndarray

    def __post_init__(self):
        dirs = np.asarray(self.directions, dtype=float)
        if dirs.ndim != 2 or len(dirs) == 0:
            raise DomainError("direction sample must be a nonempty 2D array")
        dirs.setflags(write=False)
        object.__setattr__(self, "directions", dirs)

    def __len__(self) -> int:
        return len(self.directions)

    @property
    def dim(self) -> int:
        return self.directions.shape[1]


def default_sample_count(d: int) -> int:
    return DEFAULT_SAMPLES.get(d, LARGE_SAMPLE)


def sample_directions(d: int, count: int | None = None, seed: int = 0) -> DirectionSample:
    """Deterministic low-discrepancy directions.

    d=2 uses an even angular grid over [0, pi/2].  Otherwise a scrambled Halton
    sequence is pushed onto the simplex (normalized exponentials, i.e. a
    uniform Dirichlet), then rescaled to unit length.
    """
    if d < 2:
        raise DomainError("direction samples need d >= 2")
    count = default_sample_count(d) if count is None else int(count)
    if count < 1:
        raise DomainError("sample count must be positive")
    extra = np.vstack([np.eye(d), np.full((1, d), 1.0 / math.sqrt(d))])
    if d == 2:
        theta = np.linspace(0.0, HALF_PI, count)
        body = np.column_stack([np.cos(theta), np.sin(theta)])
        body[0] = (1.0, 0.0)
        body[-1] = (0.0, 1.0)
    else:
        u = qmc.Halton(d=d, scramble=True, seed=seed).random(count)
        u = np.clip(u, 1e-12, 1.0 - 1e-12)
        e = -np.log(u)
        body = e / np.linalg.norm(e, axis=1, keepdims=True)
    return DirectionSample(np.vstack([extra, body]))


def _kth_largest(scores: np.ndarray, k: int) -> np.ndarray:
    """k-th largest entry of each column."""
    n = scores.shape[0]
    return np.partition(scores, n - k, axis=0)[n - k]


def _check_k(D: Dataset, k: int) -> None:
    if not 1 <= k <= D.n:
        raise DomainError(f"k={k} out of range 1..{D.n}")


def _subset_indices(D: Dataset, S) -> list[int]:
    if isinstance(S, Dataset):
        ids = S.ids
    else:
        ids = [p.id if hasattr(p, "coords") else p for p in S]
    if not ids:
        raise DomainError("subset must be nonempty")
    idx = [D.index_of(i) for i in D.resolve_ids(ids)]
    return sorted(set(idx))


def _direction_2d(theta: float) -> UtilityDirection:
    return UtilityDirection.from_angle(theta)


def _unit(theta: np.ndarray) -> np.ndarray:
    w = np.column_stack([np.cos(theta), np.sin(theta)])
    w[theta >= HALF_PI] = (0.0, 1.0)
    w[theta <= 0.0] = (1.0, 0.0)
    return w


class Exact2D:
    """Exact 2D evaluation against one dataset, reusing the contour across subsets."""

    def __init__(self, D: Dataset, k: int, metric: Metric | str = Metric.RATIO,
                 tau: float = 1.0, contour: Contour | None = None):
        if D.dim != 2:
            raise DomainError(f"exact evaluation needs d=2, got d={D.dim}")
        _check_k(D, k)
        self.D, self.k, self.tau = D, k, float(tau)
        self.metric = Metric.parse(metric)
        if contour is None or contour.k != k:
            contour = compute_contour(D, k, tau)
        self.contour = contour
        self.X = D.matrix
        base = sorted({HALF_PI, 0.0, *(v.theta for v in contour.vertices)}, reverse=True)
        self.base_theta = np.array(base)
        W = _unit(self.base_theta)
        self.base_scores = self.X @ W.T
        self.base_kgain = _kth_largest(self.base_scores, k)

    def _extra_angles(self, idx: Sequence[int], envelope: bool) -> list[float]:
        if len(idx) < 2:
            return []
        if envelope:
            lines = [to_dual_line(self.D.points[i], self.tau) for i in idx]
            env = lower_envelope(lines)
            return [t for t, _ in env.vertices[1:-1]]
        # every pairwise crossing: a superset of the envelope's junctions
        out = []
        for a, b in itertools.combinations(idx, 2):
            t = crossing_angle(self.X[a], self.X[b])
            if t is not None:
                out.append(t)
        return out

    def evaluate(self, idx: Sequence[int], envelope: bool = True) -> tuple[float, float]:
        """(max metric value, argmax angle) for the subset given by row indices."""
        idx = list(idx)
        values = metric_array(self.base_scores[idx].max(axis=0), self.base_kgain,
                              self.metric, self.tau)
        theta = self.base_theta
        extra = self._extra_angles(idx, envelope)
        if extra:
            t = np.array(sorted(set(extra), reverse=True))
            sc = self.X @ _unit(t).T
            ev = metric_array(sc[idx].max(axis=0), _kth_largest(sc, self.k), self.metric, self.tau)
            theta = np.concatenate([theta, t])
            values = np.concatenate([values, ev])
            order = np.argsort(-theta, kind="stable")
            theta, values = theta[order], values[order]
        j = int(np.argmax(values))
        return float(values[j]), float(theta[j])

    def report(self, S, envelope: bool = True) -> RegretReport:
        idx = _subset_indices(self.D, S)
        value, theta = self.evaluate(idx, envelope)
        return RegretReport(tuple(self.D.points[i].id for i in idx), value,
                            _direction_2d(theta), self.metric, "exact", self.k)


class Sampled:
    """Evaluation over a fixed direction sample (any d)."""

    def __init__(self, D: Dataset, k: int, samples: DirectionSample | None = None,
                 metric: Metric | str = Metric.RATIO, tau: float = 1.0):
        _check_k(D, k)
        if samples is None:
            samples = sample_directions(D.dim)
        if len(samples) == 0:
            raise DomainError("empty direction sample")
        if samples.dim != D.dim:
            raise DomainError(f"sample dimension {samples.dim} != dataset dimension {D.dim}")
        self.D, self.k, self.tau, self.samples = D, k, float(tau), samples
        self.metric = Metric.parse(metric)
        self.scores = D.matrix @ samples.directions.T
        self.kgain = _kth_largest(self.scores, k)

    @property
    def exactness(self) -> str:
        return f"sampled({len(self.samples)})"

    def evaluate(self, idx: Sequence[int]) -> tuple[float, int]:
        values = metric_array(self.scores[list(idx)].max(axis=0), self.kgain, self.metric, self.tau)
        j = int(np.argmax(values))
        return float(values[j]), j

    def report(self, S) -> RegretReport:
        idx = _subset_indices(self.D, S)
        value, j = self.evaluate(idx)
        w = UtilityDirection(tuple(float(x) for x in self.samples.directions[j]))
        return RegretReport(tuple(self.D.points[i].id for i in idx), value, w, self.metric,
                            self.exactness, self.k)

    def rank_k_witnesses(self) -> list[int]:
        """Row indices that are k-th ranked for at least one sampled direction."""
        n = self.scores.shape[0]
        order = np.argsort(-self.scores, axis=0, kind="stable")
        return sorted(set(int(i) for i in order[self.k - 1])) if n else []


def max_ratio_exact_2d(S, D: Dataset, k: int, metric: Metric | str = Metric.RATIO,
                       tau: float = 1.0, contour: Contour | None = None) -> RegretReport:
    return Exact2D(D, k, metric, tau, contour).report(S)


def max_ratio_sampled(S, D: Dataset, k: int, samples: DirectionSample | None = None,
                      metric: Metric | str = Metric.RATIO, tau: float = 1.0) -> RegretReport:
    return Sampled(D, k, samples, metric, tau).report(S)


def brute_force_optimal(D: Dataset, k: int, m: int, metric: Metric | str = Metric.RATIO,
                        tau: float = 1.0, samples: DirectionSample | None = None,
                        max_n: int = 20, max_m: int = 4, force: bool = False) -> Solution:
    """Enumerate every subset of size <= m and keep the best.

    Ties go to the lexicographically smallest id set.  Refuses (GuardError)
    beyond ``max_n`` points or ``max_m`` picks unless ``force`` is set.
    """
    _check_k(D, k)
    metric = Metric.parse(metric)
    if m < 1:
        raise DomainError("m must be at least 1")
    if m >= D.n:
        return Solution(tuple(sorted(D.ids, key=id_key)), 0.0, metric, None, (),
                        "oracle", "exact")
    if not force and (D.n > max_n or m > max_m):
        raise GuardError(f"brute force refused for n={D.n}, m={m} "
                         f"(limits n<={max_n}, m<={max_m}; pass force to override)")

    order = sorted(range(D.n), key=lambda i: id_key(D.points[i].id))
    if D.dim == 2:
        ev = Exact2D(D, k, metric, tau)
        evaluate = lambda idx: ev.evaluate(idx, envelope=False)
        exactness = "exact"
    else:
        ev = Sampled(D, k, samples, metric, tau)
        evaluate = ev.evaluate
        exactness = ev.exactness

    best = None
    for size in range(1, m + 1):
        for combo in itertools.combinations(order, size):
            value, where = evaluate(combo)
            key = tuple(id_key(D.points[i].id) for i in combo)
            if best is None or value < best[0] or (value == best[0] and key < best[1]):
                best = (value, key, combo, where)
    value, _, combo, where = best
    if D.dim == 2:
        worst = _direction_2d(where)
    else:
        worst = UtilityDirection(tuple(float(x) for x in ev.samples.directions[where]))
    ids = tuple(D.points[i].id for i in combo)
    return Solution(ids, value, metric, worst, (), "oracle", exactness)

