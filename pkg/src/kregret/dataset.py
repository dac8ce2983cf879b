"""Datasets of positive tuples and the primal regret algebra.

Scores are linear: ``score(p, w) = p . w``.  Everything else (gain, k-gain,
k-regret ratio) is defined by sorting scores under a single direction.
"""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import DomainError, InputError, ParseError

PointId = Hashable


def id_key(pid: PointId):
    """Sort key for point ids: integers numerically, everything else as text."""
    if isinstance(pid, (int, np.integer)) and not isinstance(pid, bool):
        return (0, int(pid), "")
    return (1, 0, str(pid))


@dataclass(frozen=True)
class Point:
    id: PointId
    coords: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class UtilityDirection:
    """A nonnegative weight vector; ``unit()`` rescales it to Euclidean norm 1."""

    weights: tuple[float, ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        if not weights:
            raise DomainError("a utility direction needs at least one weight")
        if any(w < 0 or math.isnan(w) for w in weights):
            raise DomainError(f"utility weights must be nonnegative, got {weights}")
        if not any(w > 0 for w in weights):
            raise DomainError("at least one utility weight must be positive")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_angle(cls, theta: float) -> "UtilityDirection":
        """2D unit direction ``(cos theta, sin theta)`` for theta in [0, pi/2]."""
        if not -1e-12 <= theta <= math.pi / 2 + 1e-12:
            raise DomainError(f"angle {theta} is outside [0, pi/2]")
        theta = min(max(theta, 0.0), math.pi / 2)
        c, s = math.cos(theta), math.sin(theta)
        # cos(pi/2) is 6e-17, not 0; snap the axes so they stay exact.
        if theta == math.pi / 2:
            c, s = 0.0, 1.0
        elif theta == 0.0:
            c, s = 1.0, 0.0
        return cls((c, s))

    @classmethod
    def axis(cls, dim: int, index: int) -> "UtilityDirection":
        weights = [0.0] * dim
        weights[index] = 1.0
        return cls(tuple(weights))

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def norm(self) -> float:
        return math.hypot(*self.weights)

    @property
    def is_unit(self) -> bool:
        return abs(self.norm - 1.0) <= 1e-12

    def unit(self) -> "UtilityDirection":
        top = max(self.weights)  # rescale first so subnormal weights survive
        scaled = [w / top for w in self.weights]
        n = math.hypot(*scaled)
        return UtilityDirection(tuple(w / n for w in scaled))

    @property
    def angle(self) -> float:
        """Polar angle of a 2D direction."""
        if self.dim != 2:
            raise DomainError("angle is only defined for 2D directions")
        return math.atan2(self.weights[1], self.weights[0])


@dataclass(frozen=True)
class Dataset:
    points: tuple[Point, ...]
    dim: int
    norm_factors: tuple[float, ...] | None = None
    columns: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        points = tuple(self.points)
        object.__setattr__(self, "points", points)
        if not points:
            raise InputError("a dataset needs at least one point")
        if self.dim < 1:
            raise DomainError("dimension must be positive")
        seen = set()
        for p in points:
            if p.dim != self.dim:
                raise DomainError(
                    f"point {p.id!r} has {p.dim} coordinates, expected {self.dim}"
                )
            if p.id in seen:
                raise InputError(f"duplicate point id {p.id!r}")
            seen.add(p.id)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]], ids: Sequence[PointId] | None = None,
                  columns: Sequence[str] | None = None) -> "Dataset":
        rows = [tuple(float(v) for v in r) for r in rows]
        if not rows:
            raise InputError("a dataset needs at least one point")
        if ids is None:
            ids = range(1, len(rows) + 1)
        points = tuple(Point(i, r) for i, r in zip(ids, rows))
        return cls(points, len(rows[0]), columns=tuple(columns) if columns else None)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def ids(self) -> tuple[PointId, ...]:
        return tuple(p.id for p in self.points)

    @cached_property
    def matrix(self) -> np.ndarray:
        m = np.array([p.coords for p in self.points], dtype=float)
        m.setflags(write=False)
        return m

    @cached_property
    def _index(self) -> dict:
        return {p.id: i for i, p in enumerate(self.points)}

    def index_of(self, pid: PointId) -> int:
        try:
            return self._index[pid]
        except KeyError:
            raise InputError(f"unknown point id {pid!r}") from None

    def point(self, pid: PointId) -> Point:
        return self.points[self.index_of(pid)]

    def resolve_ids(self, ids: Iterable) -> list[PointId]:
        """Map user-supplied ids (possibly strings for integer ids) onto dataset ids."""
        by_text = {str(p.id): p.id for p in self.points}
        resolved, missing = [], []
        for raw in ids:
            if raw in self._index:
                resolved.append(raw)
            elif str(raw) in by_text:
                resolved.append(by_text[str(raw)])
            else:
                missing.append(raw)
        if missing:
            raise InputError(f"unknown point ids: {', '.join(map(str, missing))}")
        return resolved

    def subset(self, ids: Iterable[PointId]) -> "Dataset":
        chosen = self.resolve_ids(ids)
        if not chosen:
            raise DomainError("subset must be nonempty")
        if len(set(chosen)) != len(chosen):
            raise InputError("subset ids must be distinct")
        return Dataset(tuple(self.point(i) for i in chosen), self.dim, self.norm_factors,
                       self.columns)

    def select(self, attributes: Sequence[int]) -> "Dataset":
        """Keep (and reorder) the listed attribute positions."""
        attributes = list(attributes)
        if not attributes or any(not 0 <= a < self.dim for a in attributes):
            raise InputError(f"invalid attribute selection {attributes} for d={self.dim}")
        points = tuple(Point(p.id, tuple(p.coords[a] for a in attributes)) for p in self.points)
        factors = (tuple(self.norm_factors[a] for a in attributes)
                   if self.norm_factors is not None else None)
        columns = tuple(self.columns[a] for a in attributes) if self.columns else None
        return Dataset(points, len(attributes), factors, columns)


def load_csv(source, id_col: str | None = None, cols: Sequence[str] | None = None,
             strict_positive: bool = True) -> Dataset:
    """Read a headed CSV into an un-normalized :class:`Dataset`.

    ``source`` may be a path, a text or binary stream, or raw bytes.  Without
    ``cols`` every column except ``id_col`` is an attribute, in file order.
    Without ``id_col`` ids are 1-based row numbers.
    """
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError("empty CSV input") from None
    header = [h.strip() for h in header]
    if not any(header):
        raise InputError("CSV header row is empty")

    if id_col is not None and id_col not in header:
        raise InputError(f"id column {id_col!r} not in header {header}")
    if cols is None:
        cols = [h for h in header if h != id_col]
    missing = [c for c in cols if c not in header]
    if missing:
        raise InputError(f"columns not in header: {', '.join(missing)}")
    if not cols:
        raise InputError("no attribute columns selected")
    col_index = [header.index(c) for c in cols]
    id_index = header.index(id_col) if id_col is not None else None

    ids, rows = [], []
    for line_no, record in enumerate(reader, start=2):
        if not record or all(not cell.strip() for cell in record):
            continue
        if len(record) < len(header):
            raise ParseError(f"row {line_no}: expected {len(header)} fields, got {len(record)}",
                             row=line_no)
        values = []
        for c, j in zip(cols, col_index):
            cell = record[j].strip()
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"row {line_no}, column {c!r}: not a number: {cell!r}",
                                 row=line_no, column=c) from None
            if not math.isfinite(v):
                raise ParseError(f"row {line_no}, column {c!r}: non-finite value {cell!r}",
                                 row=line_no, column=c)
            if strict_positive and v <= 0:
                raise DomainError(f"row {line_no}, column {c!r}: value {v} is not strictly positive")
            values.append(v)
        rows.append(tuple(values))
        ids.append(record[id_index].strip() if id_index is not None else len(rows))
    if not rows:
        raise InputError("CSV has a header but no data rows")
    return Dataset.from_rows(rows, ids, columns=cols)


def _read_text(source) -> str:
    if isinstance(source, (bytes, bytearray)):
        return bytes(source).decode("utf-8-sig")
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8-sig", newline="") as fh:
            return fh.read()
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8-sig")
    return data


def normalize(ds: Dataset) -> Dataset:
    """Divide every attribute by its column maximum."""
    maxima = ds.matrix.max(axis=0)
    if np.any(maxima <= 0):
        bad = [i for i, v in enumerate(maxima) if v <= 0]
        raise DomainError(f"attributes {bad} have non-positive maximum")
    scaled = ds.matrix / maxima
    prior = np.asarray(ds.norm_factors) if ds.norm_factors is not None else np.ones(ds.dim)
    points = tuple(Point(p.id, tuple(row)) for p, row in zip(ds.points, scaled))
    return Dataset(points, ds.dim, tuple(float(f) for f in prior * maxima), ds.columns)


def _weights(w) -> tuple[float, ...]:
    if isinstance(w, UtilityDirection):
        return w.weights
    return tuple(float(x) for x in w)


def _coords(p) -> tuple[float, ...]:
    return p.coords if isinstance(p, Point) else tuple(float(x) for x in p)


def score(p, w) -> float:
    coords, weights = _coords(p), _weights(w)
    if len(coords) != len(weights):
        raise DomainError(f"dimension mismatch: point has {len(coords)}, direction {len(weights)}")
    return math.fsum(c * x for c, x in zip(coords, weights))


def _points(S) -> list:
    pts = list(S.points if isinstance(S, Dataset) else S)
    if not pts:
        raise DomainError("subset must be nonempty")
    return pts


def gain(S, w) -> float:
    """Best score in ``S`` under ``w``."""
    return max(score(p, w) for p in _points(S))


def kgain(D, w, k: int) -> float:
    """k-th largest score in ``D`` under ``w`` (equal scores take consecutive ranks)."""
    pts = _points(D)
    if not 1 <= k <= len(pts):
        raise DomainError(f"k={k} out of range 1..{len(pts)}")
    scores = sorted((score(p, w) for p in pts), reverse=True)
    return scores[k - 1]


def kregret_ratio(S, D, w, k: int) -> float:
    top = kgain(D, w, k)
    if top <= 0:
        raise DomainError("k-gain is zero; the regret ratio is undefined")
    return max(top - gain(S, w), 0.0) / top
