"""Cost metrics comparing a line (or point) against the k-th level.

All three are computed from primal scores: ``s_line`` is the score of the
candidate under a direction and ``s_k`` the k-th best score of the dataset
under the same direction.  A line whose score is at least ``s_k`` sits on or
below the contour and costs 0.
"""
from __future__ import annotations

import enum


class Metric(str, enum.Enum):
    RATIO = "ratio"
    DISTANCE = "distance"
    CONTOUR_RATIO = "contour-ratio"

    @classmethod
    def parse(cls, value: "Metric | str") -> "Metric":
        if isinstance(value, cls):
            return value
        aliases = {
            "regret-ratio": cls.RATIO,
            "dual-distance": cls.DISTANCE,
        }
        try:
            return aliases.get(value) or cls(value)
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown metric {value!r}; expected one of {choices}") from None


def metric_value(s_line: float, s_k: float, metric: Metric, tau: float = 1.0) -> float:
    """Cost of a line with score ``s_line`` against a level with score ``s_k``.

    ``RATIO`` is the k-regret ratio ``(s_k - s_line) / s_k``, which equals the
    dual distance beyond the contour divided by the line's own ray distance.
    ``DISTANCE`` is the plain dual distance ``tau/s_line - tau/s_k``.
    ``CONTOUR_RATIO`` divides that distance by the contour's ray distance.
    """
    if s_line >= s_k:
        return 0.0
    if metric is Metric.RATIO:
        return (s_k - s_line) / s_k
    if metric is Metric.DISTANCE:
        return tau / s_line - tau / s_k
    return s_k / s_line - 1.0


def metric_array(s_line, s_k, metric: Metric, tau: float = 1.0):
    """Vectorized :func:`metric_value` over numpy arrays of scores."""
    import numpy as np

    s_line = np.asarray(s_line, dtype=float)
    s_k = np.asarray(s_k, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        if metric is Metric.RATIO:
            out = (s_k - s_line) / s_k
        elif metric is Metric.DISTANCE:
            out = tau / s_line - tau / s_k
        else:
            out = s_k / s_line - 1.0
    return np.where(s_line >= s_k, 0.0, out)
