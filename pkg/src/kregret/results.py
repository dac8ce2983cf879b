"""Report types returned by the evaluators and solvers."""
from __future__ import annotations

from dataclasses import dataclass, field

from .dataset import PointId, UtilityDirection
from .metrics import Metric


@dataclass(frozen=True)
class RegretReport:
    subset_ids: tuple[PointId, ...]
    max_ratio: float
    argmax_direction: UtilityDirection
    cost_metric: Metric = Metric.RATIO
    exactness: str = "exact"  # "exact" or "sampled(<count>)"
    k: int = 1

    @property
    def is_exact(self) -> bool:
        return self.exactness == "exact"


@dataclass(frozen=True)
class Solution:
    ids: tuple[PointId, ...]
    cost: float
    metric: Metric
    worst_direction: UtilityDirection | None
    chain: tuple[PointId, ...] = ()
    algorithm: str = ""
    exactness: str = "exact"
    early_exit: bool = False
    warnings: tuple[str, ...] = ()
    trace: tuple[float, ...] = field(default=(), compare=False)

    @property
    def worst_theta(self) -> float | None:
        if self.worst_direction is None or self.worst_direction.dim != 2:
            return None
        return self.worst_direction.angle
