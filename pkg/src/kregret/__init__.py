"""k-regret minimizing sets: exact 2D plane sweep and greedy search in any dimension."""
from .contour2d import Contour, compute_contour, contour_distance
from .dataset import (Dataset, Point, UtilityDirection, gain, kgain, kregret_ratio, load_csv,
                      normalize, score)
from .dualgeom import (DualLine, EnvelopeChain, SweepAngle, intersection_angle,
                       line_cuts_origin_segment, lower_envelope, ray_distance, to_dual_line)
from .errors import (DomainError, GuardError, InputError, KRegretError, ParseError,
                     UnsupportedDimensionError)
from .evaluator import (DirectionSample, brute_force_optimal, max_ratio_exact_2d,
                        max_ratio_sampled, sample_directions)
from .greedy import GreedyConfig, solve_greedy, worst_point
from .metrics import Metric
from .results import RegretReport, Solution
from .sweep2d import solve_2d

__all__ = [
    "Contour", "Dataset", "DirectionSample", "DomainError", "DualLine", "EnvelopeChain",
    "GreedyConfig", "GuardError", "InputError", "KRegretError", "Metric", "ParseError", "Point",
    "RegretReport", "Solution", "SweepAngle", "UnsupportedDimensionError", "UtilityDirection",
    "brute_force_optimal", "compute_contour", "contour_distance", "gain", "intersection_angle",
    "kgain", "kregret_ratio", "line_cuts_origin_segment", "load_csv", "lower_envelope",
    "max_ratio_exact_2d", "max_ratio_sampled", "normalize", "ray_distance", "sample_directions",
    "score", "solve_2d", "solve_greedy", "to_dual_line", "worst_point",
]
