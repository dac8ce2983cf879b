"""Command-line interface: ``kregret {solve,evaluate,contour,plot-data}``.

Every flag can also come from an environment variable named ``KREGRET_`` plus
the flag name in upper case with dashes as underscores (``KREGRET_K=2``,
``KREGRET_ID_COL=name``).  Explicit flags win over the environment.
Output is JSON with floats rounded to 6 decimals.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from dataclasses import dataclass, replace
from itertools import combinations

from .contour2d import compute_contour
from .dataset import Dataset, load_csv, normalize
from .dualgeom import intersection_angle, intersection_point, lower_envelope, to_dual_lines
from .errors import DomainError, InputError, KRegretError, UnsupportedDimensionError
from .evaluator import Exact2D, brute_force_optimal, max_ratio_sampled, sample_directions
from .greedy import GreedyConfig, solve_greedy
from .metrics import Metric
from .sweep2d import solve_2d

ENV_PREFIX = "KREGRET_"
METRIC_FLAGS = {"ratio": Metric.RATIO, "distance": Metric.DISTANCE,
                "contour-ratio": Metric.CONTOUR_RATIO}

log = logging.getLogger("kregret")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    id_col: str | None
    cols: tuple[str, ...] | None
    k: int
    m: int
    tau: float
    metric: Metric
    normalize: bool
    algo: str
    samples: int | None
    seed: int
    out: str | None
    format: str
    ids: tuple[str, ...] = ()
    force: bool = False
    timing: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("k must be at least 1")
        if self.m < 1:
            raise DomainError("m must be at least 1")
        if not self.tau > 0:
            raise DomainError("tau must be positive")


def _env(name, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default=_env("input"), help="CSV file ('-' for stdin)")
    common.add_argument("--id-col", default=_env("id-col"))
    common.add_argument("--cols", default=_env("cols"),
                        help="comma-separated attribute columns; in 2D the first is the x-axis")
    common.add_argument("--k", type=int, default=int(_env("k", 1)))
    common.add_argument("--m", type=int, default=int(_env("m", 1)))
    common.add_argument("--tau", type=float, default=float(_env("tau", 1.0)))
    common.add_argument("--metric", choices=sorted(METRIC_FLAGS), default=_env("metric", "ratio"))
    common.add_argument("--normalize", choices=("on", "off"), default=_env("normalize", "on"))
    common.add_argument("--algo", choices=("sweep", "greedy", "oracle", "auto"),
                        default=_env("algo", "auto"))
    samples = _env("samples")
    common.add_argument("--samples", type=int, default=int(samples) if samples else None)
    common.add_argument("--seed", type=int, default=int(_env("seed", 0)))
    common.add_argument("--out", default=_env("out"))
    common.add_argument("--format", choices=("json",), default=_env("format", "json"))
    common.add_argument("--force", action="store_true",
                        default=_env("force", "") not in ("", "0", "false"),
                        help="lift the brute-force size guard")
    common.add_argument("--timing", action="store_true",
                        default=_env("timing", "") not in ("", "0", "false"),
                        help="add wall time to the report (output is then not reproducible)")

    parser = argparse.ArgumentParser(prog="kregret", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="compute a k-regret minimizing set")
    ev = sub.add_parser("evaluate", parents=[common], help="max k-regret ratio of a subset")
    ev.add_argument("--ids", default=_env("ids"), help="comma-separated point ids")
    sub.add_parser("contour", parents=[common], help="top-k depth contour (2D)")
    pd = sub.add_parser("plot-data", parents=[common], help="dual arrangement geometry (2D)")
    pd.add_argument("--ids", default=_env("ids"), help="subset whose envelope to include")
    return parser


def config_from_args(args) -> RunConfig:
    if not args.input:
        raise InputError("--input is required")
    split = lambda s: tuple(x.strip() for x in s.split(",") if x.strip()) if s else None
    return RunConfig(
        command=args.command, input=args.input, id_col=args.id_col, cols=split(args.cols),
        k=args.k, m=args.m, tau=args.tau, metric=METRIC_FLAGS[args.metric],
        normalize=args.normalize == "on", algo=args.algo, samples=args.samples,
        seed=args.seed, out=args.out, format=args.format,
        ids=split(getattr(args, "ids", None)) or (), force=args.force, timing=args.timing,
    )


def load(cfg: RunConfig) -> tuple[Dataset, Dataset]:
    """(raw, working) datasets; the working one is normalized unless disabled."""
    source = sys.stdin.buffer if cfg.input == "-" else cfg.input
    if cfg.input != "-" and not os.path.exists(cfg.input):
        raise InputError(f"input file not found: {cfg.input}")
    raw = load_csv(source, cfg.id_col, cfg.cols)
    return raw, normalize(raw) if cfg.normalize else raw


def _evaluate(cfg: RunConfig, D: Dataset, ids) -> dict:
    if D.dim == 2:
        rep = Exact2D(D, cfg.k, cfg.metric, cfg.tau).report(ids)
    else:
        samples = sample_directions(D.dim, cfg.samples, cfg.seed)
        rep = max_ratio_sampled(ids, D, cfg.k, samples, cfg.metric, cfg.tau)
    return {
        "max_ratio": rep.max_ratio,
        "argmax_direction": list(rep.argmax_direction.weights),
        "metric": rep.cost_metric.value,
        "exactness": rep.exactness,
    }


def cmd_solve(cfg: RunConfig) -> dict:
    raw, D = load(cfg)
    if cfg.k > D.n:
        raise DomainError(f"k={cfg.k} exceeds n={D.n}")
    algo = cfg.algo
    if algo == "auto":
        algo = "sweep" if D.dim == 2 else "greedy"
    start = time.perf_counter()
    if algo == "sweep":
        sol = solve_2d(D, cfg.k, cfg.m, cfg.tau, cfg.metric)
    elif algo == "oracle":
        samples = None if D.dim == 2 else sample_directions(D.dim, cfg.samples, cfg.seed)
        sol = brute_force_optimal(D, cfg.k, cfg.m, cfg.metric, cfg.tau, samples, force=cfg.force)
    else:
        if cfg.metric is not Metric.RATIO:
            raise DomainError("the greedy solver optimizes the regret ratio only")
        gcfg = GreedyConfig(random_seed=cfg.seed, samples=cfg.samples, tau=cfg.tau)
        sol = solve_greedy(D, cfg.k, cfg.m, gcfg)
    elapsed = time.perf_counter() - start
    report = {
        "command": "solve",
        "algorithm": {"sweep": "sweep2d", "greedy": "greedy", "oracle": "oracle"}[algo],
        "k": cfg.k,
        "m": cfg.m,
        "tau": cfg.tau,
        "metric": sol.metric.value,
        "normalized": cfg.normalize,
        "chosen": [{"id": i, "tuple": list(raw.point(i).coords)} for i in sol.ids],
        "cost": sol.cost,
        "chain": list(sol.chain),
        "early_exit": sol.early_exit,
    }
    evaluation = _evaluate(replace(cfg, metric=Metric.RATIO), D, sol.ids)
    report["max_ratio"] = evaluation["max_ratio"]
    report["worst_direction"] = evaluation["argmax_direction"]
    report["exactness"] = evaluation["exactness"]
    if sol.warnings:
        report["warnings"] = list(sol.warnings)
    if cfg.timing:
        report["wall_time_s"] = elapsed
    return report


def cmd_evaluate(cfg: RunConfig) -> dict:
    _, D = load(cfg)
    if not cfg.ids:
        raise InputError("--ids is required for evaluate")
    ids = D.resolve_ids(cfg.ids)
    report = {"command": "evaluate", "k": cfg.k, "subset": ids}
    report.update(_evaluate(cfg, D, ids))
    return report


def _contour_json(D: Dataset, k: int, tau: float) -> dict:
    c = compute_contour(D, k, tau)

    def at(pid, theta):
        x, y = c.coeffs[pid]
        cs, sn = (0.0, 1.0) if theta >= math.pi / 2 else (math.cos(theta), math.sin(theta))
        r = tau / (x * cs + y * sn)
        return [r * cs, r * sn]

    segments = [{"id": s.line_id, "theta_lo": s.theta_lo, "theta_hi": s.theta_hi,
                 "start": at(s.line_id, s.theta_hi), "end": at(s.line_id, s.theta_lo)}
                for s in c.segments]
    vertices = [{"theta": v.theta, "slope": _slope(v.theta), "point": list(v.point),
                 "lines": list(v.lines)} for v in c.vertices]
    partition = (segments[0]["theta_hi"] == math.pi / 2 and segments[-1]["theta_lo"] == 0.0
                 and all(a["theta_lo"] == b["theta_hi"] for a, b in zip(segments, segments[1:])))
    return {"k": k, "tau": tau, "contributors": sorted(c.contributor_ids, key=str),
            "segments": segments, "vertices": vertices, "partition_ok": partition}


def _slope(theta):
    return None if theta >= math.pi / 2 else math.tan(theta)


def _require_2d(D: Dataset):
    if D.dim != 2:
        raise UnsupportedDimensionError(f"this command needs d=2, got d={D.dim}")


def cmd_contour(cfg: RunConfig) -> dict:
    _, D = load(cfg)
    _require_2d(D)
    return {"command": "contour", **_contour_json(D, cfg.k, cfg.tau)}


def cmd_plot_data(cfg: RunConfig) -> dict:
    _, D = load(cfg)
    _require_2d(D)
    if cfg.k > D.n:
        raise DomainError(f"k={cfg.k} exceeds n={D.n}")
    lines = to_dual_lines(D.points, cfg.tau)
    contour = _contour_json(D, cfg.k, cfg.tau)
    top = compute_contour(D, cfg.k, cfg.tau)
    y_k = cfg.tau / top.coeffs[top.segments[0].line_id][1]
    x_k = cfg.tau / top.coeffs[top.segments[-1].line_id][0]
    out_lines = []
    for l in lines:
        x_int, y_int = l.intercepts()
        out_lines.append({"id": l.source_id, "coeffs": list(l.coeffs),
                          "x_intercept": x_int, "y_intercept": y_int,
                          "y_gap_to_contour": max(y_int - y_k, 0.0),
                          "x_gap_to_contour": max(x_int - x_k, 0.0)})
    crossings = []
    for a, b in combinations(lines, 2):
        ang = intersection_angle(a, b)
        if ang is None:
            continue
        crossings.append({"lines": [a.source_id, b.source_id], "theta": ang.theta,
                          "slope": _slope(ang.theta), "point": list(intersection_point(a, b))})
    crossings.sort(key=lambda c: -c["theta"])
    report = {"command": "plot-data", "tau": cfg.tau, "lines": out_lines,
              "intersections": crossings, "contour": contour}
    if cfg.ids:
        sub = D.subset(cfg.ids)
        env = lower_envelope(to_dual_lines(sub.points, cfg.tau))
        report["envelope"] = {
            "ids": list(env.ids),
            "segments": [{"id": s.line_id, "theta_lo": s.theta_lo, "theta_hi": s.theta_hi}
                         for s in env.segments],
            "vertices": [{"theta": t, "point": list(p)} for t, p in env.vertices],
        }
    return report


COMMANDS = {"solve": cmd_solve, "evaluate": cmd_evaluate, "contour": cmd_contour,
            "plot-data": cmd_plot_data}


def _round(obj):
    if isinstance(obj, float):
        if math.isinf(obj) or math.isnan(obj):
            return None
        r = round(obj, 6)
        return 0.0 if r == 0 else r
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_round(report), indent=2, ensure_ascii=False) + "\n"


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        text = dumps(COMMANDS[cfg.command](cfg))
    except KRegretError as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        sys.stderr.write(json.dumps(err) + "\n")
        return exc.exit_code
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
