"""Command-line interface: run experiments, single solves, and SVG plots.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .continuum import optimal_axis_cut
from .experiments import (
    ConfigError,
    ExperimentConfig,
    config_to_json,
    load_config,
    run_experiment,
    run_trial,
    write_summary_csv,
    write_trials_csv,
)
from .functionals import ObjectiveKind
from .geometry import Kernel, RectDomain, ScalingRegime, epsilon_for
from .solvers import GroundTruthInit, RandomInit, SolverConfig
from .svg import loglog_plot, partition_scatter, series_plot

USAGE_ERROR = 2
RUNTIME_ERROR = 1


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("BCL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"BCL_THREADS={env!r} is not an integer")
    return 1


def _parse_domain(text: str) -> RectDomain:
    try:
        w, h = text.lower().split("x")
        return RectDomain(float(w), float(h))
    except Exception:
        raise ConfigError(f"--domain expects WIDTHxHEIGHT, got {text!r}")


def _parse_objective(text: str) -> ObjectiveKind:
    if text in ("cheeger", "ratio"):
        return ObjectiveKind(text)
    if text.startswith("multiway:"):
        try:
            return ObjectiveKind("multiway", int(text.split(":", 1)[1]))
        except ValueError:
            pass
    raise ConfigError(f"--objective expects cheeger | ratio | multiway:K, got {text!r}")


def _parse_regime(text: str) -> ScalingRegime:
    try:
        name, value = text.split(":", 1)
        if name == "power":
            return ScalingRegime("power", float(value))
        if name in ("conn", "connectivity"):
            return ScalingRegime("connectivity_multiple", float(value))
    except ConfigError:
        raise
    except Exception:
        pass
    raise ConfigError(f"--regime expects power:P | conn:C, got {text!r}")


def cmd_run(args) -> int:
    cfg_path = Path(args.config)
    config = load_config(cfg_path)
    out_dir = Path(args.out) if args.out else cfg_path.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = cfg_path.stem
    trials_path = out_dir / f"{stem}_trials.csv"
    summary_path = out_dir / f"{stem}_summary.csv"
    report_path = out_dir / f"{stem}_report.json"
    existing = [p for p in (trials_path, summary_path, report_path) if p.exists()]
    if existing and not args.force:
        raise ConfigError(
            "output exists (use --force to overwrite): " + ", ".join(str(p) for p in existing)
        )
    report = run_experiment(config, threads=_threads(args))
    write_trials_csv(report, trials_path)
    write_summary_csv(report, summary_path)
    summary = report.per_n_summary()
    doc = {
        "config": config_to_json(config),
        "summary": [summary[n] for n in config.n_values],
        "loglog_slope_e_perm": report.loglog_slope("mean_e_perm"),
        "loglog_slope_e_raw": report.loglog_slope("mean_e_raw"),
    }
    with open(report_path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {trials_path}, {summary_path}, {report_path}")
    return 0


def cmd_solve(args) -> int:
    domain = _parse_domain(args.domain)
    kind = _parse_objective(args.objective)
    if args.epsilon is not None and args.regime is not None:
        raise ConfigError("give either --epsilon or --regime, not both")
    if args.epsilon is not None:
        if args.epsilon <= 0:
            raise ConfigError("--epsilon must be positive")
        regime = None
        eps = args.epsilon
    elif args.regime is not None:
        regime = _parse_regime(args.regime)
        eps = epsilon_for(regime, args.n)
    else:
        raise ConfigError("one of --epsilon or --regime is required")

    if args.init == "random" or kind.variant == "multiway":
        init = RandomInit(args.seed)
    else:
        init = GroundTruthInit(labels=None)
    solver = SolverConfig(init=init, method=args.method)
    # reuse the experiment pipeline for one trial: fixed-epsilon runs go through
    # a power regime evaluated at this n
    if regime is None:
        regime = ScalingRegime("power", max(1e-9, -math.log(eps) / math.log(args.n)))
    from .experiments import DiagnosticsFlags

    config = ExperimentConfig(
        domain=domain, objective=kind, kernel=Kernel(args.kernel), regime=regime,
        n_values=(args.n,), trials_per_n=1, base_seed=args.seed, solver=solver,
        diagnostics=DiagnosticsFlags(),
    )
    record = run_trial(config, args.n, 0)
    print(f"n={record.n} seed={record.seed} epsilon={epsilon_for(regime, args.n):.6g}")
    print(f"objective={record.objective:.6g}")
    print(f"rescaled_constant={record.rescaled:.6g}")
    if kind.variant != "multiway":
        print(f"e_n_raw={record.e_n_raw:.6g}")
        print(f"e_n_perm={record.e_n_perm:.6g}")
    if not record.valid:
        print("trial flagged invalid (degenerate giant component)")
    if args.scatter or args.dump:
        # rebuild the trial's cloud and partition for the scatter output
        rng = np.random.default_rng(np.uint64(record.seed))
        pts = rng.random((args.n, 2)) * domain.extents
        cut = optimal_axis_cut(domain, kind) if kind.variant != "multiway" else None
        labels = _resolve_labels(config, record, pts)
        if args.dump:
            _write_solve_dump(args.dump, domain, cut, pts, labels)
            print(f"wrote {args.dump}")
        if args.scatter:
            cut_line = (cut.orientation, cut.position) if cut is not None else None
            partition_scatter(args.scatter, pts.tolist(), labels.tolist(), cut_line,
                              title=f"n={args.n} {args.objective}")
            print(f"wrote {args.scatter}")
    return 0


def _resolve_labels(config, record, pts):
    """Re-run the recorded trial to recover its partition labels."""
    from .experiments import _solver_for  # single-trial reconstruction
    from .geometry import PointCloud
    from .graph import build_graph, connected_components
    from .solvers import solve
    import numpy as np

    cloud = PointCloud(points=pts, domain=config.domain, seed=record.seed)
    eps = epsilon_for(config.regime, record.n)
    graph = build_graph(cloud, eps, config.kernel)
    kind = config.objective
    gt = None
    if kind.variant != "multiway":
        cut = optimal_axis_cut(config.domain, kind)
        from .experiments import ground_truth_labels

        gt = ground_truth_labels(config.domain, cut, pts)
    labeling = connected_components(graph)
    rng = np.random.default_rng(np.uint64(record.seed))
    rng.random((record.n, 2))  # advance past the sampling draws
    if labeling.component_sizes[0] < record.n:
        giant = labeling.largest_vertices()
        sub = graph.subgraph(giant)
        init_labels = gt[giant] if gt is not None else None
        outcome = solve(sub, kind, _solver_for(config, record.seed, init_labels))
        labels = np.empty(record.n, dtype=np.int64)
        labels[giant] = outcome.partition.labels
        off = np.setdiff1d(np.arange(record.n), giant, assume_unique=True)
        labels[off] = rng.integers(0, kind.k, size=len(off))
    else:
        outcome = solve(graph, kind, _solver_for(config, record.seed, gt))
        labels = outcome.partition.labels
    return labels


def _write_solve_dump(path, domain, cut, pts, labels):
    meta = {
        "domain": {"width": domain.width, "height": domain.height},
        "cut": None if cut is None else {"orientation": cut.orientation, "position": cut.position},
    }
    with open(path, "w") as fh:
        fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
        fh.write("x,y,label\n")
        for (x, y), lab in zip(pts, labels):
            fh.write(f"{float(x)!r},{float(y)!r},{int(lab)}\n")


def _read_summary_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = []
        for line in fh:
            if line.strip():
                rows.append(dict(zip(header, line.strip().split(","))))
    return header, rows


def cmd_plot(args) -> int:
    kind = args.kind
    if kind == "partition-scatter":
        with open(args.input) as fh:
            first = fh.readline()
            if not first.startswith("# "):
                raise ConfigError("scatter input must start with a metadata line")
            meta = json.loads(first[2:])
            fh.readline()  # column header
            pts, labels = [], []
            for line in fh:
                x, y, lab = line.strip().split(",")
                pts.append((float(x), float(y)))
                labels.append(int(lab))
        cut = meta.get("cut")
        cut_line = (cut["orientation"], cut["position"]) if cut else None
        partition_scatter(args.out, pts, labels, cut_line, title="computed partition")
        print(f"wrote {args.out}")
        return 0

    header, rows = _read_summary_csv(args.input)
    required = {
        "loglog-error": ["n", "mean_e_perm"],
        "degree-regularity": ["n", "mean_deg_max", "mean_deg_min"],
        "giant-fraction": ["n", "mean_giant_fraction"],
    }[kind]
    missing = [c for c in required if c not in header]
    if missing:
        raise ConfigError(f"input {args.input} lacks columns {missing}")
    ns = [int(r["n"]) for r in rows]
    if kind == "loglog-error":
        ys = [float(r["mean_e_perm"]) for r in rows]
        pairs = [(n, y) for n, y in zip(ns, ys) if y > 0 and math.isfinite(y)]
        if len(pairs) < 2:
            raise ConfigError("need at least two positive mean errors for a log-log plot")
        lx = [math.log10(n) for n, _ in pairs]
        ly = [math.log10(y) for _, y in pairs]
        slope, intercept = np.polyfit(lx, ly, 1)
        loglog_plot(args.out, [p[0] for p in pairs], [p[1] for p in pairs],
                    title="mean misclassification vs n", fit=(slope, intercept))
        print(f"slope={slope:.4f}")
    elif kind == "degree-regularity":
        ratio = [float(r["mean_deg_max"]) / max(float(r["mean_deg_min"]), 1e-300) for r in rows]
        series_plot(args.out, ns, [ratio], ["mean max deg / mean min deg"],
                    ylabel="degree ratio", title="degree regularity")
    else:
        ys = [float(r["mean_giant_fraction"]) for r in rows]
        series_plot(args.out, ns, [ys], ["giant fraction"],
                    ylabel="fraction", title="giant component fraction")
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="geocut",
                                 description="balanced cuts on random geometric graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a JSON config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--force", action="store_true", help="overwrite existing outputs")
    p_run.add_argument("--threads", type=int, default=None)
    p_run.add_argument("--out", default=None, help="output directory (default: config dir)")
    p_run.set_defaults(func=cmd_run)

    p_solve = sub.add_parser("solve", help="one end-to-end trial")
    p_solve.add_argument("--domain", required=True, help="WIDTHxHEIGHT, e.g. 1x4")
    p_solve.add_argument("--n", type=int, required=True)
    p_solve.add_argument("--epsilon", type=float, default=None)
    p_solve.add_argument("--regime", default=None, help="power:P or conn:C")
    p_solve.add_argument("--objective", default="cheeger")
    p_solve.add_argument("--kernel", default="indicator", choices=["indicator", "gaussian"])
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--init", default="ground-truth", choices=["ground-truth", "random"])
    p_solve.add_argument("--method", default="prox_threshold",
                         choices=["prox_threshold", "local_search"])
    p_solve.add_argument("--scatter", default=None, help="write partition scatter SVG")
    p_solve.add_argument("--dump", default=None, help="write x,y,label CSV")
    p_solve.set_defaults(func=cmd_solve)

    p_plot = sub.add_parser("plot", help="render an SVG from run/solve outputs")
    p_plot.add_argument("--kind", required=True,
                        choices=["loglog-error", "degree-regularity", "giant-fraction",
                                 "partition-scatter"])
    p_plot.add_argument("--input", required=True)
    p_plot.add_argument("--out", required=True)
    p_plot.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, OSError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
