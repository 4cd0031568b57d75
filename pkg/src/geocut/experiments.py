"""Seeded multi-trial consistency experiments and their aggregation.

A trial: sample a cloud, build the geometric graph at eps_n, solve the
balanced-cut problem from the configured initialization, and measure the
misclassification against the continuum optimal partition restricted to the
sample. Disconnected graphs are handled by solving on the giant component and
assigning the remaining vertices to classes uniformly at random from the
trial's RNG stream.

Trials are deterministic given (config, n, trial_index): the trial seed is
base_seed XOR splitmix64(n * 2^32 + trial_index). Reports aggregate stored
trial records, so any subset of trials can be reproduced standalone.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .continuum import optimal_axis_cut, rescaled_limit_target
from .functionals import ObjectiveKind, Partition, objective
from .geometry import Kernel, RectDomain, ScalingRegime, epsilon_for
from .graph import build_graph, connected_components
from .matching import misclassification_error, raw_disagreement
from .solvers import GroundTruthInit, RandomInit, SolverConfig, solve

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "ExperimentReport",
    "trial_seed",
    "run_trial",
    "run_experiment",
    "rescaled_constant_convergence",
    "TRIAL_CSV_COLUMNS",
]

TRIAL_CSV_COLUMNS = [
    "n", "trial", "seed", "e_n_raw", "e_n_perm", "objective", "rescaled",
    "giant_fraction", "deg_max", "deg_min", "sweeps", "valid",
]

SUMMARY_CSV_COLUMNS = [
    "n", "trials", "valid_trials", "mean_e_raw", "mean_e_perm", "stderr_e_raw",
    "mean_objective", "mean_rescaled", "mean_rescaled_gtv", "mean_giant_fraction",
    "mean_deg_max", "mean_deg_min", "mean_sweeps",
]


def splitmix64(x: int) -> int:
    """SplitMix64 finalizer; the documented trial-seed mixing function."""
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return (z ^ (z >> 31)) & 0xFFFFFFFFFFFFFFFF


def trial_seed(base_seed: int, n: int, trial_index: int) -> int:
    return (base_seed ^ splitmix64((n << 32) | trial_index)) & 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class DiagnosticsFlags:
    degree_stats: bool = True
    giant_component: bool = True
    rescaled_constant: bool = True
    bottleneck: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    domain: RectDomain
    objective: ObjectiveKind
    kernel: Kernel
    regime: ScalingRegime
    n_values: tuple
    trials_per_n: int
    base_seed: int
    solver: SolverConfig
    diagnostics: DiagnosticsFlags = field(default_factory=DiagnosticsFlags)

    def __post_init__(self):
        ns = tuple(self.n_values)
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("n_values must be strictly increasing")
        if self.trials_per_n < 1:
            raise ValueError("trials_per_n must be >= 1")


@dataclass(frozen=True)
class TrialRecord:
    n: int
    trial: int
    seed: int
    e_n_raw: float
    e_n_perm: float
    objective: float
    rescaled: float
    giant_fraction: float
    deg_max: int
    deg_min: int
    sweeps: int
    valid: bool

    def csv_row(self) -> str:
        vals = [self.n, self.trial, self.seed, self.e_n_raw, self.e_n_perm,
                self.objective, self.rescaled, self.giant_fraction,
                self.deg_max, self.deg_min, self.sweeps, int(self.valid)]
        return ",".join(repr(float(v)) if isinstance(v, float) else str(int(v)) for v in vals)


def ground_truth_labels(domain: RectDomain, cut, points: np.ndarray) -> np.ndarray:
    """Continuum optimal set membership on sample points (strict super-level)."""
    if cut.orientation == "horizontal":
        return (points[:, 1] > cut.position).astype(np.int64)
    return (points[:, 0] > cut.position).astype(np.int64)


def _solver_for(config: ExperimentConfig, seed: int, init_labels) -> SolverConfig:
    """Per-trial solver config: ground-truth labels filled in, or a trial-seeded
    random initialization."""
    if isinstance(config.solver.init, GroundTruthInit):
        if init_labels is None:
            raise ValueError("ground-truth initialization needs a two-way continuum oracle")
        return replace(config.solver, init=GroundTruthInit(init_labels))
    return replace(config.solver, init=RandomInit(seed))


def run_trial(config: ExperimentConfig, n: int, trial_index: int) -> TrialRecord:
    """One end-to-end trial; deterministic given its arguments."""
    seed = trial_seed(config.base_seed, n, trial_index)
    rng = np.random.default_rng(np.uint64(seed))
    pts = rng.random((n, 2)) * config.domain.extents
    from .geometry import PointCloud

    pts.setflags(write=False)
    cloud = PointCloud(points=pts, domain=config.domain, seed=seed)
    eps = epsilon_for(config.regime, n)
    graph = build_graph(cloud, eps, config.kernel)
    kind = config.objective
    if kind.variant == "multiway":
        gt = None
    else:
        cut = optimal_axis_cut(config.domain, kind)
        gt = ground_truth_labels(config.domain, cut, pts)

    deg = graph.neighbor_counts()
    deg_max = int(deg.max())
    deg_min = int(deg.min())

    labeling = connected_components(graph)
    giant_fraction = float(labeling.component_sizes[0]) / n

    invalid = False
    sweeps = 0
    obj_val = float("nan")
    labels_full = None
    n_solve = n
    if labeling.component_sizes[0] < n and config.diagnostics.giant_component:
        giant_vertices = labeling.largest_vertices()
        init_labels = gt[giant_vertices] if gt is not None else None
        if len(giant_vertices) < 2 * kind.k:
            invalid = True
        elif isinstance(config.solver.init, GroundTruthInit) and len(np.unique(init_labels)) < kind.k:
            invalid = True  # continuum partition degenerates on the giant component
        else:
            sub = graph.subgraph(giant_vertices)
            outcome = solve(sub, kind, _solver_for(config, seed, init_labels))
            labels_full = np.empty(n, dtype=np.int64)
            labels_full[giant_vertices] = outcome.partition.labels
            off = np.setdiff1d(np.arange(n), giant_vertices, assume_unique=True)
            labels_full[off] = rng.integers(0, kind.k, size=len(off))
            sweeps = outcome.sweeps_used
            obj_val = outcome.result.objective
            n_solve = len(giant_vertices)
    else:
        outcome = solve(graph, kind, _solver_for(config, seed, gt))
        labels_full = outcome.partition.labels
        sweeps = outcome.sweeps_used
        obj_val = outcome.result.objective

    if invalid or labels_full is None:
        return TrialRecord(n=n, trial=trial_index, seed=seed, e_n_raw=float("nan"),
                           e_n_perm=float("nan"), objective=float("nan"),
                           rescaled=float("nan"), giant_fraction=giant_fraction,
                           deg_max=deg_max, deg_min=deg_min, sweeps=0, valid=False)

    d = cloud.dim
    # when the solve runs on the giant component, the rescaling uses its size
    rescaled = obj_val / (n_solve**2 * eps ** (d + 1))
    if gt is not None:
        part = Partition.from_labels(labels_full, k=kind.k)
        gt_part = Partition.from_labels(gt, k=kind.k)
        e_raw = raw_disagreement(part, gt_part)
        e_perm = misclassification_error(part, gt_part)
    else:
        e_raw = float("nan")
        e_perm = float("nan")
    return TrialRecord(n=n, trial=trial_index, seed=seed, e_n_raw=e_raw, e_n_perm=e_perm,
                       objective=obj_val, rescaled=rescaled, giant_fraction=giant_fraction,
                       deg_max=deg_max, deg_min=deg_min, sweeps=sweeps, valid=True)


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    records: tuple  # TrialRecord, ordered by (n, trial)

    def records_for(self, n: int):
        return [r for r in self.records if r.n == n]

    def per_n_summary(self) -> dict:
        out = {}
        for n in self.config.n_values:
            recs = self.records_for(n)
            valid = [r for r in recs if r.valid]
            e_raw = np.array([r.e_n_raw for r in valid])
            e_perm = np.array([r.e_n_perm for r in valid])
            row = {
                "n": n,
                "trials": len(recs),
                "valid_trials": len(valid),
                "mean_e_raw": float(e_raw.mean()) if len(valid) else float("nan"),
                "mean_e_perm": float(e_perm.mean()) if len(valid) else float("nan"),
                "stderr_e_raw": float(e_raw.std(ddof=0) / np.sqrt(len(valid))) if len(valid) else float("nan"),
                "mean_objective": float(np.mean([r.objective for r in valid])) if len(valid) else float("nan"),
                "mean_rescaled": float(np.mean([r.rescaled for r in valid])) if len(valid) else float("nan"),
                "mean_rescaled_gtv": float(np.mean([2.0 * r.rescaled for r in valid])) if len(valid) else float("nan"),
                "mean_giant_fraction": float(np.mean([r.giant_fraction for r in recs])) if recs else float("nan"),
                "mean_deg_max": float(np.mean([r.deg_max for r in recs])) if recs else float("nan"),
                "mean_deg_min": float(np.mean([r.deg_min for r in recs])) if recs else float("nan"),
                "mean_sweeps": float(np.mean([r.sweeps for r in valid])) if len(valid) else float("nan"),
            }
            out[n] = row
        return out

    def loglog_slope(self, field_name: str = "mean_e_perm") -> float:
        """Least-squares slope of log(mean) against log(n)."""
        summary = self.per_n_summary()
        xs, ys = [], []
        for n in self.config.n_values:
            m = summary[n][field_name]
            if np.isfinite(m) and m > 0:
                xs.append(np.log(float(n)))
                ys.append(np.log(m))
        if len(xs) < 2:
            return float("nan")
        slope, _ = np.polyfit(xs, ys, 1)
        return float(slope)


def _run_trial_star(args):
    config, n, t = args
    return run_trial(config, n, t)


def run_experiment(config: ExperimentConfig, threads: int = 1) -> ExperimentReport:
    """Execute all (n, trial) pairs; aggregation order is fixed by (n, trial).

    Worker processes only affect scheduling; records are keyed and sorted, so
    the report is identical for any thread count.
    """
    tasks = [(config, n, t) for n in config.n_values for t in range(config.trials_per_n)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_trial_star, tasks, chunksize=8))
    else:
        results = [_run_trial_star(t) for t in tasks]
    results.sort(key=lambda r: (r.n, r.trial))
    return ExperimentReport(config=config, records=tuple(results))


def rescaled_constant_convergence(config: ExperimentConfig, threads: int = 1):
    """Per-n mean rescaled cut energies against the continuum limit.

    Returns a list of rows (n, mean_rescaled_objective, mean_rescaled_gtv,
    target). The limit of Theorem-1 type holds for the graph-total-variation
    energy of the optimal normalized indicator, which is twice the rescaled
    Cut/Bal objective; both are reported and the target sigma_eta * C pairs
    with the GTV-side value.
    """
    if config.objective.variant == "multiway":
        raise ValueError("rescaled-constant series is defined for two-way objectives")
    report = run_experiment(config, threads=threads)
    target = rescaled_limit_target(config.domain, config.kernel, config.objective, d=2)
    summary = report.per_n_summary()
    rows = []
    for n in config.n_values:
        rows.append({
            "n": n,
            "mean_rescaled": summary[n]["mean_rescaled"],
            "mean_rescaled_gtv": summary[n]["mean_rescaled_gtv"],
            "target": target,
        })
    return rows, report


# ---------------------------------------------------------------------------
# serialization


def write_trials_csv(report: ExperimentReport, path) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(TRIAL_CSV_COLUMNS) + "\n")
        for r in report.records:
            fh.write(r.csv_row() + "\n")


def write_summary_csv(report: ExperimentReport, path) -> None:
    summary = report.per_n_summary()
    with open(path, "w") as fh:
        fh.write(",".join(SUMMARY_CSV_COLUMNS) + "\n")
        for n in report.config.n_values:
            row = summary[n]
            cells = []
            for col in SUMMARY_CSV_COLUMNS:
                v = row[col]
                cells.append(repr(float(v)) if isinstance(v, float) else str(v))
            fh.write(",".join(cells) + "\n")


def config_to_json(config: ExperimentConfig) -> dict:
    solver = config.solver
    if isinstance(solver.init, GroundTruthInit):
        init = "ground_truth"
    else:
        init = {"random": solver.init.seed}
    if config.objective.variant == "multiway":
        obj = {"multiway": config.objective.k}
    else:
        obj = config.objective.variant
    if config.regime.variant == "power":
        regime = {"power": config.regime.parameter}
    else:
        regime = {"connectivity_multiple": config.regime.parameter}
    return {
        "domain": {"width": config.domain.width, "height": config.domain.height},
        "objective": obj,
        "kernel": config.kernel.variant,
        "regime": regime,
        "n_values": list(config.n_values),
        "trials_per_n": config.trials_per_n,
        "base_seed": config.base_seed,
        "solver": {
            "init": init,
            "method": solver.method,
            "max_sweeps": solver.max_sweeps,
            "stall_sweeps_to_stop": solver.stall_sweeps_to_stop,
            "move_rule": solver.move_rule,
            "prox_inner_iterations": solver.prox_inner_iterations,
            "prox_lambda_scale": solver.prox_lambda_scale,
            "prox_max_rounds": solver.prox_max_rounds,
        },
        "diagnostics": {
            "degree_stats": config.diagnostics.degree_stats,
            "giant_component": config.diagnostics.giant_component,
            "rescaled_constant": config.diagnostics.rescaled_constant,
            "bottleneck": config.diagnostics.bottleneck,
        },
    }


class ConfigError(ValueError):
    """Configuration file is invalid; carries a path-like location hint."""


def _require_keys(obj: dict, allowed: set, where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")


def config_from_json(data: dict) -> ExperimentConfig:
    _require_keys(data, {"domain", "objective", "kernel", "regime", "n_values",
                         "trials_per_n", "base_seed", "solver", "diagnostics"}, "config")
    try:
        dom = data["domain"]
        _require_keys(dom, {"width", "height"}, "config.domain")
        domain = RectDomain(float(dom["width"]), float(dom["height"]))
        obj = data["objective"]
        if isinstance(obj, dict):
            _require_keys(obj, {"multiway"}, "config.objective")
            kind = ObjectiveKind("multiway", int(obj["multiway"]))
        else:
            kind = ObjectiveKind(str(obj))
        kernel = Kernel(str(data["kernel"]))
        reg = data["regime"]
        _require_keys(reg, {"power", "connectivity_multiple"}, "config.regime")
        if len(reg) != 1:
            raise ConfigError("config.regime: exactly one of power/connectivity_multiple")
        if "power" in reg:
            regime = ScalingRegime("power", float(reg["power"]))
        else:
            regime = ScalingRegime("connectivity_multiple", float(reg["connectivity_multiple"]))
        n_values = tuple(int(v) for v in data["n_values"])
        trials = int(data["trials_per_n"])
        base_seed = int(data["base_seed"])
        sv = dict(data.get("solver", {}))
        _require_keys(sv, {"init", "method", "max_sweeps", "stall_sweeps_to_stop",
                           "move_rule", "prox_inner_iterations", "prox_lambda_scale",
                           "prox_max_rounds"}, "config.solver")
        init_spec = sv.get("init", "ground_truth")
        if init_spec == "ground_truth":
            init = GroundTruthInit(labels=None)
        elif isinstance(init_spec, dict) and set(init_spec) == {"random"}:
            init = RandomInit(int(init_spec["random"]))
        else:
            raise ConfigError(f"config.solver.init: expected 'ground_truth' or {{'random': seed}}, got {init_spec!r}")
        solver = SolverConfig(
            init=init,
            method=sv.get("method", "prox_threshold"),
            max_sweeps=int(sv.get("max_sweeps", 1_000_000)),
            stall_sweeps_to_stop=int(sv.get("stall_sweeps_to_stop", 3)),
            move_rule=sv.get("move_rule", "best"),
            prox_inner_iterations=int(sv.get("prox_inner_iterations", 300)),
            prox_lambda_scale=float(sv.get("prox_lambda_scale", 1.0)),
            prox_max_rounds=int(sv.get("prox_max_rounds", 60)),
        )
        diag = dict(data.get("diagnostics", {}))
        _require_keys(diag, {"degree_stats", "giant_component", "rescaled_constant",
                             "bottleneck"}, "config.diagnostics")
        diagnostics = DiagnosticsFlags(
            degree_stats=bool(diag.get("degree_stats", True)),
            giant_component=bool(diag.get("giant_component", True)),
            rescaled_constant=bool(diag.get("rescaled_constant", True)),
            bottleneck=bool(diag.get("bottleneck", False)),
        )
        return ExperimentConfig(domain=domain, objective=kind, kernel=kernel, regime=regime,
                                n_values=n_values, trials_per_n=trials, base_seed=base_seed,
                                solver=solver, diagnostics=diagnostics)
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"config: missing or malformed field ({exc})") from exc


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    return config_from_json(data)
