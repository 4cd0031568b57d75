#!/usr/bin/env python3
"""Error-decay study: mean misclassification against the continuum cut across
the three connectivity-radius scalings, with log-log SVG output.

Writes one trials CSV + summary CSV per regime and a combined decay plot.
Desk-scale defaults (trials, max n) are adjustable from the command line.
"""

import argparse
import math
from pathlib import Path

from geocut.experiments import (
    DiagnosticsFlags,
    ExperimentConfig,
    run_experiment,
    write_summary_csv,
    write_trials_csv,
)
from geocut.functionals import CHEEGER
from geocut.geometry import INDICATOR, RectDomain, ScalingRegime
from geocut.solvers import GroundTruthInit, SolverConfig
from geocut.svg import loglog_plot, series_plot

REGIMES = {
    "power03": ScalingRegime("power", 0.3),
    "conn2": ScalingRegime("connectivity_multiple", 2.0),
    "conn1": ScalingRegime("connectivity_multiple", 1.0),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out_decay")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--n", type=int, nargs="+", default=[1000, 2000, 4000, 8000])
    ap.add_argument("--threads", type=int, default=2)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    all_means = []
    for name, regime in REGIMES.items():
        cfg = ExperimentConfig(
            domain=RectDomain(1.0, 1.5), objective=CHEEGER, kernel=INDICATOR,
            regime=regime, n_values=tuple(args.n), trials_per_n=args.trials,
            base_seed=args.seed,
            solver=SolverConfig(init=GroundTruthInit(labels=None), method="prox_threshold"),
            diagnostics=DiagnosticsFlags(),
        )
        report = run_experiment(cfg, threads=args.threads)
        write_trials_csv(report, out / f"{name}_trials.csv")
        write_summary_csv(report, out / f"{name}_summary.csv")
        summary = report.per_n_summary()
        means = [summary[n]["mean_e_perm"] for n in args.n]
        slope = report.loglog_slope("mean_e_perm")
        all_means.append(means)
        print(f"{name}: means={['%.4f' % m for m in means]} slope={slope:.3f}")
        lx = [math.log10(n) for n in args.n]
        ly = [math.log10(m) for m in means]
        import numpy as np

        s, b = np.polyfit(lx, ly, 1)
        loglog_plot(out / f"{name}_decay.svg", args.n, means, fit=(s, b),
                    title=f"{regime.describe()}")
    series_plot(out / "decay_all.svg", args.n, all_means, list(REGIMES),
                ylabel="mean error", title="error decay across regimes")
    print(f"wrote plots under {out}/")


if __name__ == "__main__":
    main()
