#!/usr/bin/env python3
"""Structural diagnostics of the random geometric graphs: degree regularity
across scalings, and the giant-component fraction below the connectivity
threshold. Graph-only (no solves), so it runs quickly at large trial counts.
"""

import argparse
from pathlib import Path

import numpy as np

from geocut.geometry import INDICATOR, RectDomain, ScalingRegime, epsilon_for, sample_uniform
from geocut.graph import build_graph, connected_components
from geocut.svg import series_plot

REGIMES = {
    "power03": ScalingRegime("power", 0.3),
    "conn2": ScalingRegime("connectivity_multiple", 2.0),
    "conn1": ScalingRegime("connectivity_multiple", 1.0),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out_structure")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--n", type=int, nargs="+", default=[1000, 2000, 4000, 8000])
    ap.add_argument("--seed", type=int, default=123_000)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    domain = RectDomain(1.0, 1.5)

    ratio_series = []
    giant_series = []
    for name, regime in REGIMES.items():
        ratios = []
        giants = []
        for n in args.n:
            eps = epsilon_for(regime, n)
            rs, gs = [], []
            for t in range(args.trials):
                cloud = sample_uniform(domain, n, args.seed + t)
                g = build_graph(cloud, eps, INDICATOR)
                deg = g.neighbor_counts()
                if deg.min() > 0:
                    rs.append(deg.max() / deg.min())
                gs.append(connected_components(g).component_sizes[0] / n)
            ratios.append(float(np.mean(rs)) if rs else float("nan"))
            giants.append(float(np.mean(gs)))
        ratio_series.append(ratios)
        giant_series.append(giants)
        print(f"{name}: degree ratio {['%.2f' % r for r in ratios]} "
              f"giant {['%.4f' % g for g in giants]}")
    series_plot(out / "degree_ratio.svg", args.n, ratio_series, list(REGIMES),
                ylabel="mean max/min degree", title="degree regularity")
    series_plot(out / "giant_fraction.svg", args.n, giant_series, list(REGIMES),
                ylabel="fraction", title="giant component fraction")
    print(f"wrote plots under {out}/")


if __name__ == "__main__":
    main()
