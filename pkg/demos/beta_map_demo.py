"""Beta map of a fractal arc.

Builds the multiresolution ball family over a depth-3 quadruple-substitution
arc, computes the minimax line deviation inside every window, and writes a
beta-versus-scale scatter plot next to this script.
"""
import os

from curvelab.pipeline import (ExperimentConfig, beta_map, build_family_for,
                               load_curve, plot_beta_scatter)

HERE = os.path.dirname(os.path.abspath(__file__))


def main():
    cfg = ExperimentConfig(generator="koch", generator_params={"depth": 3})
    c = load_curve(cfg)
    family = build_family_for(c, cfg)
    rows = beta_map(c, family)
    nonzero = [(q, r) for q, r in rows if r.beta > 1e-13]
    print(f"curve length {c.length:.6f}, {len(family.balls)} windows, "
          f"{len(nonzero)} with nonzero beta")
    worst = max(nonzero, key=lambda t: t[1].beta)
    print(f"largest beta {worst[1].beta:.4f} at level {worst[0].level}")
    out = os.path.join(HERE, "beta_scatter_koch3.svg")
    plot_beta_scatter(rows, out)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
