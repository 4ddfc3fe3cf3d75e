"""Command-line surface.  Exit codes: 0 ok, 1 property violation, 2 bad
input."""
from __future__ import annotations

import functools
import json
import os
import sys

import click

from .pipeline import (ExperimentConfig, beta_map, beta_map_csv,
                       build_family_for, curve_jones_sum, load_curve,
                       plot_beta_scatter, plot_ratio_curve, run_pipeline,
                       tsp_ratio_table, verify_all)


def _load_config(config, **overrides) -> ExperimentConfig:
    if config:
        with open(config) as fh:
            cfg = ExperimentConfig.from_json(json.load(fh))
    else:
        cfg = ExperimentConfig()
    return cfg.with_overrides(**overrides)


def common_options(fn):
    @click.option("--config", type=click.Path(exists=True), default=None,
                  help="experiment config JSON")
    @click.option("--p", "p", type=float, default=None,
                  help="beta sum exponent")
    @click.option("--inflation", type=float, default=None,
                  help="ball inflation factor")
    @click.option("--lambda", "lam", type=float, default=None,
                  help="arc window scale (1 or 5)")
    @click.option("--profile", type=click.Choice(["paper", "lab"]),
                  default=None, help="flatness constant profile")
    @click.option("--J", "j_skip", type=int, default=None,
                  help="core level skip")
    @click.option("--seed", type=int, default=None)
    @click.option("--out", type=click.Path(), default=None,
                  help="output directory")
    @click.option("--curve", "generator", default=None,
                  help="curve generator name")
    @functools.wraps(fn)
    def wrapper(*args, **kw):
        try:
            return fn(*args, **kw)
        except (ValueError, OSError, KeyError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _cfg_from(config, p, inflation, lam, profile, j_skip, seed, out,
              generator):
    return _load_config(config, p=p, inflation=inflation, lam=lam,
                        profile=profile, J=j_skip, seed=seed, out=out,
                        generator=generator)


@click.group()
def main():
    """Beta numbers, multiresolution ball families, cores and weights for
    polyline curves in lp spaces."""


@main.command("net")
@common_options
def net_cmd(config, p, inflation, lam, profile, j_skip, seed, out,
            generator):
    """Build the net hierarchy and ball family; write net.json, balls.csv."""
    cfg = _cfg_from(config, p, inflation, lam, profile, j_skip, seed, out,
                    generator)
    bundle = run_pipeline(cfg, write=True, stages="basic")
    click.echo(f"balls: {bundle['n_balls']}  out: {cfg.out}")


@main.command("beta-map")
@common_options
def beta_map_cmd(config, p, inflation, lam, profile, j_skip, seed, out,
                 generator):
    """Per-ball beta numbers; writes beta_map.csv."""
    cfg = _cfg_from(config, p, inflation, lam, profile, j_skip, seed, out,
                    generator)
    bundle = run_pipeline(cfg, write=True, stages="basic")
    click.echo(f"beta map over {bundle['n_balls']} balls -> "
               f"{os.path.join(cfg.out, 'beta_map.csv')}")


@main.command("jones-sum")
@common_options
def jones_sum_cmd(config, p, inflation, lam, profile, j_skip, seed, out,
                  generator):
    """Scale-weighted beta sum of the configured curve."""
    cfg = _cfg_from(config, p, inflation, lam, profile, j_skip, seed, out,
                    generator)
    c = load_curve(cfg)
    family = build_family_for(c, cfg)
    s = curve_jones_sum(c, family, cfg.p)
    click.echo(json.dumps({"p": cfg.p, "length": c.length,
                           "diam": c.space.diam(c.vertices),
                           "jones_sum": s, "ratio": s / c.length}))


@main.command("cores")
@common_options
def cores_cmd(config, p, inflation, lam, profile, j_skip, seed, out,
              generator):
    """Full pipeline through core trees; writes cores_*.json."""
    cfg = _cfg_from(config, p, inflation, lam, profile, j_skip, seed, out,
                    generator)
    bundle = run_pipeline(cfg, write=True, stages="full")
    click.echo(f"special balls: {bundle.get('n_B_balls', 0)}  "
               f"buckets: {len(bundle.get('buckets', {}))}  out: {cfg.out}")


@main.command("weights")
@common_options
def weights_cmd(config, p, inflation, lam, profile, j_skip, seed, out,
                generator):
    """Full pipeline through the weight recursion; writes report.json."""
    cfg = _cfg_from(config, p, inflation, lam, profile, j_skip, seed, out,
                    generator)
    bundle = run_pipeline(cfg, write=True, stages="full")
    ok = all(rep["q_scan"]["all_pass"]
             for rep in bundle.get("forests", {}).values()) if \
        bundle.get("forests") else True
    click.echo(f"weight report -> {os.path.join(cfg.out, 'report.json')}")
    if not ok:
        sys.exit(1)


@main.command("classify")
@common_options
def classify_cmd(config, p, inflation, lam, profile, j_skip, seed, out,
                 generator):
    """Arc flatness and special-ball classification; writes CSV."""
    cfg = _cfg_from(config, p, inflation, lam, profile, j_skip, seed, out,
                    generator)
    bundle = run_pipeline(cfg, write=True, stages="full")
    click.echo(f"classification -> "
               f"{os.path.join(cfg.out, 'classification.csv')}")
    click.echo(f"special balls: {bundle.get('n_B_balls', 0)}")


@main.command("verify")
@click.option("--seed", type=int, default=0)
@click.option("--suite", "suites", multiple=True,
              help="restrict to named suites")
def verify_cmd(seed, suites):
    """Run the property-check suites; nonzero exit on any violation."""
    try:
        code, rows = verify_all(seed, list(suites) or None)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    for name, status, details in rows:
        click.echo(f"{name:12s} {status}")
        for d in details:
            click.echo(f"    {d}")
    sys.exit(code)


@main.command("ratio-table")
@common_options
@click.option("--depths", default="3,4,5,6",
              help="comma-separated depth list")
def ratio_table_cmd(config, p, inflation, lam, profile, j_skip, seed, out,
                    generator, depths):
    """Scale-weighted beta sum to length ratios across generator depths."""
    cfg = _cfg_from(config, p, inflation, lam, profile, j_skip, seed, out,
                    generator)
    depth_list = [int(d) for d in depths.split(",") if d.strip()]
    table = tsp_ratio_table(cfg.generator, depth_list, cfg.p, cfg)
    click.echo(f"{'depth':>5} {'length':>12} {'sum':>12} {'ratio':>8}")
    for row in table:
        click.echo(f"{row['depth']:>5} {row['length']:>12.6f} "
                   f"{row['jones_sum']:>12.6f} {row['ratio']:>8.4f}")
    os.makedirs(cfg.out, exist_ok=True)
    with open(os.path.join(cfg.out, "ratio_table.json"), "w") as fh:
        json.dump(table, fh, indent=2)


@main.command("plot")
@common_options
def plot_cmd(config, p, inflation, lam, profile, j_skip, seed, out,
             generator):
    """Beta-versus-scale scatter as a static SVG."""
    cfg = _cfg_from(config, p, inflation, lam, profile, j_skip, seed, out,
                    generator)
    c = load_curve(cfg)
    family = build_family_for(c, cfg)
    rows = beta_map(c, family)
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, "beta_scatter.svg")
    plot_beta_scatter(rows, path)
    click.echo(f"plot -> {path}")


if __name__ == "__main__":
    main()
