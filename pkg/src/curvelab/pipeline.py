"""Experiment harness: configuration, the end-to-end pipeline, Jones-sum
ratio tables, verification suites, and report/plot emission.

Every run is driven by one ExperimentConfig; all randomness flows from its
seed, and outputs are deterministic byte-for-byte for a fixed config.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from . import banach, beta, core, curve as curve_mod, generators, martingale
from .banach import Line, NormedSpace, j_projection
from .beta import beta_number
from .core import build_core_tree, resolve_tree_measures, verify_core_lemma
from .curve import (Curve, FlatnessError, FragmentBoundsError, FragmentError,
                    classify, classify_core, efficient_subarc, is_B_ball,
                    maximal_fragment, window_points)
from .generators import generate
from .martingale import build_weights, q_hypothesis_scan, verify_bounds, \
    verify_conservation
from .net import MultiresFamily, build_nets, check_hierarchy, family_to_csv, \
    make_family


@dataclass(frozen=True)
class ExperimentConfig:
    generator: str = "segment"
    generator_params: dict = field(default_factory=dict)
    curve_path: str | None = None
    space: NormedSpace = NormedSpace(2, 2.0)
    inflation: float = 4.0
    lam: float = 1.0
    profile: str = "lab"          # "lab" | "paper"
    eps1: float | None = None
    eps2: float | None = None
    J: int = 6
    c: float = 2.0 ** -12
    k_min: int | None = None
    k_max: int | None = None
    p: float = 2.0
    seed: int = 0
    out: str = "out"

    def resolved_eps(self) -> tuple:
        e1 = self.eps1 if self.eps1 is not None \
            else 1.0 / (126.0 * self.inflation)
        if self.eps2 is not None:
            e2 = self.eps2
        elif self.profile == "paper":
            e2 = 2.0 ** -55 * e1 / self.inflation
        elif self.profile == "lab":
            e2 = 0.05
        else:
            raise ValueError(f"unknown profile {self.profile!r}")
        return e1, e2

    def to_json(self) -> dict:
        return {"curve": ({"path": self.curve_path} if self.curve_path else
                          {"generator": self.generator,
                           "params": self.generator_params}),
                "space": self.space.to_json(),
                "inflation": self.inflation, "lambda": self.lam,
                "profile": self.profile, "eps1": self.eps1,
                "eps2": self.eps2, "J": self.J, "c": self.c,
                "k_min": self.k_min, "k_max": self.k_max, "p": self.p,
                "seed": self.seed, "out": self.out}

    @staticmethod
    def from_json(obj: dict) -> "ExperimentConfig":
        cur = obj.get("curve", {})
        return ExperimentConfig(
            generator=cur.get("generator", "segment"),
            generator_params=cur.get("params", {}),
            curve_path=cur.get("path"),
            space=NormedSpace.from_json(obj["space"]) if "space" in obj
            else NormedSpace(2, 2.0),
            inflation=float(obj.get("inflation", 4.0)),
            lam=float(obj.get("lambda", 1.0)),
            profile=obj.get("profile", "lab"),
            eps1=obj.get("eps1"), eps2=obj.get("eps2"),
            J=int(obj.get("J", 6)), c=float(obj.get("c", 2.0 ** -12)),
            k_min=obj.get("k_min"), k_max=obj.get("k_max"),
            p=float(obj.get("p", 2.0)), seed=int(obj.get("seed", 0)),
            out=obj.get("out", "out"))

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)


def load_curve(cfg: ExperimentConfig) -> Curve:
    if cfg.curve_path:
        with open(cfg.curve_path) as fh:
            return Curve.from_json(json.load(fh))
    return generate(cfg.generator, cfg.generator_params, cfg.space)


def default_k_range(c: Curve, depth: int = 7) -> tuple:
    """Coarsest scale comparable to the diameter; finest a fixed number of
    dyadic levels below it."""
    d = c.space.diam(c.vertices)
    k_min = int(math.floor(-math.log2(d))) if d > 0 else 0
    return k_min, k_min + depth


def curve_net_samples(c: Curve, k_max: int, cap: int = 20000) -> np.ndarray:
    """Points along the curve, ordered by parameter, at arclength spacing
    about half the finest net scale; vertices always included."""
    step = 2.0 ** (-k_max) / 2.0
    n = min(cap, max(1, int(math.ceil(c.length / step))))
    params = np.unique(np.concatenate([np.linspace(0.0, 1.0, n + 1),
                                       c._params]))
    return np.asarray([c.point_at(t) for t in params])


def build_family_for(c: Curve, cfg: ExperimentConfig) -> MultiresFamily:
    auto = default_k_range(c)
    k_min = cfg.k_min if cfg.k_min is not None else auto[0]
    k_max = cfg.k_max if cfg.k_max is not None else max(k_min, auto[1])
    samples = curve_net_samples(c, k_max)
    h = build_nets(samples, k_min, k_max, c.space)
    return make_family(h, cfg.inflation)


def beta_map(c: Curve, family: MultiresFamily) -> list:
    """Per-ball beta over the curve, exact on polyline knots."""
    rows = []
    for q in family.balls:
        pts = window_points(c, q)
        if len(pts) == 0:
            rows.append((q, beta.BetaResult(0.0, None, 0.0, q.diam, True)))
            continue
        rows.append((q, beta_number(pts, q, c.space,
                                    membership_tol=1e-9 * q.radius)))
    return rows


def beta_map_csv(rows, dim: int) -> str:
    cols = ["level", "index", "beta"]
    cols += [f"line_base_{i}" for i in range(dim)]
    cols += [f"line_dir_{i}" for i in range(dim)]
    out = [",".join(cols)]
    for q, res in rows:
        line = res.best_line
        base = line.base.tolist() if line else [math.nan] * dim
        d = line.dir.tolist() if line else [math.nan] * dim
        out.append(",".join([str(q.level), str(q.index), repr(res.beta)]
                            + [repr(float(v)) for v in base + d]))
    return "\n".join(out) + "\n"


def curve_jones_sum(c: Curve, family: MultiresFamily, p: float,
                    c1: float = 1.0, rows=None) -> float:
    """diam E + sum beta^p diam Q with E the full polyline (knot-exact)."""
    de = c.space.diam(c.vertices)
    rows = rows if rows is not None else beta_map(c, family)
    total = de
    for q, res in rows:
        if p == 1.0 and q.diam > c1 * de:
            continue
        total += res.beta ** p * q.diam
    return total


def detect_B_balls(c: Curve, family: MultiresFamily,
                   cfg: ExperimentConfig, rows=None) -> list:
    """Classify every ball with nonzero window beta; returns result tuples
    (ball, is_B, report, classification)."""
    eps1, eps2 = cfg.resolved_eps()
    rows = rows if rows is not None else beta_map(c, family)
    out = []
    for q, res in rows:
        if res.beta <= 1e-13:
            continue
        cls = classify(c, q, cfg.lam, eps2)
        ok, rep = is_B_ball(c, q, cfg.lam, eps1, eps2,
                            inflation=cfg.inflation, classification=cls)
        out.append((q, ok, rep, cls))
    return out


def classification_csv(results, lam: float) -> str:
    cols = ("ball_id,lambda,n_arcs,n_flat,n_star,n_dominant,"
            "beta_gamma,beta_lambda,beta_star,is_B,b0_excluded")
    out = [cols]
    for q, ok, rep, cls in results:
        out.append(",".join([
            f"{q.level}:{q.index}", repr(lam), str(len(cls.lambda_set)),
            str(len(cls.flat)), str(len(cls.star_flat)),
            str(len(cls.dominant)), repr(cls.beta_gamma),
            repr(cls.beta_lambda), repr(cls.beta_star),
            str(ok).lower(), str(rep["b0_excluded"]).lower()]))
    return "\n".join(out) + "\n"


def bucket_key(beta_star: float, level: int, skip: int) -> tuple:
    """Dyadic flatness bucket M (2^-M < beta <= 2^-(M-1)) and level residue."""
    if beta_star <= 0.0:
        raise ValueError("bucketing requires positive beta")
    M = int(math.floor(-math.log2(beta_star))) + 1
    if not (2.0 ** -M < beta_star <= 2.0 ** -(M - 1)):
        # boundary roundoff: shift by one
        M += 1 if beta_star <= 2.0 ** -M else -1
    return M, level % skip


def bucket_B_balls(results, skip: int) -> dict:
    buckets: dict = {}
    for q, ok, rep, cls in results:
        if not ok or cls.beta_star <= 0.0:
            continue
        buckets.setdefault(bucket_key(cls.beta_star, q.level, skip),
                           []).append(q)
    return buckets


def resolve_fragments(c: Curve, roots, cfg: ExperimentConfig) -> dict:
    """Attach H_Q (and diam_H) to every core node; report failures."""
    _, eps2 = cfg.resolved_eps()
    failures = {}

    def walk(n):
        try:
            frag = maximal_fragment(c, n.ball, n.region, n.q_star,
                                    cfg.lam, eps2)
            n.fragment = frag
            n.diam_H = frag.diam
        except (FragmentError, FragmentBoundsError,
                banach.UnsupportedProjectionError) as exc:
            failures[n.id] = str(exc)
            # fall back to the measurable span of the curve in the core so
            # the weight recursion stays runnable; flagged in the report
            pts = []
            for a, b in curve_mod.region_intervals(c, n.region):
                pts.extend(c.arc_points(a, b))
            n.diam_H = c.space.diam(np.asarray(pts)) if pts else 0.0
        for ch in n.children:
            walk(ch)

    for r in roots:
        walk(r)
    return failures


def classify_children(c: Curve, roots, cfg: ExperimentConfig) -> dict:
    """Tall/wide classification of every child core, keyed by node id."""
    _, eps2 = cfg.resolved_eps()
    n2_map = {}

    def walk(n):
        if n.children and n.fragment is not None:
            try:
                g = efficient_subarc(c, n.fragment, n.q_star)
                line = Line.through(c.point_at(g.a), c.point_at(g.b),
                                    c.space)
                proj = j_projection(c.space, line)
                for ch in n.children:
                    n2_map[ch.id] = classify_core(c, g, proj, ch,
                                                  cfg.lam, eps2)
            except (FlatnessError, banach.UnsupportedProjectionError,
                    ValueError) as exc:
                for ch in n.children:
                    n2_map[ch.id] = f"unresolved: {exc}"
        for ch in n.children:
            walk(ch)

    for r in roots:
        walk(r)
    return n2_map


def run_pipeline(cfg: ExperimentConfig, write: bool = True,
                 stages: str = "full") -> dict:
    """Full experiment: curve -> nets -> betas -> special balls -> cores ->
    fragments -> classification -> weights -> verifier reports."""
    c = load_curve(cfg)
    family = build_family_for(c, cfg)
    rows = beta_map(c, family)
    sum_p = curve_jones_sum(c, family, cfg.p, rows=rows)
    bundle = {"config": cfg.to_json(),
              "curve_length": c.length,
              "diam": c.space.diam(c.vertices),
              "injective": c.is_injective(),
              "n_balls": len(family.balls),
              "jones_sum": sum_p,
              "net_violations": check_hierarchy(family.hierarchy,
                                                c.vertices)}
    artifacts = {"balls.csv": family_to_csv(family),
                 "net.json": json.dumps(family.hierarchy.to_json(
                     family.inflation), indent=2),
                 "beta_map.csv": beta_map_csv(rows, c.space.dim)}
    if stages == "full":
        results = detect_B_balls(c, family, cfg, rows=rows)
        b_ids = [q.id for q, ok, _, _ in results if ok]
        bundle["n_B_balls"] = len(b_ids)
        bundle["B_balls"] = [list(i) for i in b_ids]
        artifacts["classification.csv"] = classification_csv(results,
                                                             cfg.lam)
        buckets = bucket_B_balls(results, cfg.J)
        bundle["buckets"] = {f"{m},{j}": [list(q.id) for q in qs]
                             for (m, j), qs in sorted(buckets.items())}
        forest_reports = {}
        for key, balls in sorted(buckets.items()):
            ids = [q.id for q in balls]
            roots = build_core_tree(family, ids, cfg.J, cfg.c)
            all_cores = _flatten(roots)
            lemma = verify_core_lemma(all_cores, c.space)
            resolve_tree_measures(roots, c)
            frag_fail = resolve_fragments(c, roots, cfg)
            n2_map = classify_children(c, roots, cfg)
            trees, weight_reports = [], []
            for r in roots:
                if r.diam_H and r.ell_U:
                    t = build_weights(r)
                    trees.append(t)
                    weight_reports.append(verify_conservation(t))
            scan = q_hypothesis_scan(roots, c.space, n2_map)
            forest_reports[f"{key[0]},{key[1]}"] = {
                "core_lemma": lemma,
                "fragment_failures": {f"{k}": v for k, v in
                                      frag_fail.items()},
                "n2_map": {f"{k}": v for k, v in n2_map.items()},
                "conservation": weight_reports,
                "q_scan": scan,
            }
            artifacts[f"cores_{key[0]}_{key[1]}.json"] = \
                core.core_forest_to_json(roots)
        bundle["forests"] = forest_reports
    artifacts["report.json"] = json.dumps(bundle, indent=2, default=str)
    if write:
        os.makedirs(cfg.out, exist_ok=True)
        for name, text in sorted(artifacts.items()):
            with open(os.path.join(cfg.out, name), "w") as fh:
                fh.write(text)
    bundle["artifacts"] = artifacts
    return bundle


def _flatten(roots):
    out = []

    def walk(n):
        out.append(n)
        for ch in n.children:
            walk(ch)
    for r in roots:
        walk(r)
    return out


def tsp_ratio_table(name: str, depths, p: float,
                    cfg: ExperimentConfig | None = None) -> list:
    """(depth, curve length, scale-weighted beta sum, ratio) per depth."""
    import inspect
    cfg = cfg or ExperimentConfig()
    takes_depth = "depth" in inspect.signature(
        generators.GENERATORS[name]).parameters
    table = []
    for depth in depths:
        params = {"depth": int(depth)} if takes_depth else {}
        c = generate(name, params, cfg.space)
        family = build_family_for(c, cfg)
        s = curve_jones_sum(c, family, p)
        table.append({"depth": int(depth), "length": c.length,
                      "jones_sum": s, "ratio": s / c.length})
    return table


def plot_beta_scatter(rows, path: str) -> None:
    """Static SVG of beta against scale; deterministic bytes."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    plt.rcParams["svg.hashsalt"] = "curvelab"
    levels = [q.level for q, _ in rows]
    betas = [r.beta for _, r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter(levels, betas, s=8)
    ax.set_xlabel("net level k")
    ax.set_ylabel("beta")
    ax.set_title("beta vs scale")
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_ratio_curve(table, path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    plt.rcParams["svg.hashsalt"] = "curvelab"
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([r["depth"] for r in table], [r["ratio"] for r in table],
            marker="o")
    ax.set_xlabel("depth")
    ax.set_ylabel("sum / length")
    ax.set_title("scale-weighted beta sum against curve length")
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


# ------------------------------------------------------------ verify_all

def _suite_banach(rng) -> list:
    bad = []
    for _ in range(300):
        p = rng.choice([1.5, 2.0, 3.0, 7.0])
        space = NormedSpace(2, float(p))
        x = rng.normal(size=2) * 3.0
        y = rng.normal(size=2) * 3.0
        a, b = rng.normal(size=2), rng.normal(size=2)
        if space.norm(b - a) < 1e-9:
            continue
        line = Line.through(a, b, space)
        proj = j_projection(space, line)
        if space.norm(proj(x) - proj(y)) > space.norm(x - y) + 1e-9:
            bad.append("projection not 1-Lipschitz")
        if space.norm(proj(proj(x)) - proj(x)) > 1e-9:
            bad.append("projection not idempotent")
        d = banach.dist_to_line(space, x, line)
        gap = space.norm(x - proj(x))
        if not (d - 1e-9 <= gap <= 2.0 * d + 1e-9):
            bad.append("distance sandwich violated")
        jx = banach.duality_map(space, x)
        if abs(space.dual_norm(jx) - space.norm(x)) > 1e-9:
            bad.append("duality norm identity violated")
        if abs(float(jx @ x) - space.norm(x) ** 2) > 1e-9:
            bad.append("duality pairing identity violated")
    return bad


def _suite_net(rng) -> list:
    bad = []
    for _ in range(10):
        pts = rng.uniform(-1, 1, size=(60, 2))
        h = build_nets(pts, 0, 4, NormedSpace(2, 2.0))
        bad.extend(check_hierarchy(h, pts))
    return bad


def _suite_beta(rng) -> list:
    from .beta import beta_monotone_check
    from .net import Ball
    bad = []
    space = NormedSpace(2, 2.0)
    for _ in range(50):
        pts = rng.uniform(-1, 1, size=(12, 2))
        res = beta_number(pts, Ball(np.zeros(2), 2.0), space)
        if not (0.0 <= res.beta <= 1.0 + 1e-12):
            bad.append("beta out of range")
        # translation + dilation invariance
        lam = 2.5
        v = rng.uniform(-1, 1, size=2)
        res2 = beta_number(lam * pts + v, Ball(v, lam * 2.0), space)
        if abs(res.beta - res2.beta) > 1e-9:
            bad.append("beta not scale invariant")
        q = Ball(np.zeros(2), 2.0)
        r = Ball(rng.uniform(-0.5, 0.5, size=2), 1.0)
        sub = pts[:8]
        if not beta_monotone_check(sub, pts, r, q, space):
            bad.append("beta monotonicity violated")
    return bad


def _suite_martingale(rng) -> list:
    from .tests_fixtures import random_weight_forest
    bad = []
    for i in range(5):
        roots, space = random_weight_forest(int(rng.integers(1 << 30)))
        for root in roots:
            t = build_weights(root)
            rep = verify_conservation(t)
            if not rep["ok"]:
                bad.append(f"conservation drift {rep['max_drift']}")
        rep = verify_bounds([build_weights(r) for r in roots], 0.999, space)
        if not rep["ok"]:
            bad.extend(rep["violations"])
    return bad


SUITES = {"banach": _suite_banach, "net": _suite_net, "beta": _suite_beta,
          "martingale": _suite_martingale}


def verify_all(seed: int = 0, suites=None) -> tuple:
    """Run the named property suites; returns (exit code, summary rows)."""
    rows = []
    code = 0
    names = suites or sorted(SUITES)
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
        rng = np.random.default_rng(seed + sum(ord(ch) for ch in name))
        bad = SUITES[name](rng)
        rows.append((name, "ok" if not bad else "FAIL", bad[:5]))
        if bad:
            code = 1
    return code, rows
