"""Cores: fixpoint unions of overlapping finer-scale balls around net
points, their tree, remainders, and the chained-ball containment verifier.

A core seeded at a level-k net point starts as B(x, c 2^-k) and accretes,
level by level (k + J, k + 2J, ...), every candidate ball that overlaps the
union built so far.  The construction is a monotone fixpoint and terminates
because the nets are finite.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .banach import LINE_TOL, NormedSpace
from .net import Ball, MultiresFamily, NetHierarchy, Region


@dataclass
class CoreNode:
    ball: Ball                    # the generating window Q
    q_star: Ball                  # seed ball B(x, c 2^-k)
    J: int
    c: float
    members: list = field(default_factory=list)   # accreted balls, levels k+J*j
    parent: "CoreNode | None" = None
    children: list = field(default_factory=list)
    fragment: object = None       # resolved H_Q, when computed
    diam_H: float | None = None
    ell_U: float | None = None
    ell_R: float | None = None
    s_Q: float | None = None

    @property
    def level(self) -> int:
        return self.ball.level

    @property
    def region(self) -> Region:
        return Region(list(self.members))

    @property
    def id(self):
        return self.ball.id

    def member_keys(self) -> set:
        return {(b.level, bytes(np.asarray(b.center, dtype=float))) for b in
                self.members}

    def to_json(self) -> dict:
        return {
            "ball_id": list(self.ball.id),
            "q_star": {"c": self.q_star.center.tolist(),
                       "r": self.q_star.radius},
            "members": [{"c": b.center.tolist(), "r": b.radius,
                         "level": b.level} for b in self.members],
            "children": [ch.to_json() for ch in self.children],
        }


def build_core(q: Ball, h: NetHierarchy, J: int = 6,
               c: float = 2.0 ** -12) -> CoreNode:
    """Accrete overlapping finer balls around q's center to a fixpoint."""
    if J < 4:
        raise ValueError("J must be >= 4")
    if not (0.0 < c <= 0.2):
        raise ValueError("c must lie in (0, 1/5]")
    if q.level is None:
        raise ValueError("core seeds require a family ball with a level")
    k = q.level
    pts = h.levels.get(k)
    if pts is None or not np.any(np.all(pts == q.center, axis=1)):
        raise ValueError("ball center is not a net point at its level")
    space = h.space
    seed = Ball(np.asarray(q.center, dtype=float), c * 2.0 ** (-k),
                level=k, index=q.index)
    members = [seed]
    j = 1
    while k + J * j <= h.k_max:
        lvl = k + J * j
        r = c * 2.0 ** (-lvl)
        centers = np.asarray([b.center for b in members])
        radii = np.asarray([b.radius for b in members])
        # candidates overlap-test against the union from the previous
        # level only (the snapshot above), per the accretion recursion
        for idx, y in enumerate(h.levels[lvl]):
            d = space.norms(centers - y) - radii
            if d.min() <= r:
                members.append(Ball(np.asarray(y, dtype=float), r,
                                    level=lvl, index=idx))
        j += 1
    return CoreNode(q, seed, J, c, members)


def verify_core_lemma(cores: list, space: NormedSpace) -> dict:
    """Shape, same-level separation, and cross-level nesting checks.

    All cores must share (J, c) and have levels in one residue class mod J.
    Violations are reported, not raised: each check mirrors a theorem, so
    any failure indicates an implementation bug.
    """
    report = {"violations": [], "n_cores": len(cores), "checks": 0}
    if not cores:
        return report
    J = cores[0].J
    c = cores[0].c
    j0 = cores[0].level % J
    for u in cores:
        if u.J != J or u.c != c or u.level % J != j0:
            report["violations"].append(
                f"core {u.id}: mixed (J, c, residue) configuration")
    outer_factor = (1.0 + 3.0 / 2.0 ** J)
    for u in cores:
        k = u.level
        lim = outer_factor * c * 2.0 ** (-k)
        reach = max(space.norm(b.center - u.q_star.center) + b.radius
                    for b in u.members)
        report["checks"] += 1
        if reach > lim + LINE_TOL:
            report["violations"].append(
                f"core {u.id}: shape bound {reach} > {lim}")
        if lim > 0.25 * 2.0 ** (-k) + LINE_TOL:
            report["violations"].append(
                f"core {u.id}: outer ball exceeds quarter separation scale")
    for i, u in enumerate(cores):
        for v in cores[i + 1:]:
            if u.level == v.level:
                gap = u.region.gap_to(v.region, space)
                need = 0.5 * 2.0 ** (-u.level)
                report["checks"] += 1
                if gap < need - LINE_TOL:
                    report["violations"].append(
                        f"cores {u.id},{v.id}: same-level gap {gap} < {need}")
            else:
                fine, coarse = (u, v) if u.level > v.level else (v, u)
                if fine.region.intersects(coarse.region, space):
                    report["checks"] += 1
                    if not fine.member_keys() <= coarse.member_keys():
                        report["violations"].append(
                            f"cores {fine.id},{coarse.id}: intersecting but "
                            "finer core not nested in coarser")
    report["ok"] = not report["violations"]
    return report


def build_core_tree(family: MultiresFamily, selected, J: int = 6,
                    c: float = 2.0 ** -12) -> list:
    """Build cores for the selected ball ids and link them by inclusion.

    selected levels must share one residue class mod J.  Returns the roots.
    """
    balls = [family.ball(lvl, idx) for lvl, idx in selected]
    if balls:
        residues = {b.level % J for b in balls}
        if len(residues) > 1:
            raise ValueError(
                f"selected levels span several residues mod {J}: {residues}")
    h = family.hierarchy
    space = family.space
    cores = [build_core(b, h, J, c) for b in balls]
    cores.sort(key=lambda u: (u.level, u.ball.index))
    roots = []
    for i, u in enumerate(cores):
        # parent: the finest strictly-coarser core it intersects
        parent = None
        for v in cores[:i]:
            if v.level < u.level and v.region.intersects(u.region, space):
                if parent is None or v.level > parent.level:
                    parent = v
        if parent is None:
            roots.append(u)
        else:
            u.parent = parent
            parent.children.append(u)
    return roots


class RemainderCell:
    """Points of a core region not covered by any child core."""

    def __init__(self, node: CoreNode):
        self.node = node

    def contains(self, x, space: NormedSpace, tol: float = 0.0) -> bool:
        if not self.node.region.contains(x, space, tol):
            return False
        return not any(ch.region.contains(x, space, -tol)
                       for ch in self.node.children)


def remainder(node: CoreNode, curve) -> tuple:
    """Remainder region and its curve length.

    Children cores are pairwise disjoint and contained in the parent, so the
    length is an exact subtraction of restricted measures.
    """
    from .curve import restricted_measure
    if node.ell_U is None:
        node.ell_U = restricted_measure(curve, node.region)
    child_len = 0.0
    for ch in node.children:
        if ch.ell_U is None:
            ch.ell_U = restricted_measure(curve, ch.region)
        child_len += ch.ell_U
    node.ell_R = max(0.0, node.ell_U - child_len)
    return RemainderCell(node), node.ell_R


def resolve_tree_measures(roots: list, curve) -> None:
    """Fill ell_U / ell_R caches over whole trees."""
    def walk(n):
        remainder(n, curve)
        for ch in n.children:
            walk(ch)
    for r in roots:
        walk(r)


def verify_ball_chain(balls: list, levels: list, xi: float, r0: float,
                      space: NormedSpace) -> dict:
    """Chained-ball containment: check hypotheses, then the union bound.

    Hypotheses: (i) every ball after the first meets the union of its
    predecessors; (ii) radii decay as xi^-level * r0; (iii) same-level
    centers are 3 xi^-level r0 apart (gap between balls).  When they hold,
    the whole union sits inside the slightly inflated minimal-level ball.
    """
    if xi <= 6.0:
        raise ValueError("xi must exceed 6")
    report = {"hypotheses_ok": False, "containment_ok": False,
              "violated": None}
    n = len(balls)
    if n == 0:
        report["violated"] = "empty chain"
        return report
    for i in range(1, n):
        b = balls[i]
        if all(space.norm(b.center - balls[j].center)
               > b.radius + balls[j].radius + LINE_TOL for j in range(i)):
            report["violated"] = "chain"
            return report
    for i, b in enumerate(balls):
        if b.radius > xi ** (-levels[i]) * r0 + LINE_TOL:
            report["violated"] = "decay"
            return report
    for i in range(n):
        for j in range(i + 1, n):
            if levels[i] == levels[j]:
                gap = space.norm(balls[i].center - balls[j].center) \
                    - balls[i].radius - balls[j].radius
                if gap < 3.0 * xi ** (-levels[i]) * r0 - LINE_TOL:
                    report["violated"] = "separation"
                    return report
    report["hypotheses_ok"] = True
    k_min = min(levels)
    minimal = [i for i in range(n) if levels[i] == k_min]
    if len(minimal) > 1:
        report["violated"] = "minimal level not unique"
        return report
    m = minimal[0]
    report["minimal_index"] = m
    lim = (1.0 + 3.0 / xi) * xi ** (-k_min) * r0
    ok = all(space.norm(b.center - balls[m].center) + b.radius
             <= lim + LINE_TOL for b in balls)
    report["containment_ok"] = ok
    report["bound_radius"] = lim
    return report


def core_forest_to_json(roots: list) -> str:
    return json.dumps([r.to_json() for r in roots], indent=2)


def shape_regime(J: int) -> str:
    """Which shape bound applies at this skip depth."""
    return "fifth-decimal" if J >= 19 else "coarse"


def outer_shape_factor(J: int) -> float:
    return 1.0 + 3.0 / 2.0 ** J


def check_scale_gap(q_star: Ball, child_ball: Ball, lam: float,
                    space: NormedSpace) -> bool:
    """If the doubled child window touches 0.99999 Q_*, it must fit in Q_*."""
    w = child_ball.scaled(2.0 * lam)
    shrink = q_star.scaled(0.99999)
    touches = space.norm(w.center - shrink.center) \
        <= w.radius + shrink.radius
    if not touches:
        return True
    return space.norm(w.center - q_star.center) + w.radius \
        <= q_star.radius + LINE_TOL


def paper_skip_depth(inflation: float, M: int = 1) -> int:
    """The deep-profile skip J = K*M with K = 100 + ceil(log2 A)."""
    return (100 + math.ceil(math.log2(inflation))) * M
