"""Synthetic core-tree fixtures for weight-recursion checks.

These build duck-typed node forests over the unit segment on the x-axis:
every node region is one ball whose intersection with the segment is an
interval, so lengths are exact interval arithmetic and no curve machinery
is involved.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .banach import NormedSpace
from .net import Ball, Region

SPACE = NormedSpace(2, 2.0)


@dataclass
class FixtureNode:
    id: str
    ball: Ball
    children: list = field(default_factory=list)
    ell_U: float = 0.0
    ell_R: float = 0.0
    diam_H: float = 0.0
    s_Q: float | None = None
    fragment: object = None

    @property
    def q_star(self) -> Ball:
        return self.ball

    @property
    def members(self) -> list:
        return [self.ball]

    @property
    def region(self) -> Region:
        return Region([self.ball])


def _interval_node(lo: float, hi: float, name: str) -> FixtureNode:
    r = 0.5 * (hi - lo)
    ball = Ball(np.array([lo + r, 0.0]), r)
    node = FixtureNode(name, ball, ell_U=hi - lo, ell_R=hi - lo)
    return node


def _grow(node: FixtureNode, lo: float, hi: float, depth: int,
          max_depth: int, rng) -> None:
    if depth >= max_depth or hi - lo < 0.02:
        node.diam_H = node.ell_U * rng.uniform(0.6, 1.0)
        return
    m = int(rng.integers(1, 4))
    edges = np.linspace(lo, hi, m + 1)
    covered = 0.0
    for i in range(m):
        slot_lo, slot_hi = float(edges[i]), float(edges[i + 1])
        w = (slot_hi - slot_lo) * rng.uniform(0.2, 0.7)
        start = slot_lo + (slot_hi - slot_lo - w) * rng.uniform(0.1, 0.9)
        child = _interval_node(start, start + w, f"{node.id}.{i}")
        _grow(child, start, start + w, depth + 1, max_depth, rng)
        node.children.append(child)
        covered += w
    node.ell_R = node.ell_U - covered
    node.diam_H = node.ell_U * rng.uniform(0.6, 1.0)


def random_weight_forest(seed: int = 0, max_depth: int = 3):
    """Random fixture forest over [0,1] with children covering < 70%."""
    rng = np.random.default_rng(seed)
    n_roots = int(rng.integers(1, 4))
    edges = np.linspace(0.0, 1.0, n_roots + 1)
    roots = []
    for i in range(n_roots):
        lo, hi = float(edges[i]), float(edges[i + 1])
        w = (hi - lo) * rng.uniform(0.6, 0.95)
        start = lo + (hi - lo - w) * 0.5
        root = _interval_node(start, start + w, f"r{i}")
        _grow(root, start, start + w, 0, max_depth, rng)
        roots.append(root)
    return roots, SPACE


def chain_fixture(depth: int = 3, shrink: float = 0.4):
    """Single-branch chain for the closed-form product check."""
    nodes = []
    lo, hi = 0.0, 1.0
    for d in range(depth + 1):
        node = _interval_node(lo, hi, f"c{d}")
        node.diam_H = 0.9 * node.ell_U
        nodes.append(node)
        w = (hi - lo) * shrink
        mid = 0.5 * (lo + hi)
        lo, hi = mid - w / 2.0, mid + w / 2.0
    for parent, child in zip(nodes, nodes[1:]):
        parent.children.append(child)
        parent.ell_R = parent.ell_U - child.ell_U
    nodes[-1].ell_R = nodes[-1].ell_U
    return nodes, SPACE


def segment_sample_points(n: int = 100) -> np.ndarray:
    xs = np.linspace(0.0, 1.0, n)
    return np.stack([xs, np.zeros_like(xs)], axis=1)
