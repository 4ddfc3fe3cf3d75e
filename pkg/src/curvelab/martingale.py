"""Recursive mass-splitting weights over a core tree.

Starting from a uniform density carrying total mass diam H on the root
region, each node passes its incoming mass to its remainder (density factor
101/s) and to its children (proportional to their fragment diameters),
freezing remainders and leaves.  The finite tree makes the limit weight a
finite list of (cell, value) pairs, so integrals are exact sums.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .banach import NormedSpace
from .core import RemainderCell

MASS_FACTOR = 101.0


class UnresolvedNodeError(ValueError):
    pass


def s_value(node) -> float:
    """s_Q = 101 * length(remainder) + sum of child fragment diameters."""
    if node.ell_R is None or node.ell_U is None:
        raise UnresolvedNodeError(f"node {node.id}: measures unresolved")
    for ch in node.children:
        if ch.diam_H is None:
            raise UnresolvedNodeError(f"child {ch.id}: diam_H unresolved")
    s = MASS_FACTOR * node.ell_R + sum(ch.diam_H for ch in node.children)
    if s > MASS_FACTOR * node.ell_U * (1.0 + 1e-12) + 1e-15:
        raise AssertionError(
            f"node {node.id}: s_Q = {s} exceeds 101 * ell(U) = "
            f"{MASS_FACTOR * node.ell_U}")
    node.s_Q = s
    return s


@dataclass
class Cell:
    region: object          # Region or RemainderCell
    value: float            # frozen density
    depth: int
    node: object
    kind: str               # "remainder" or "leaf"
    measure: float          # curve length of the cell


@dataclass
class WeightTree:
    root: object
    cells: list = field(default_factory=list)
    node_masses: dict = field(default_factory=dict)   # id -> incoming mass
    node_depths: dict = field(default_factory=dict)

    def evaluate(self, x, space: NormedSpace, tol: float = 1e-12) -> float:
        """Limit weight at x: the value of the deepest cell containing x."""
        best = None
        for cell in self.cells:
            if cell.region.contains(x, space, tol):
                if best is None or cell.depth > best.depth:
                    best = cell
        return 0.0 if best is None else best.value

    def total_mass(self) -> float:
        return sum(c.value * c.measure for c in self.cells)


def build_weights(root) -> WeightTree:
    """Run the mass recursion to its finite limit."""
    if root.diam_H is None:
        raise UnresolvedNodeError(f"root {root.id}: diam_H unresolved")
    tree = WeightTree(root)

    def walk(node, mass, depth):
        if node.ell_U is None or node.ell_U <= 0.0:
            raise UnresolvedNodeError(
                f"node {node.id}: ell(U) not positive; curve misses the core")
        tree.node_masses[node.id] = mass
        tree.node_depths[node.id] = depth
        if not node.children:
            tree.cells.append(Cell(node.region, mass / node.ell_U, depth,
                                   node, "leaf", node.ell_U))
            return
        s = s_value(node)
        if s <= 0.0:
            # no remainder length and no child fragments: mass has nowhere
            # to go, freeze on the whole region
            tree.cells.append(Cell(node.region, mass / node.ell_U, depth,
                                   node, "leaf", node.ell_U))
            return
        tree.cells.append(Cell(RemainderCell(node),
                               MASS_FACTOR * mass / s, depth, node,
                               "remainder", node.ell_R))
        for ch in node.children:
            walk(ch, mass * ch.diam_H / s, depth + 1)

    walk(root, root.diam_H, 0)
    return tree


def level_masses(tree: WeightTree) -> list:
    """Total mass of Y_k for each k up to the tree depth."""
    depth = max(tree.node_depths.values())
    out = []
    for k in range(depth + 2):
        # frozen cells from shallower splits, plus the mass still riding on
        # the active depth-k nodes
        total = sum(c.value * c.measure for c in tree.cells if c.depth < k)
        total += sum(m for node_id, m in tree.node_masses.items()
                     if tree.node_depths[node_id] == k)
        out.append(total)
    return out


def verify_conservation(tree: WeightTree) -> dict:
    """Mass of Y_k must be independent of k, and equal diam H at k = 0."""
    masses = level_masses(tree)
    base = tree.root.diam_H
    drift = max(abs(m - base) for m in masses)
    return {"base_mass": base, "masses": masses, "max_drift": drift,
            "ok": drift <= 1e-12 * max(1.0, base)}


def node_density(tree: WeightTree, node) -> float:
    """Active density of Y on the node's region before its own split."""
    return tree.node_masses[node.id] / node.ell_U


def verify_bounds(trees: list, q: float, space: NormedSpace,
                  sample_points=None) -> dict:
    """Uniform bound, geometric decay, mass identity, and stacked overlap."""
    report = {"violations": [], "max_density": 0.0, "max_stacked": 0.0}
    for tree in trees:
        for node_id, m in tree.node_masses.items():
            node = _find_node(tree.root, node_id)
            d = m / node.ell_U
            report["max_density"] = max(report["max_density"], d)
            if d > MASS_FACTOR + 1e-9:
                report["violations"].append(
                    f"active density {d} > 101 at node {node_id}")
        for cell in tree.cells:
            report["max_density"] = max(report["max_density"], cell.value)
            if cell.value > MASS_FACTOR + 1e-9:
                report["violations"].append(
                    f"frozen density {cell.value} > 101 at {cell.node.id}")
            if cell.value > MASS_FACTOR * q ** cell.depth + 1e-9:
                report["violations"].append(
                    f"cell at depth {cell.depth} exceeds 101 q^k: "
                    f"{cell.value}")
        mass = tree.total_mass()
        if abs(mass - tree.root.diam_H) > 1e-10 * max(1.0, tree.root.diam_H):
            report["violations"].append(
                f"tree {tree.root.id}: mass {mass} != diam H "
                f"{tree.root.diam_H}")
    if sample_points is not None:
        bound = MASS_FACTOR / (1.0 - q)
        for x in sample_points:
            total = sum(t.evaluate(x, space) for t in trees)
            report["max_stacked"] = max(report["max_stacked"], total)
            if total > bound + 1e-9:
                report["violations"].append(
                    f"stacked weight {total} > {bound} at {x}")
    report["ok"] = not report["violations"]
    return report


def _find_node(root, node_id):
    if root.id == node_id:
        return root
    for ch in root.children:
        found = _find_node(ch, node_id)
        if found is not None:
            return found
    return None


def stacked_weight_trees(roots: list) -> list:
    """One weight tree per node of the forest (each node as its own root)."""
    trees = []

    def walk(n):
        trees.append(build_weights(n))
        for ch in n.children:
            walk(ch)
    for r in roots:
        walk(r)
    return trees


def chain_product_value(chain: list) -> float:
    """Closed-form deepest-leaf density on a single-branch chain.

    chain lists the nodes root-first.  The deepest cell's value is the leaf
    density diam H_leaf-free form: (mass reaching the leaf) / ell(U_leaf),
    with mass = diam H_root * prod over internal nodes of
    (diam H_child / s_node).
    """
    mass = chain[0].diam_H
    for parent, child in zip(chain, chain[1:]):
        mass *= child.diam_H / parent.s_Q
    return mass / chain[-1].ell_U


# ------------------------------------------------------------- case scan

RATIO_BOUNDS = {"large_remainder": 100.0 / 101.0,
                "many_nonN2": 0.999,
                "few_nonN2": 0.9963}
Q_DEFAULT = 0.999


def _region_diam(node, space: NormedSpace) -> float:
    balls = node.members
    best = 0.0
    for i, a in enumerate(balls):
        for b in balls[i:]:
            best = max(best, space.norm(a.center - b.center)
                       + a.radius + b.radius)
    return best


def q_hypothesis_scan(roots: list, space: NormedSpace,
                      n2_map: dict | None = None) -> dict:
    """Per-node contraction ratio with its case tag and bound check.

    n2_map maps child node ids to their tall/wide classification string;
    children without an entry count as non-N2.
    """
    n2_map = n2_map or {}

    def _jsonable(node_id):
        return list(node_id) if isinstance(node_id, tuple) else node_id

    reports = []
    for root in roots:
        nodes = []

        def walk(node):
            s = s_value(node)
            ratio = node.diam_H / s if s > 0.0 else 0.0
            if node.ell_R > node.diam_H / 100.0:
                case = "large_remainder"
            else:
                non_n2 = sum(_region_diam(ch, space) for ch in node.children
                             if not str(n2_map.get(ch.id, "")).
                             startswith("N2"))
                if non_n2 > 0.05 * node.diam_H:
                    case = "many_nonN2"
                else:
                    case = "few_nonN2"
            nodes.append({"id": _jsonable(node.id), "ratio": ratio,
                          "case": case,
                          "pass": ratio <= RATIO_BOUNDS[case] + 1e-12})
            for ch in node.children:
                walk(ch)

        walk(root)
        reports.append({"root": _jsonable(root.id),
                        "max_ratio": max(n["ratio"] for n in nodes),
                        "nodes": nodes})
    return {"roots": reports,
            "max_ratio": max((r["max_ratio"] for r in reports), default=0.0),
            "all_pass": all(n["pass"] for r in reports for n in r["nodes"])}


def scan_to_json(scan: dict) -> str:
    return json.dumps(scan["roots"], indent=2)
