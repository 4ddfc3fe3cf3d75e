import numpy as np
import pytest

from curvelab.martingale import (RATIO_BOUNDS, UnresolvedNodeError,
                                 build_weights, chain_product_value,
                                 level_masses, q_hypothesis_scan, s_value,
                                 stacked_weight_trees, verify_bounds,
                                 verify_conservation)
from curvelab.tests_fixtures import (FixtureNode, chain_fixture,
                                     random_weight_forest,
                                     segment_sample_points, _interval_node)

SP = random_weight_forest(0)[1]


def test_s_value_childless():
    node = _interval_node(0.0, 1.0, "n")
    node.diam_H = 0.8
    assert s_value(node) == pytest.approx(101.0)


def test_s_value_with_children():
    node = _interval_node(0.0, 1.0, "n")
    node.ell_R = 0.0
    for i, d in enumerate((0.3, 0.4)):
        ch = _interval_node(0.1 + 0.4 * i, 0.4 + 0.4 * i, f"c{i}")
        ch.diam_H = d
        node.children.append(ch)
    assert s_value(node) == pytest.approx(0.7)


def test_s_value_unresolved():
    node = _interval_node(0.0, 1.0, "n")
    ch = _interval_node(0.2, 0.5, "c")
    ch.diam_H = None
    node.children.append(ch)
    with pytest.raises(UnresolvedNodeError):
        s_value(node)


def test_s_bound_enforced():
    node = _interval_node(0.0, 1.0, "n")
    ch = _interval_node(0.2, 0.5, "c")
    ch.diam_H = 200.0  # impossible fragment; must trip the 101 ell(U) bound
    node.children.append(ch)
    with pytest.raises(AssertionError):
        s_value(node)


def test_childless_root_weight():
    node = _interval_node(0.0, 1.0, "n")
    node.diam_H = 0.7
    tree = build_weights(node)
    assert len(tree.cells) == 1
    assert tree.cells[0].value == pytest.approx(0.7)
    assert tree.total_mass() == pytest.approx(0.7)


def test_single_child_full_cover():
    # child covering everything: the child density equals the root density
    root = _interval_node(0.0, 1.0, "r")
    root.diam_H = 0.9
    child = _interval_node(0.0, 1.0, "c")
    child.diam_H = 0.8
    root.children = [child]
    root.ell_R = 0.0
    tree = build_weights(root)
    leaf = [c for c in tree.cells if c.kind == "leaf"][0]
    assert leaf.value == pytest.approx(root.diam_H / child.ell_U)


def test_conservation_random_forests():
    for seed in range(20):
        roots, _ = random_weight_forest(seed)
        for root in roots:
            tree = build_weights(root)
            rep = verify_conservation(tree)
            assert rep["ok"], rep
            assert rep["masses"][0] == pytest.approx(root.diam_H, abs=1e-14)


def test_conservation_tiny_children_stress():
    root = _interval_node(0.0, 1.0, "r")
    root.diam_H = 1.0
    lo = 0.0
    for i in range(4):
        w = 10.0 ** -(i + 2)
        ch = _interval_node(lo, lo + w, f"c{i}")
        ch.diam_H = w * 0.9
        root.children.append(ch)
        lo += 2 * w
    root.ell_R = 1.0 - sum(ch.ell_U for ch in root.children)
    tree = build_weights(root)
    assert verify_conservation(tree)["ok"]


def test_bounds_random_forests():
    pts = segment_sample_points(200)
    for seed in (1, 5, 9):
        roots, space = random_weight_forest(seed)
        trees = [build_weights(r) for r in roots]
        rep = verify_bounds(trees, 0.999, space, pts)
        assert rep["ok"], rep["violations"][:3]
        assert rep["max_density"] <= 101.0 + 1e-9


def test_stacked_overlap_bound():
    roots, space = random_weight_forest(3)
    trees = stacked_weight_trees(roots)
    pts = segment_sample_points(500)
    q = 0.999
    for x in pts:
        total = sum(t.evaluate(x, space) for t in trees)
        assert total <= 101.0 / (1.0 - q) + 1e-9


def test_chain_product_formula():
    nodes, _ = chain_fixture(3)
    for n in nodes:
        s_value(n)
    tree = build_weights(nodes[0])
    deepest = max(tree.cells, key=lambda c: c.depth)
    assert deepest.node.id == nodes[-1].id
    want = chain_product_value(nodes)
    assert deepest.value == pytest.approx(want, rel=1e-10)
    # independent closed form: mass telescopes through the chain
    mass = nodes[0].diam_H
    for parent, child in zip(nodes, nodes[1:]):
        mass *= child.diam_H / parent.s_Q
    assert deepest.value == pytest.approx(mass / nodes[-1].ell_U, rel=1e-12)


def test_level_masses_flat_profile():
    roots, _ = random_weight_forest(7)
    tree = build_weights(roots[0])
    masses = level_masses(tree)
    assert all(m == pytest.approx(masses[0], abs=1e-13) for m in masses)


def test_scan_childless_large_remainder():
    node = _interval_node(0.0, 1.0, "n")
    node.diam_H = 0.9
    scan = q_hypothesis_scan([node], SP)
    rec = scan["roots"][0]["nodes"][0]
    assert rec["case"] == "large_remainder"
    assert rec["ratio"] < RATIO_BOUNDS["large_remainder"]
    assert rec["pass"]


def test_scan_artificial_equal_remainder():
    node = _interval_node(0.0, 1.0, "n")
    node.diam_H = 1.0  # ell_R = diam_H: ratio = 1/101
    scan = q_hypothesis_scan([node], SP)
    assert scan["max_ratio"] <= 100.0 / 101.0


def test_scan_cases_with_n2_map():
    root = _interval_node(0.0, 1.0, "r")
    root.diam_H = 0.9
    kids = []
    lo = 0.0
    for i in range(3):
        ch = _interval_node(lo, lo + 0.3, f"k{i}")
        ch.diam_H = 0.25
        kids.append(ch)
        lo += 0.33
    root.children = kids
    root.ell_R = 1.0 - 0.9
    # children tile most of the parent: small remainder
    assert root.ell_R <= root.diam_H / 100.0 + 0.1
    scan_all_n2 = q_hypothesis_scan(
        [root], SP, {f"k{i}": "N2_1" for i in range(3)})
    rec = scan_all_n2["roots"][0]["nodes"][0]
    assert rec["case"] in ("few_nonN2", "large_remainder")
    scan_none = q_hypothesis_scan([root], SP, {})
    rec2 = scan_none["roots"][0]["nodes"][0]
    if rec2["case"] == "many_nonN2":
        assert RATIO_BOUNDS["many_nonN2"] == 0.999


def test_scan_forest_summary():
    roots, _ = random_weight_forest(11)
    for r in roots:
        pass
    scan = q_hypothesis_scan(roots, SP)
    assert scan["max_ratio"] <= 0.999
    assert scan["all_pass"]


def test_degenerate_ell_rejected():
    node = FixtureNode("z", _interval_node(0.0, 1.0, "z").ball)
    node.diam_H = 0.5
    node.ell_U = 0.0
    with pytest.raises(UnresolvedNodeError):
        build_weights(node)
