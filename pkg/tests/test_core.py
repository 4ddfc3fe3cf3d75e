import numpy as np
import pytest

from curvelab.banach import NormedSpace
from curvelab.core import (build_core, build_core_tree, check_scale_gap,
                           outer_shape_factor, paper_skip_depth, remainder,
                           resolve_tree_measures, shape_regime,
                           verify_ball_chain, verify_core_lemma)
from curvelab.curve import Curve
from curvelab.net import Ball, build_nets, make_family

SP = NormedSpace(2, 2.0)


def seg_samples(n=400, length=1.0):
    xs = np.linspace(0.0, length, n)
    return np.stack([xs, np.zeros_like(xs)], axis=1)


def test_isolated_point_core_is_seed():
    h = build_nets(np.array([[0.0, 0.0]]), 0, 12, SP)
    fam = make_family(h, 2.0)
    node = build_core(fam.ball(0, 0), h, J=4, c=0.2)
    # the seed plus one concentric ball per visited level (4, 8, 12)
    assert len(node.members) == 4
    # all members share the same center, so the union equals the seed ball
    assert all(np.allclose(b.center, 0.0) for b in node.members)
    assert max(b.radius for b in node.members) == node.q_star.radius


def test_one_overlapping_finer_ball():
    pts = np.array([[0.0, 0.0], [0.19, 0.0]])
    h = build_nets(pts, 0, 4, SP, non_maximal={1, 2, 3})
    # place the second point only at level 4
    node = build_core(Ball(np.zeros(2), 2.0, level=0, index=0,
                           inflation=2.0), h, J=4, c=0.2)
    levels = {b.level for b in node.members}
    assert 4 in levels
    off_center = [b for b in node.members if not np.allclose(b.center, 0.0)]
    assert len(off_center) == 1
    assert off_center[0].radius == pytest.approx(0.2 * 2.0 ** -4)


def test_core_shape_bound_dense_segment():
    h = build_nets(seg_samples(), 0, 8, SP)
    fam = make_family(h, 2.0)
    node = build_core(fam.ball(0, 0), h, J=4, c=0.2)
    lim = (1.0 + 3.0 / 16.0) * 0.2
    for b in node.members:
        assert SP.norm(b.center - node.q_star.center) + b.radius \
            <= lim + 1e-12


def test_build_core_preconditions():
    h = build_nets(np.array([[0.0, 0.0]]), 0, 4, SP)
    good = Ball(np.zeros(2), 2.0, level=0, index=0, inflation=2.0)
    with pytest.raises(ValueError):
        build_core(good, h, J=3, c=0.2)
    with pytest.raises(ValueError):
        build_core(good, h, J=4, c=0.3)
    with pytest.raises(ValueError):
        build_core(Ball(np.array([5.0, 5.0]), 2.0, level=0, index=0), h)


@pytest.mark.parametrize("J,c", [(4, 0.2), (6, 2.0 ** -12),
                                 (19, 2.0 ** -12)])
def test_core_lemma_random_hierarchies(J, c):
    rng = np.random.default_rng(J * 100)
    for _ in range(8):
        pts = rng.uniform(-1.5, 1.5, size=(rng.integers(10, 60), 2))
        k_max = min(J * 2 + 1, 24)
        h = build_nets(pts, 0, k_max, SP)
        fam = make_family(h, 2.0)
        cores = []
        for lvl in (0, J):
            if lvl > k_max:
                continue
            for i in range(len(h.points(lvl))):
                cores.append(build_core(fam.ball(lvl, i), h, J, c))
        rep = verify_core_lemma(cores, SP)
        assert rep["ok"], rep["violations"][:3]


def test_core_lemma_detects_mixed_config():
    h = build_nets(np.array([[0.0, 0.0]]), 0, 10, SP)
    fam = make_family(h, 2.0)
    a = build_core(fam.ball(0, 0), h, J=4, c=0.2)
    b = build_core(fam.ball(0, 0), h, J=5, c=0.2)
    rep = verify_core_lemma([a, b], SP)
    assert not rep["ok"]


def test_shape_regime_and_factors():
    assert shape_regime(19) == "fifth-decimal"
    assert shape_regime(6) == "coarse"
    assert outer_shape_factor(19) <= 1.00001
    assert paper_skip_depth(240.0) == 108


def test_tree_two_levels_nested():
    h = build_nets(seg_samples(), 0, 8, SP)
    fam = make_family(h, 2.0)
    selected = [(0, 0), (4, 0)]
    roots = build_core_tree(fam, selected, J=4, c=0.2)
    assert len(roots) == 1
    assert len(roots[0].children) == 1
    assert roots[0].children[0].level == 4


def test_tree_disjoint_roots():
    pts = np.array([[0.0, 0.0], [10.0, 0.0]])
    h = build_nets(pts, 0, 4, SP)
    fam = make_family(h, 2.0)
    roots = build_core_tree(fam, [(0, 0), (0, 1)], J=4, c=0.2)
    assert len(roots) == 2
    assert all(not r.children for r in roots)


def test_tree_residue_violation():
    h = build_nets(seg_samples(), 0, 8, SP)
    fam = make_family(h, 2.0)
    with pytest.raises(ValueError):
        build_core_tree(fam, [(0, 0), (3, 0)], J=4, c=0.2)


def test_remainder_cases():
    c = Curve(np.array([[-1.0, 0.0], [1.0, 0.0]]), False, SP)
    h = build_nets(seg_samples(400, 1.0), 0, 8, SP)
    fam = make_family(h, 2.0)
    roots = build_core_tree(fam, [(0, 0)], J=4, c=0.2)
    node = roots[0]
    _, ell_r = remainder(node, c)
    assert ell_r == pytest.approx(node.ell_U)
    # synthetic child covering the middle third of the parent span
    class Child:
        pass
    span = node.ell_U
    # parent region meets the x-axis in an interval centered at 0
    child = build_core(Ball(np.zeros(2), 2.0 * 2 ** -4, level=4, index=0,
                            inflation=2.0), h, J=4, c=0.2)
    node.children = [child]
    _, ell_r2 = remainder(node, c)
    assert ell_r2 == pytest.approx(node.ell_U - child.ell_U, abs=1e-10)
    assert 0.0 < ell_r2 < span


def test_remainder_region_membership():
    c = Curve(np.array([[-1.0, 0.0], [1.0, 0.0]]), False, SP)
    h = build_nets(seg_samples(), 0, 8, SP)
    fam = make_family(h, 2.0)
    roots = build_core_tree(fam, [(0, 0), (4, 0)], J=4, c=0.2)
    node = roots[0]
    cell, _ = remainder(node, c)
    child = node.children[0]
    inside_child = child.q_star.center + np.array([child.q_star.radius / 2,
                                                   0.0])
    assert not cell.contains(inside_child, SP)
    edge = node.q_star.center + np.array([0.19, 0.0])
    assert cell.contains(edge, SP) == (not child.region.contains(edge, SP))


# ------------------------------------------------------------ ball chains

def test_chain_single_ball():
    rep = verify_ball_chain([Ball(np.zeros(2), 1.0)], [0], 16.0, 1.0, SP)
    assert rep["hypotheses_ok"] and rep["containment_ok"]


def test_chain_two_balls():
    balls = [Ball(np.zeros(2), 1.0), Ball(np.array([0.9, 0.0]), 1.0 / 16.0)]
    rep = verify_ball_chain(balls, [0, 1], 16.0, 1.0, SP)
    assert rep["hypotheses_ok"] and rep["containment_ok"]
    assert rep["bound_radius"] == pytest.approx(1.0 + 3.0 / 16.0)


def test_chain_violations_reported():
    # broken chain: second ball disjoint from the first
    balls = [Ball(np.zeros(2), 1.0), Ball(np.array([9.0, 0.0]), 0.05)]
    rep = verify_ball_chain(balls, [0, 1], 16.0, 1.0, SP)
    assert rep["violated"] == "chain"
    # decay violated
    balls = [Ball(np.zeros(2), 1.0), Ball(np.array([0.9, 0.0]), 0.5)]
    rep = verify_ball_chain(balls, [0, 1], 16.0, 1.0, SP)
    assert rep["violated"] == "decay"
    # same-level separation violated
    r1 = 1.0 / 16.0
    balls = [Ball(np.zeros(2), 1.0),
             Ball(np.array([0.9, 0.0]), r1),
             Ball(np.array([0.95, 0.0]), r1)]
    rep = verify_ball_chain(balls, [0, 1, 1], 16.0, 1.0, SP)
    assert rep["violated"] == "separation"
    with pytest.raises(ValueError):
        verify_ball_chain(balls, [0, 1, 1], 4.0, 1.0, SP)


def random_valid_chain(rng, xi):
    """Random hypothesis-satisfying chain grown ball by ball."""
    balls = [Ball(np.zeros(2), 1.0)]
    levels = [0]
    for _ in range(int(rng.integers(2, 10))):
        k = int(rng.integers(1, 4))
        r = xi ** -k * 1.0
        for _ in range(50):
            base = balls[int(rng.integers(len(balls)))]
            ang = rng.uniform(0, 2 * np.pi)
            d = rng.uniform(0.0, base.radius + r * 0.9)
            center = base.center + d * np.array([np.cos(ang), np.sin(ang)])
            cand = Ball(center, r)
            ok = True
            for b, lb in zip(balls, levels):
                if lb == k:
                    gap = SP.norm(b.center - center) - b.radius - r
                    if gap < 3.0 * xi ** -k:
                        ok = False
                        break
            if ok:
                balls.append(cand)
                levels.append(k)
                break
    return balls, levels


@pytest.mark.parametrize("xi", [8.0, 16.0, 64.0])
def test_chain_random_valid(xi):
    rng = np.random.default_rng(int(xi))
    for _ in range(20):
        balls, levels = random_valid_chain(rng, xi)
        rep = verify_ball_chain(balls, levels, xi, 1.0, SP)
        assert rep["hypotheses_ok"], rep
        assert rep["containment_ok"], rep


def test_scale_gap_check():
    q_star = Ball(np.zeros(2), 1.0)
    deep = Ball(np.array([0.9, 0.0]), 1e-4)
    assert check_scale_gap(q_star, deep, 1.0, SP)
    shallow = Ball(np.array([0.9, 0.0]), 0.3)
    assert not check_scale_gap(q_star, shallow, 1.0, SP)
