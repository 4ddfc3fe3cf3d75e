"""Deterministic polyline generators used by experiments and tests."""
from __future__ import annotations

import math

import numpy as np

from .banach import NormedSpace
from .curve import Curve


def _rot(angle_deg: float) -> np.ndarray:
    a = math.radians(angle_deg)
    return np.array([[math.cos(a), -math.sin(a)],
                     [math.sin(a), math.cos(a)]])


def segment(length: float = 1.0) -> np.ndarray:
    return np.array([[0.0, 0.0], [float(length), 0.0]])


def zigzag(n: int = 4, amplitude: float = 0.25,
           length: float = 1.0) -> np.ndarray:
    xs = np.linspace(0.0, length, n + 1)
    ys = np.array([0.0 if i % 2 == 0 else amplitude for i in range(n + 1)])
    return np.stack([xs, ys], axis=1)


def koch(depth: int = 3, angle: float = 60.0) -> np.ndarray:
    """Quadruple-substitution fractal arc from (0,0) to (1,0).

    At 60 degrees every leg has length 1/3 of its parent, so the total
    length is (4/3)^depth.
    """
    pts = [np.array([0.0, 0.0]), np.array([1.0, 0.0])]
    rot = _rot(angle)
    for _ in range(depth):
        nxt = [pts[0]]
        for a, b in zip(pts, pts[1:]):
            third = (b - a) / 3.0
            p1 = a + third
            p2 = a + 2.0 * third
            apex = p1 + rot @ third
            nxt.extend([p1, apex, p2, b])
        pts = nxt
    return np.asarray(pts)


def circle(n: int = 64, radius: float = 1.0) -> np.ndarray:
    t = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    return radius * np.stack([np.cos(t), np.sin(t)], axis=1)


def spiral(turns: float = 2.0, n: int = 128) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n + 1)
    a = 2.0 * math.pi * turns * t
    r = 0.1 + t
    return np.stack([r * np.cos(a), r * np.sin(a)], axis=1)


def plus_sign() -> np.ndarray:
    """Two perpendicular strokes through the origin traversed as one path.

    The path leaves the neighborhood of the crossing between the horizontal
    and vertical visits, so small windows at the origin see two arcs.
    """
    return np.array([[-3.0, 0.0], [3.0, 0.0], [3.0, -3.0],
                     [0.0, -3.0], [0.0, 3.0]])


def radial_spoke(delta: float = 0.01) -> np.ndarray:
    """Hairpin terminating at the origin: fragments there are radial."""
    return np.array([[-2.0, 0.0], [0.0, 0.0], [-2.0, float(delta)]])


def t_junction(delta: float = 0.005) -> np.ndarray:
    """Horizontal bar with a vertical stroke rising near its middle."""
    d = float(delta)
    return np.array([[-2.0, 0.0], [2.0, 0.0], [2.0, d],
                     [d, d], [d, 2.0]])


def random_walk(n: int = 32, seed: int = 0, step: float = 0.3) -> np.ndarray:
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, 2.0 * math.pi, size=n)
    steps = step * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    pts = np.vstack([[0.0, 0.0], np.cumsum(steps, axis=0)])
    return pts


GENERATORS = {
    "segment": segment,
    "zigzag": zigzag,
    "koch": koch,
    "circle": circle,
    "spiral": spiral,
    "plus_sign": plus_sign,
    "radial_spoke": radial_spoke,
    "t_junction": t_junction,
    "random_walk": random_walk,
}

CLOSED = {"circle"}


def generate(name: str, params: dict | None = None,
             space: NormedSpace | None = None) -> Curve:
    if name not in GENERATORS:
        raise ValueError(f"unknown generator {name!r}; "
                         f"choose from {sorted(GENERATORS)}")
    params = dict(params or {})
    verts = GENERATORS[name](**params)
    return Curve(verts, name in CLOSED, space or NormedSpace(2, 2.0))
