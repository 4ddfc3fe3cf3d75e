"""Norms, lines, duality maps, and 1-Lipschitz projections onto lines.

Everything downstream is parameterized over a finite-dimensional lp space.
All values are immutable after construction and every operation is pure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Shared tolerances.  Tests and implementation use the same constants.
REL_TOL = 1e-9
LINE_TOL = 1e-10


class DimensionMismatchError(ValueError):
    pass


class UnsupportedProjectionError(ValueError):
    """Raised when no norm-1 projection formula is available for the norm."""


@dataclass(frozen=True)
class NormedSpace:
    """R^dim equipped with an lp norm, 1 <= p <= inf."""

    dim: int
    p: float = 2.0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if not (self.p >= 1.0):
            raise ValueError(f"p must be in [1, inf], got {self.p}")

    def _check(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"expected dimension {self.dim}, got {x.shape[-1]}")
        return x

    def norm(self, x) -> float:
        """Norm of a single vector."""
        x = self._check(x)
        return float(self.norms(x[None, :])[0])

    def norms(self, xs) -> np.ndarray:
        """Norms along the last axis of an array of vectors."""
        xs = self._check(xs)
        a = np.abs(xs)
        if self.p == math.inf:
            return a.max(axis=-1)
        if self.p == 1.0:
            return a.sum(axis=-1)
        if self.p == 2.0:
            return np.sqrt((a * a).sum(axis=-1))
        # Rescale to avoid overflow for large p.
        m = a.max(axis=-1, keepdims=True)
        m = np.where(m == 0.0, 1.0, m)
        return (((a / m) ** self.p).sum(axis=-1)) ** (1.0 / self.p) * m[..., 0]

    @property
    def dual_p(self) -> float:
        if self.p == 1.0:
            return math.inf
        if self.p == math.inf:
            return 1.0
        return self.p / (self.p - 1.0)

    def dual_norm(self, g) -> float:
        """Norm of a functional (vector of coefficients) in the dual space."""
        return NormedSpace(self.dim, self.dual_p).norm(g)

    def dist(self, x, y) -> float:
        return self.norm(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))

    def diam(self, points) -> float:
        """Diameter of a finite point set (max pairwise distance)."""
        pts = self._check(np.atleast_2d(np.asarray(points, dtype=float)))
        if len(pts) < 2:
            return 0.0
        diffs = pts[:, None, :] - pts[None, :, :]
        return float(self.norms(diffs).max())

    def to_json(self) -> dict:
        return {"norm": "lp", "p": (self.p if self.p != math.inf else "inf"),
                "dim": self.dim}

    @staticmethod
    def from_json(obj: dict) -> "NormedSpace":
        if obj.get("norm") != "lp":
            raise ValueError(f"unknown norm descriptor {obj!r}")
        p = obj["p"]
        p = math.inf if p in ("inf", "Infinity") else float(p)
        return NormedSpace(int(obj["dim"]), p)


@dataclass(frozen=True)
class Line:
    """Affine line base + t*dir with dir of unit length in the ambient norm."""

    base: np.ndarray
    dir: np.ndarray

    @staticmethod
    def through(a, b, space: NormedSpace) -> "Line":
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        d = b - a
        n = space.norm(d)
        if n == 0.0:
            raise ValueError("cannot build a line through coincident points")
        return Line(a, d / n)

    def point_at(self, t: float) -> np.ndarray:
        return self.base + t * self.dir


def _require_unit_dir(space: NormedSpace, line: Line):
    if abs(space.norm(line.dir) - 1.0) > 1e-7:
        raise ValueError("line direction is not unit in the ambient norm")


def norm_eval(space: NormedSpace, x) -> float:
    """Norm of x under the configured lp norm."""
    return space.norm(x)


def duality_map(space: NormedSpace, x) -> np.ndarray:
    """Normalized duality mapping J(x) for lp with 1 < p < inf.

    Satisfies |J(x)|_* = |x| and <J(x), x> = |x|^2; J(0) = 0.
    """
    p = space.p
    if p <= 1.0 or p == math.inf:
        raise UnsupportedProjectionError(
            "duality map requires 1 < p < inf; for l1 in the plane use "
            "j_projection's s-parameterized family")
    x = np.asarray(x, dtype=float)
    nx = space.norm(x)
    if nx == 0.0:
        return np.zeros(space.dim)
    if p == 2.0:
        return x.copy()
    # y_i = |x_i|^{p-2} x_i, with 0 mapped to 0 even when p < 2.
    a = np.abs(x)
    y = np.zeros_like(x)
    nz = a > 0.0
    y[nz] = a[nz] ** (p - 2.0) * x[nz]
    return nx ** (2.0 - p) * y


@dataclass(frozen=True)
class JProjection:
    """Norm-1 linear projection onto a line, x -> base + <g, x-base> dir."""

    line: Line
    functional: np.ndarray
    s_param: float = 0.0

    def coordinate(self, x):
        """Scalar position of the projection of x along the line."""
        x = np.asarray(x, dtype=float)
        return np.tensordot(x - self.line.base, self.functional, axes=([-1], [0]))

    def __call__(self, x) -> np.ndarray:
        c = self.coordinate(x)
        return self.line.base + np.multiply.outer(c, self.line.dir)


def j_projection(space: NormedSpace, line: Line, s_param: float = 0.0) -> JProjection:
    """Build a J-projection onto ``line``.

    For 1 < p < inf the functional is J(dir) and s_param is ignored.  For l1
    in the plane, axis-parallel lines carry the one-parameter family indexed
    by |s| <= 1/2; other l1 lines use the sign functional (s must be 0).
    l_inf and l1 with dim > 2 are rejected.
    """
    _require_unit_dir(space, line)
    p = space.p
    d = line.dir
    if 1.0 < p < math.inf:
        g = duality_map(space, d)
        return JProjection(line, g, 0.0)
    if p == math.inf or (p == 1.0 and space.dim > 2):
        raise UnsupportedProjectionError(
            f"no J-projection formula for p={p}, dim={space.dim}")
    # l1 in the plane.
    if abs(s_param) > 0.5:
        raise ValueError("s_param must satisfy |s| <= 1/2")
    axis = None
    for i in range(2):
        if abs(abs(d[i]) - 1.0) < 1e-12 and abs(d[1 - i]) < 1e-12:
            axis = i
            break
    if axis is None:
        if s_param != 0.0:
            raise UnsupportedProjectionError(
                "the s-family is only defined for axis-parallel lines in l1^2")
        g = np.sign(d)  # <sign(d), d> = |d|_1 = 1
        return JProjection(line, g, 0.0)
    sgn = math.copysign(1.0, d[axis])
    g = np.zeros(2)
    g[axis] = sgn
    g[1 - axis] = -sgn * s_param / (1.0 - abs(s_param))
    return JProjection(line, g, s_param)


def project(proj: JProjection, x) -> np.ndarray:
    """Apply the projection (1-Lipschitz, idempotent, fixes the line)."""
    return proj(x)


def dist_to_line(space: NormedSpace, x, line: Line) -> float:
    """min_t |x - (base + t dir)|; convex in t, solved by golden section."""
    x = np.asarray(x, dtype=float)
    b = 4.0 * space.norm(x - line.base) + 1.0
    lo, hi = -b, b

    def g(t):
        return space.norm(x - line.base - t * line.dir)

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    gc, gd = g(c), g(d)
    best = min(gc, gd, g(lo), g(hi))
    # 0.618^100 ~ 1e-21: value accuracy far below LINE_TOL relative to b.
    for _ in range(100):
        if gc < gd:
            hi, d, gd = d, c, gc
            c = hi - invphi * (hi - lo)
            gc = g(c)
            best = min(best, gc)
        else:
            lo, c, gc = c, d, gd
            d = lo + invphi * (hi - lo)
            gd = g(d)
            best = min(best, gd)
        if hi - lo <= LINE_TOL * max(1.0, b) * 1e-3:
            break
    return best


def antislope(space: NormedSpace, line: Line, proj: JProjection) -> float:
    """Shadow-length ratio of ``line`` under ``proj``; 0 vertical, 1 parallel."""
    _require_unit_dir(space, line)
    u = line.base
    v = line.base + line.dir
    num = space.norm(proj(u) - proj(v))
    den = space.norm(u - v)
    return float(min(1.0, num / den))
