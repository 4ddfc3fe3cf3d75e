"""Nested 2^-k separated nets and multiresolution ball families."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .banach import NormedSpace


class EmptySampleError(ValueError):
    pass


@dataclass(frozen=True)
class Ball:
    """Closed ball.  Family balls carry (level, index) identity.

    The radius of a family ball is inflation * 2^-level, exact in binary
    floating point whenever the inflation factor is.
    """

    center: np.ndarray
    radius: float
    level: int | None = None
    index: int | None = None
    inflation: float | None = None

    @property
    def id(self):
        return (self.level, self.index)

    def scaled(self, factor: float) -> "Ball":
        """Concentric ball with radius multiplied by ``factor``."""
        return Ball(self.center, self.radius * factor, self.level, self.index,
                    None)

    def contains(self, x, space: NormedSpace, tol: float = 0.0) -> bool:
        return space.norm(np.asarray(x, dtype=float) - self.center) \
            <= self.radius + tol

    @property
    def diam(self) -> float:
        return 2.0 * self.radius


@dataclass
class Region:
    """Finite union of closed balls."""

    balls: list[Ball]

    def contains(self, x, space: NormedSpace, tol: float = 0.0) -> bool:
        return any(b.contains(x, space, tol) for b in self.balls)

    def min_dist(self, x, space: NormedSpace) -> float:
        """Distance from x to the union (0 inside)."""
        x = np.asarray(x, dtype=float)
        return max(0.0, min(space.norm(x - b.center) - b.radius
                            for b in self.balls))

    def gap_to(self, other: "Region", space: NormedSpace) -> float:
        g = min(space.norm(a.center - b.center) - a.radius - b.radius
                for a in self.balls for b in other.balls)
        return max(0.0, g)

    def intersects(self, other: "Region", space: NormedSpace,
                   tol: float = 0.0) -> bool:
        return any(space.norm(a.center - b.center) <= a.radius + b.radius + tol
                   for a in self.balls for b in other.balls)


@dataclass
class NetHierarchy:
    """Nested 2^-k separated nets X_k over a point sample.

    Levels flagged non-maximal belong to a partial family: separation and
    nesting still hold but coverage of the sample is not required.
    """

    space: NormedSpace
    k_min: int
    k_max: int
    levels: dict[int, np.ndarray]
    non_maximal: set[int] = field(default_factory=set)

    def points(self, k: int) -> np.ndarray:
        return self.levels[k]

    def to_json(self, inflation: float | None = None) -> dict:
        out = {"space": self.space.to_json(),
               "levels": [{"k": k, "points": self.levels[k].tolist()}
                          for k in range(self.k_min, self.k_max + 1)]}
        if inflation is not None:
            out["inflation"] = inflation
        return out


@dataclass
class MultiresFamily:
    hierarchy: NetHierarchy
    inflation: float
    balls: list[Ball]

    @property
    def space(self) -> NormedSpace:
        return self.hierarchy.space

    def ball(self, level: int, index: int) -> Ball:
        for b in self.balls:
            if b.level == level and b.index == index:
                return b
        raise KeyError((level, index))


def build_nets(samples, k_min: int, k_max: int, space: NormedSpace,
               non_maximal: set[int] | None = None) -> NetHierarchy:
    """Greedy coarse-to-fine net construction over samples in input order.

    X_{k_min} is built greedily over the samples; X_{k+1} is seeded with X_k
    and extended greedily.  This guarantees separation, maximality (for
    unflagged levels), and nesting.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if len(samples) == 0:
        raise EmptySampleError("samples must be nonempty")
    if k_min > k_max:
        raise ValueError("k_min must be <= k_max")
    non_maximal = set(non_maximal or ())
    levels: dict[int, np.ndarray] = {}
    prev: list[np.ndarray] = []
    for k in range(k_min, k_max + 1):
        sep = 2.0 ** (-k)
        net = list(prev)
        if k not in non_maximal:
            for s in samples:
                if not net:
                    net.append(s)
                    continue
                d = space.norms(np.asarray(net) - s)
                if d.min() >= sep:
                    net.append(s)
        elif not net:
            net.append(samples[0])
        levels[k] = np.asarray(net)
        prev = net
    return NetHierarchy(space, k_min, k_max, levels, non_maximal)


def make_family(h: NetHierarchy, inflation: float) -> MultiresFamily:
    """Inflate every net point into a ball of radius inflation * 2^-k."""
    if not inflation > 1.0:
        raise ValueError("inflation factor must exceed 1")
    balls = []
    for k in range(h.k_min, h.k_max + 1):
        r = inflation * 2.0 ** (-k)
        for i, x in enumerate(h.levels[k]):
            balls.append(Ball(x, r, level=k, index=i, inflation=inflation))
    return MultiresFamily(h, inflation, balls)


def net_ball(q: Ball) -> Ball:
    """The concentric ball of radius (1/3) 2^-level used near the center."""
    if q.level is None:
        raise ValueError("net_ball requires a family ball with a level")
    return Ball(q.center, (1.0 / 3.0) * 2.0 ** (-q.level), q.level, q.index,
                None)


def check_hierarchy(h: NetHierarchy, samples=None) -> list[str]:
    """Return a list of invariant violations (empty when all hold)."""
    bad = []
    space = h.space
    for k in range(h.k_min, h.k_max + 1):
        pts = h.levels[k]
        sep = 2.0 ** (-k)
        n = len(pts)
        if n > 1:
            diffs = space.norms(pts[:, None, :] - pts[None, :, :])
            np.fill_diagonal(diffs, np.inf)
            if diffs.min() < sep:
                bad.append(f"separation violated at level {k}")
        if samples is not None and k not in h.non_maximal:
            smp = np.atleast_2d(np.asarray(samples, dtype=float))
            d = space.norms(smp[:, None, :] - pts[None, :, :]).min(axis=1)
            if d.max() > sep:
                bad.append(f"maximality violated at level {k}")
        if k > h.k_min:
            coarse = h.levels[k - 1]
            fine = pts
            for x in coarse:
                if space.norms(fine - x).min() > 0.0:
                    bad.append(f"nesting violated between {k-1} and {k}")
                    break
    return bad


def family_to_csv(family: MultiresFamily) -> str:
    """Ball table: id,level,cx,...,radius."""
    dim = family.space.dim
    header = "level,index," + ",".join(f"c{i}" for i in range(dim)) + ",radius"
    rows = [header]
    for b in family.balls:
        coords = ",".join(repr(float(c)) for c in b.center)
        rows.append(f"{b.level},{b.index},{coords},{b.radius!r}")
    return "\n".join(rows) + "\n"


def family_to_json(family: MultiresFamily) -> str:
    return json.dumps(family.hierarchy.to_json(family.inflation), indent=2)
