"""Polyline curves and the arc machinery built on them.

A curve is a constant-speed parameterization f:[0,1] -> R^d of a polyline.
Because the distance from a moving point on a segment to any fixed center is
convex in the parameter, every intersection with a ball is a single
subinterval per segment, found exactly (to parameter tolerance) by convex
bisection.  All higher operations (arc decomposition, flatness
classification, fragments, efficient subarcs, cylinder tests) reduce to that
primitive plus finite knot inspection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .banach import JProjection, Line, NormedSpace, j_projection
from .beta import ABS_TOL, BetaResult, arc_beta, beta_number
from .net import Ball, Region, net_ball

PARAM_TOL = 1e-12
FLAT_TOL = 1e-12


class FragmentError(ValueError):
    """No fragment qualifies: the window was not a valid special ball."""


class FragmentBoundsError(AssertionError):
    """The selected fragment violates the two-sided diameter bounds."""


class FlatnessError(ValueError):
    """Efficient-subarc construction failed its flatness hypothesis."""


@dataclass
class Curve:
    vertices: np.ndarray
    closed: bool
    space: NormedSpace
    _chain: np.ndarray = field(init=False, repr=False)
    _params: np.ndarray = field(init=False, repr=False)
    length: float = field(init=False)

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if len(v) < 2:
            raise ValueError("curve needs at least 2 vertices")
        chain = np.vstack([v, v[:1]]) if self.closed else v
        seg = self.space.norms(chain[1:] - chain[:-1])
        if np.any(seg == 0.0):
            raise ValueError("consecutive vertices must be distinct")
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        self.vertices = v
        self._chain = chain
        self.length = float(cum[-1])
        self._params = cum / self.length

    @property
    def n_segments(self) -> int:
        return len(self._chain) - 1

    def point_at(self, t: float) -> np.ndarray:
        t = min(1.0, max(0.0, float(t)))
        i = int(np.searchsorted(self._params, t, side="right")) - 1
        i = min(i, self.n_segments - 1)
        t0, t1 = self._params[i], self._params[i + 1]
        s = (t - t0) / (t1 - t0)
        return self._chain[i] + s * (self._chain[i + 1] - self._chain[i])

    def segments_overlapping(self, a: float, b: float):
        """Yield (segment index, local lo, local hi) covering [a, b]."""
        for i in range(self.n_segments):
            t0, t1 = self._params[i], self._params[i + 1]
            lo = max(a, t0)
            hi = min(b, t1)
            if hi > lo or (hi == lo and a == b):
                yield i, (lo - t0) / (t1 - t0), (hi - t0) / (t1 - t0)

    def arc_points(self, a: float, b: float) -> np.ndarray:
        """Knots of f([a,b]): endpoints plus interior chain vertices.

        For a polyline the sup of any convex function over the arc is
        attained at one of these, so they determine diameters and betas.
        """
        pts = [self.point_at(a)]
        for i in range(1, self.n_segments + 1):
            t = self._params[i]
            if a < t < b:
                pts.append(self._chain[i])
        pts.append(self.point_at(b))
        return np.asarray(pts)

    def is_injective(self) -> bool | None:
        """Self-intersection check (Euclidean, planar only; None elsewhere)."""
        if self.space.dim != 2:
            return None
        ch = self._chain
        n = self.n_segments
        for i in range(n):
            for j in range(i + 2, n):
                if self.closed and i == 0 and j == n - 1:
                    continue
                if _segments_cross(ch[i], ch[i + 1], ch[j], ch[j + 1]):
                    return False
        return True

    def to_json(self) -> dict:
        return {"space": self.space.to_json(), "closed": self.closed,
                "vertices": self.vertices.tolist()}

    @staticmethod
    def from_json(obj: dict) -> "Curve":
        return Curve(np.asarray(obj["vertices"], dtype=float),
                     bool(obj.get("closed", False)),
                     NormedSpace.from_json(obj["space"]))


def _segments_cross(p, q, r, s) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return 0.0 if abs(v) < 1e-15 else math.copysign(1.0, v)

    o1, o2 = orient(p, q, r), orient(p, q, s)
    o3, o4 = orient(r, s, p), orient(r, s, q)
    return o1 != o2 and o3 != o4 and 0.0 not in (o1, o2, o3, o4)


def curve_length(c: Curve) -> float:
    return c.length


# ---------------------------------------------------------------- intervals

def _seg_dist(c: Curve, i: int, center: np.ndarray):
    p0 = c._chain[i]
    w = c._chain[i + 1] - p0
    v = p0 - center

    def g(t):
        return c.space.norm(v + t * w)

    return g, v, w


def _seg_min(c: Curve, i: int, center, lo: float, hi: float):
    """Min distance to center over a clipped segment (convex golden search)."""
    g, v, w = _seg_dist(c, i, center)
    if c.space.p == 2.0:
        ww = float(w @ w)
        t = -float(v @ w) / ww if ww > 0 else lo
        t = min(hi, max(lo, t))
        return g(t)
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x = b - invphi * (b - a)
    y = a + invphi * (b - a)
    gx, gy = g(x), g(y)
    for _ in range(60):
        if gx < gy:
            b, y, gy = y, x, gx
            x = b - invphi * (b - a)
            gx = g(x)
        else:
            a, x, gx = x, y, gy
            y = a + invphi * (b - a)
            gy = g(y)
    return min(gx, gy, g(lo), g(hi))


def _seg_ball_interval(c: Curve, i: int, ball: Ball):
    """Local-parameter interval of segment i inside the closed ball, or None.

    Bisection endpoints are rounded inward so returned knots satisfy the
    closed-ball inequality.
    """
    g, v, w = _seg_dist(c, i, ball.center)
    r = ball.radius
    if c.space.p == 2.0:
        aa = float(w @ w)
        bb = 2.0 * float(v @ w)
        cc = float(v @ v) - r * r
        disc = bb * bb - 4.0 * aa * cc
        if disc < 0.0:
            tm = min(1.0, max(0.0, -bb / (2.0 * aa)))
            return (tm, tm) if g(tm) <= r else None
        sq = math.sqrt(disc)
        ta = (-bb - sq) / (2.0 * aa)
        tb = (-bb + sq) / (2.0 * aa)
        ta, tb = max(0.0, ta), min(1.0, tb)
        if tb < ta:
            return None
        # nudge roots inward until the closed inequality holds
        ta = _inward(g, r, ta, tb)
        tb = _inward(g, r, tb, ta)
        return (ta, tb) if tb >= ta else None
    g0, g1 = g(0.0), g(1.0)
    # golden search for the minimizer of the convex profile
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = 0.0, 1.0
    x = b - invphi * (b - a)
    y = a + invphi * (b - a)
    gx, gy = g(x), g(y)
    for _ in range(80):
        if gx < gy:
            b, y, gy = y, x, gx
            x = b - invphi * (b - a)
            gx = g(x)
        else:
            a, x, gx = x, y, gy
            y = a + invphi * (b - a)
            gy = g(y)
    tm = x if gx < gy else y
    gm = min(gx, gy)
    if min(gm, g0, g1) > r:
        return None
    ta = 0.0 if g0 <= r else _bisect_boundary(g, r, tm, 0.0)
    tb = 1.0 if g1 <= r else _bisect_boundary(g, r, tm, 1.0)
    return (ta, tb)


def _inward(g, r, t, toward, steps: int = 60):
    if g(t) <= r:
        return t
    lo, hi = t, toward  # hi side satisfies the inequality
    for _ in range(steps):
        m = 0.5 * (lo + hi)
        if g(m) <= r:
            hi = m
        else:
            lo = m
        if abs(hi - lo) < PARAM_TOL:
            break
    return hi


def _bisect_boundary(g, r, inside: float, outside: float):
    """Boundary crossing between an inside and an outside parameter.

    Returns the inside endpoint of the final bracket so the result satisfies
    g(t) <= r.
    """
    lo, hi = inside, outside
    for _ in range(60):
        m = 0.5 * (lo + hi)
        if g(m) <= r:
            lo = m
        else:
            hi = m
        if abs(hi - lo) < PARAM_TOL:
            break
    return lo


def _merge(intervals, eps: float = PARAM_TOL):
    if not intervals:
        return []
    intervals = sorted(intervals)
    out = [list(intervals[0])]
    for a, b in intervals[1:]:
        if a <= out[-1][1] + eps:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return [(a, b) for a, b in out]


def _ball_intervals_l2(c: Curve, ball: Ball):
    """Vectorized quadratic solve across all segments at once (p = 2)."""
    p0 = c._chain[:-1]
    w = c._chain[1:] - p0
    v = p0 - ball.center
    aa = np.einsum("ij,ij->i", w, w)
    bb = 2.0 * np.einsum("ij,ij->i", v, w)
    cc = np.einsum("ij,ij->i", v, v) - ball.radius ** 2
    disc = bb * bb - 4.0 * aa * cc
    hit = disc >= 0.0
    raw = []
    if not np.any(hit):
        return raw
    sq = np.sqrt(disc[hit])
    ta = np.clip((-bb[hit] - sq) / (2.0 * aa[hit]), 0.0, 1.0)
    tb = np.clip((-bb[hit] + sq) / (2.0 * aa[hit]), 0.0, 1.0)
    idx = np.nonzero(hit)[0]
    t0 = c._params[idx]
    t1 = c._params[idx + 1]
    ok = tb >= ta
    # reject clipped-away intersections (root interval outside [0,1])
    mid = 0.5 * (ta + tb)
    val = aa[hit] * mid * mid + bb[hit] * mid + cc[hit]
    ok &= val <= 1e-9 * max(1.0, ball.radius ** 2)
    for j in np.nonzero(ok)[0]:
        raw.append((t0[j] + ta[j] * (t1[j] - t0[j]),
                    t0[j] + tb[j] * (t1[j] - t0[j])))
    return raw


def ball_intervals(c: Curve, ball: Ball):
    """Merged global-parameter intervals of f^{-1}(ball)."""
    if c.space.p == 2.0:
        return _merge(_ball_intervals_l2(c, ball))
    raw = []
    for i in range(c.n_segments):
        t0, t1 = c._params[i], c._params[i + 1]
        iv = _seg_ball_interval(c, i, ball)
        if iv is not None:
            raw.append((t0 + iv[0] * (t1 - t0), t0 + iv[1] * (t1 - t0)))
    return _merge(raw)


def region_intervals(c: Curve, region) -> list:
    balls = region.balls if isinstance(region, Region) else [region]
    raw = []
    for b in balls:
        raw.extend(ball_intervals(c, b))
    return _merge(raw)


def restricted_measure(c: Curve, region) -> float:
    """Length of the curve inside a finite union of balls."""
    return c.length * sum(b - a for a, b in region_intervals(c, region))


def min_dist_interval(c: Curve, a: float, b: float, center) -> float:
    """Min distance from f([a,b]) to a fixed point."""
    center = np.asarray(center, dtype=float)
    best = math.inf
    for i, lo, hi in c.segments_overlapping(a, b):
        best = min(best, _seg_min(c, i, center, lo, hi))
    if not math.isfinite(best):
        best = min(c.space.norm(c.point_at(a) - center),
                   c.space.norm(c.point_at(b) - center))
    return best


def window_points(c: Curve, ball: Ball) -> np.ndarray:
    """Knots of the clipped polyline inside the closed ball.

    Entry/exit points plus interior vertices; exact representatives for any
    convex-functional sup over the intersection.
    """
    pts = []
    for a, b in ball_intervals(c, ball):
        pts.extend(c.arc_points(a, b))
    if not pts:
        return np.empty((0, c.space.dim))
    return np.asarray(pts)


# ----------------------------------------------------------------- arcs

@dataclass(frozen=True)
class ArcRef:
    a: float
    b: float
    diam: float

    @property
    def interval(self):
        return (self.a, self.b)


def _make_arc(c: Curve, a: float, b: float) -> ArcRef:
    return ArcRef(a, b, c.space.diam(c.arc_points(a, b)))


ALLOWED_LAMBDAS = (1.0, 5.0)


def lambda_arcs(c: Curve, q: Ball, lam: float = 1.0,
                unsafe_lambda: bool = False) -> list:
    """Arcs inside 2*lam*Q whose image touches lam*Q.

    Components of the preimage of the doubled window, filtered by contact
    with the inner window.
    """
    if lam not in ALLOWED_LAMBDAS and not unsafe_lambda:
        raise ValueError(f"lambda must be one of {ALLOWED_LAMBDAS}")
    outer = q.scaled(2.0 * lam)
    inner_r = lam * q.radius
    arcs = []
    for a, b in ball_intervals(c, outer):
        if min_dist_interval(c, a, b, q.center) <= inner_r + PARAM_TOL:
            arcs.append(_make_arc(c, a, b))
    return arcs


@dataclass
class ArcClassification:
    lambda_set: list
    flat: list
    star_flat: list
    dominant: list
    betas: list           # BetaResult per lambda_set arc
    beta_gamma: float
    beta_lambda: float
    beta_star: float
    beta_gamma_line: Line | None = None


def _points_beta(c: Curve, arcs, window: Ball) -> float:
    pts = []
    for t in arcs:
        pts.extend(c.arc_points(t.a, t.b))
    if not pts:
        return 0.0
    res = beta_number(np.asarray(pts), window, c.space,
                      membership_tol=1e-9 * window.radius)
    return res.beta


def classify(c: Curve, q: Ball, lam: float = 1.0, eps2: float = 0.05,
             unsafe_lambda: bool = False) -> ArcClassification:
    """Split the window's arcs into flat / star-flat / dominant."""
    if eps2 <= 0.0:
        raise ValueError("eps2 must be positive")
    arcs = lambda_arcs(c, q, lam, unsafe_lambda)
    gamma_pts = window_points(c, q)
    if len(gamma_pts):
        g_res = beta_number(gamma_pts, q, c.space,
                            membership_tol=1e-9 * q.radius)
        beta_gamma, g_line = g_res.beta, g_res.best_line
    else:
        beta_gamma, g_line = 0.0, None
    outer = q.scaled(2.0 * lam)
    beta_lam = _points_beta(c, arcs, outer)
    betas = [arc_beta(c, (t.a, t.b)) for t in arcs]
    flat = [t for t, r in zip(arcs, betas)
            if r.beta <= eps2 * beta_gamma + FLAT_TOL]
    star = [t for t, r in zip(arcs, betas)
            if r.beta <= 50.0 * eps2 * beta_lam + FLAT_TOL]
    dominant = [t for t in arcs if t not in flat]
    beta_star = _points_beta(c, star, outer)
    return ArcClassification(arcs, flat, star, dominant, betas,
                             beta_gamma, beta_lam, beta_star, g_line)


def is_B_ball(c: Curve, q: Ball, lam: float = 1.0,
              eps1: float | None = None, eps2: float = 0.05,
              inflation: float | None = None,
              classification: ArcClassification | None = None):
    """Test the looks-like-two-segments configuration at window q.

    Three clauses: (i) the window is bent and the curve escapes 14Q;
    (ii) every arc through the net ball is flat; (iii) the star-flat arcs
    are jointly bent at scale eps1 relative to all arcs.  The endpoint
    exclusion (an arc through the net ball containing f(0) or f(1)) is
    reported as a separate flag, not folded into the verdict.
    """
    A = inflation if inflation is not None else (q.inflation or 1.0)
    if eps1 is None:
        eps1 = 1.0 / (126.0 * A)
    cls = classification or classify(c, q, lam, eps2)
    nb = net_ball(q) if q.level is not None else q.scaled(1.0 / (3.0 * A))
    escapes = bool(np.any(c.space.norms(c._chain - q.center)
                          > 14.0 * q.radius))
    clause_i = cls.beta_gamma > 1e-13 and escapes
    touching = [t for t in cls.lambda_set
                if min_dist_interval(c, t.a, t.b, nb.center)
                <= nb.radius + PARAM_TOL]
    clause_ii = all(any(t is s for s in cls.flat) for t in touching)
    clause_iii = cls.beta_star > eps1 * cls.beta_lambda
    b0_excluded = any(t.a <= PARAM_TOL or t.b >= 1.0 - PARAM_TOL
                      for t in touching) and not c.closed
    ok = clause_i and clause_ii and clause_iii
    report = {"clause_i": clause_i, "clause_ii": clause_ii,
              "clause_iii": clause_iii, "b0_excluded": b0_excluded,
              "beta_gamma": cls.beta_gamma, "beta_lambda": cls.beta_lambda,
              "beta_star": cls.beta_star, "n_arcs": len(cls.lambda_set),
              "n_touching": len(touching), "escapes_14Q": escapes}
    if not ok:
        report["failed"] = [name for name, v in
                            (("i", clause_i), ("ii", clause_ii),
                             ("iii", clause_iii)) if not v]
    return ok, report


# ------------------------------------------------------------- fragments

@dataclass
class Fragment:
    pieces: list            # disjoint parameter intervals
    diam: float
    source_arc: ArcRef

    def knots(self, c: Curve) -> np.ndarray:
        pts = []
        for a, b in self.pieces:
            pts.extend(c.arc_points(a, b))
        return np.asarray(pts)


def _clip_pieces(pieces, a, b):
    out = []
    for lo, hi in pieces:
        lo2, hi2 = max(lo, a), min(hi, b)
        if hi2 > lo2:
            out.append((lo2, hi2))
    return out


def maximal_fragment(c: Curve, q: Ball, core_region, q_star: Ball,
                     lam: float = 1.0, eps2: float = 0.05,
                     classification: ArcClassification | None = None,
                     check_bounds: bool = True) -> Fragment:
    """Largest-diameter star-flat fragment in the core touching (1/4)Q_*.

    Ties break to the smallest source-arc start parameter.  The two-sided
    diameter bounds are asserted post hoc; violation means the caller's
    window was not a valid special ball at these constants.
    """
    cls = classification or classify(c, q, lam, eps2)
    core_iv = region_intervals(c, core_region)
    quarter = q_star.scaled(0.25)
    best = None
    for tau in sorted(cls.star_flat, key=lambda t: t.a):
        pieces = _clip_pieces(core_iv, tau.a, tau.b)
        if not pieces:
            continue
        touches = any(min_dist_interval(c, a, b, quarter.center)
                      <= quarter.radius + PARAM_TOL for a, b in pieces)
        if not touches:
            continue
        pts = []
        for a, b in pieces:
            pts.extend(c.arc_points(a, b))
        d = c.space.diam(np.asarray(pts))
        if best is None or d > best.diam + PARAM_TOL:
            best = Fragment(pieces, d, tau)
    if best is None:
        raise FragmentError("no star-flat fragment touches the quarter core "
                            "ball; window is not a valid special ball here")
    if check_bounds:
        lo = 0.5 * q_star.diam
        hi = 1.00001 * q_star.diam
        if not (lo - ABS_TOL <= best.diam <= hi + ABS_TOL):
            raise FragmentBoundsError(
                f"fragment diameter {best.diam} outside "
                f"[{lo}, {hi}]")
    return best


def efficient_subarc(c: Curve, h: Fragment, q_star: Ball,
                     proj: JProjection | None = None) -> ArcRef:
    """Connected subarc of the fragment realizing almost all its diameter.

    Projects the fragment onto its best-fit line, trims a small coordinate
    margin at both ends, and maximizes the endpoint distance over knot pairs
    inside one in-band component.  The chosen pair maximizes pairwise knot
    distance, so the endpoint distance equals the subarc's image diameter
    (efficiency is exact by construction).
    """
    if not h.pieces:
        raise ValueError("empty fragment")
    space = c.space
    if proj is None:
        res = arc_beta(c, (h.source_arc.a, h.source_arc.b))
        line = res.best_line
        if line is None:
            line = Line.through(c.point_at(h.source_arc.a),
                                c.point_at(h.source_arc.b), space)
        proj = j_projection(space, line)
    shrink = q_star.scaled(0.99999)
    inner = region_intervals(c, shrink)
    pieces = []
    for a, b in h.pieces:
        pieces.extend(_clip_pieces(inner, a, b))
    pieces = _merge(pieces)
    if not pieces:
        raise FlatnessError("fragment does not enter the shrunken core ball")
    # coordinate range over the restricted pieces (knot sup is exact:
    # the coordinate is linear on every segment)
    coords = []
    for a, b in pieces:
        for pt in c.arc_points(a, b):
            coords.append(float(proj.coordinate(pt)))
    cmin, cmax = min(coords), max(coords)
    m = 0.00003 * h.diam
    lo_band, hi_band = cmin + m, cmax - m
    if hi_band <= lo_band:
        raise FlatnessError("fragment too short for the margin trim")
    best = None
    for a, b in pieces:
        for seg in _inband_subintervals(c, proj, a, b, lo_band, hi_band):
            sa, sb = seg
            knots = [sa] + [c._params[i] for i in range(1, c.n_segments + 1)
                            if sa < c._params[i] < sb] + [sb]
            pts = np.asarray([c.point_at(t) for t in knots])
            diffs = space.norms(pts[:, None, :] - pts[None, :, :])
            i, j = np.unravel_index(diffs.argmax(), diffs.shape)
            d = float(diffs[i, j])
            ti, tj = sorted((knots[i], knots[j]))
            if best is None or d > best[0]:
                best = (d, ti, tj)
    if best is None:
        raise FlatnessError("margin trim left no in-band subinterval")
    d, ta, tb = best
    # straight diametrical fragments attain the bound with equality; the
    # relative slack keeps roundoff from flipping them
    if d < 0.99993 * h.diam * (1.0 - 1e-9):
        raise FlatnessError(
            f"efficient subarc spans only {d / h.diam:.6f} of the fragment "
            "diameter; flatness hypothesis violated")
    return ArcRef(ta, tb, d)


def _inband_subintervals(c: Curve, proj: JProjection, a: float, b: float,
                         lo: float, hi: float):
    """Maximal subintervals of [a,b] whose projection coordinate is in-band.

    The coordinate is linear on each segment so this is interval algebra.
    """
    raw = []
    for i, s_lo, s_hi in c.segments_overlapping(a, b):
        t0, t1 = c._params[i], c._params[i + 1]
        c0 = float(proj.coordinate(c._chain[i]))
        c1 = float(proj.coordinate(c._chain[i + 1]))
        # local coordinate value: c0 + s (c1 - c0), s in [s_lo, s_hi]
        if abs(c1 - c0) < 1e-300:
            if lo <= c0 <= hi:
                raw.append((t0 + s_lo * (t1 - t0), t0 + s_hi * (t1 - t0)))
            continue
        s_a = (lo - c0) / (c1 - c0)
        s_b = (hi - c0) / (c1 - c0)
        s1, s2 = min(s_a, s_b), max(s_a, s_b)
        s1, s2 = max(s1, s_lo), min(s2, s_hi)
        if s2 > s1:
            raw.append((t0 + s1 * (t1 - t0), t0 + s2 * (t1 - t0)))
    return _merge(raw)


# ------------------------------------------------------------- cylinders

def _shadow_interval(proj: JProjection, region) -> tuple:
    balls = region.balls if isinstance(region, Region) else [region]
    los, his = [], []
    for b in balls:
        h = float(proj.coordinate(b.center))
        # the functional has dual norm 1, so a ball's shadow is +- radius
        los.append(h - b.radius)
        his.append(h + b.radius)
    return min(los), max(his)


def cylinder_membership(proj: JProjection, region, x,
                        tol: float = 0.0) -> str:
    """Side of x relative to the cylinder over the region's shadow.

    Returns "inside", "plus" (beyond the far fiber in line orientation), or
    "minus".
    """
    lo, hi = _shadow_interval(proj, region)
    v = float(proj.coordinate(np.asarray(x, dtype=float)))
    if v > hi + tol:
        return "plus"
    if v < lo - tol:
        return "minus"
    return "inside"


def _arc_meets_tall_region(c: Curve, tau: ArcRef, proj: JProjection,
                           q_star: Ball) -> bool:
    """Does the arc meet the cylinder over 1.01 Q_* outside int(4 Q_*)?"""
    lo, hi = _shadow_interval(proj, q_star.scaled(1.01))
    big_r = 4.0 * q_star.radius
    for i, s_lo, s_hi in c.segments_overlapping(tau.a, tau.b):
        c0 = float(proj.coordinate(c._chain[i]))
        c1 = float(proj.coordinate(c._chain[i + 1]))
        if abs(c1 - c0) < 1e-300:
            if not (lo <= c0 <= hi):
                continue
            s1, s2 = s_lo, s_hi
        else:
            s_a = (lo - c0) / (c1 - c0)
            s_b = (hi - c0) / (c1 - c0)
            s1, s2 = sorted((s_a, s_b))
            s1, s2 = max(s1, s_lo), min(s2, s_hi)
            if s2 < s1:
                continue
        # distance to the center is convex along the segment, so its max
        # over the in-cylinder piece is attained at an endpoint
        g, _, _ = _seg_dist(c, i, q_star.center)
        if max(g(s1), g(s2)) >= big_r - PARAM_TOL:
            return True
    return False


def classify_core(c: Curve, parent_arc: ArcRef, proj: JProjection,
                  child, lam: float = 1.0, eps2: float = 0.05,
                  classification: ArcClassification | None = None) -> str:
    """Tall/wide taxonomy of a child core relative to the parent subarc.

    child must expose .ball, .q_star and .region.  Returns one of
    "N1", "N2_1", "N2_2", "unnecessary", "not_adjacent".
    """
    qs = child.q_star
    adj_r = 1.00002 * qs.radius
    if min_dist_interval(c, parent_arc.a, parent_arc.b, qs.center) \
            > adj_r + PARAM_TOL:
        return "not_adjacent"
    cls = classification or classify(c, child.ball, lam, eps2)
    tall = False
    wide_arcs = []
    for tau in cls.flat:
        if min_dist_interval(c, tau.a, tau.b, qs.center) > adj_r + PARAM_TOL:
            continue
        if _arc_meets_tall_region(c, tau, proj, qs):
            tall = True
        side_a = cylinder_membership(proj, child.region, c.point_at(tau.a))
        side_b = cylinder_membership(proj, child.region, c.point_at(tau.b))
        if {side_a, side_b} == {"plus", "minus"}:
            wide_arcs.append(tau)
    if tall:
        return "N1"
    if wide_arcs:
        tiny = qs.scaled(2.0 ** -14)
        for tau in wide_arcs:
            if min_dist_interval(c, tau.a, tau.b, tiny.center) \
                    <= tiny.radius + PARAM_TOL:
                return "N2_1"
        return "N2_2"
    return "unnecessary"
