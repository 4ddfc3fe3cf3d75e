"""Independent brute-force oracles used to validate the optimizers.

Deliberately dumb implementations: a dense angle grid with the exact
closed-form offset per direction.  No code is shared with the package's
search logic beyond the NormedSpace norm evaluations.
"""
import numpy as np

from curvelab.banach import NormedSpace


def grid_beta(points: np.ndarray, window_diam: float, space: NormedSpace,
              n_angles: int = 100_000) -> float:
    """Min over a dense angle grid of (normal spread)/2 / window_diam."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    thetas = np.linspace(0.0, np.pi, n_angles, endpoint=False)
    normals = np.stack([-np.sin(thetas), np.cos(thetas)], axis=1)
    dual = NormedSpace(2, space.dual_p)
    normals = normals / dual.norms(normals)[:, None]
    vals = normals @ pts.T
    spread = vals.max(axis=1) - vals.min(axis=1)
    return float(spread.min()) / 2.0 / window_diam


def grid_dist_to_line(space: NormedSpace, x, base, direction,
                      n: int = 200_001) -> float:
    """Dense parameter grid for distance from x to a line."""
    x = np.asarray(x, dtype=float)
    base = np.asarray(base, dtype=float)
    direction = np.asarray(direction, dtype=float)
    half = 4.0 * space.norm(x - base) + 1.0
    ts = np.linspace(-half, half, n)
    pts = base[None, :] + ts[:, None] * direction[None, :]
    return float(space.norms(x[None, :] - pts).min())
