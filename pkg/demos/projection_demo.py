"""Norm-one linear projections onto lines in lp planes.

In a Hilbert space the orthogonal projection is the unique norm-one
projection onto a line.  In other lp planes the projection built from the
duality mapping is still 1-Lipschitz with a factor-2 distance sandwich,
and in the taxicab plane an axis-parallel line carries a whole
one-parameter family of them.
"""
import numpy as np

from curvelab.banach import (Line, NormedSpace, antislope, dist_to_line,
                             j_projection)


def main():
    x = np.array([3.0, 4.0])
    for p in (1.5, 2.0, 3.0):
        space = NormedSpace(2, p)
        axis = Line.through(np.zeros(2), np.array([1.0, 0.0]), space)
        proj = j_projection(space, axis)
        d = dist_to_line(space, x, axis)
        print(f"p={p}: proj(3,4) = {proj(x).round(6)}, "
              f"dist {d:.6f}, gap {space.norm(x - proj(x)):.6f}")

    taxi = NormedSpace(2, 1.0)
    axis = Line.through(np.zeros(2), np.array([1.0, 0.0]), taxi)
    for s in (-0.5, 0.0, 0.5):
        proj = j_projection(taxi, axis, s_param=s)
        print(f"l1, s={s:+.1f}: proj(3,4) = {proj(x).round(6)}")

    diag = Line.through(np.zeros(2), np.ones(2), NormedSpace(2, 2.0))
    proj = j_projection(NormedSpace(2, 2.0), Line.through(
        np.zeros(2), np.array([1.0, 0.0]), NormedSpace(2, 2.0)))
    print(f"antislope of the diagonal under the horizontal projection: "
          f"{antislope(NormedSpace(2, 2.0), diag, proj):.6f}")


if __name__ == "__main__":
    main()
