"""Scale-weighted beta sum against curve length, across fractal depths.

The sum diam E + sum beta^2 diam Q over a multiresolution family is the
quantity that controls the length of a curve through the set.  For a
straight segment it degenerates to diam E; for the substitution arc the
ratio to the true length stays bounded as depth grows.
"""
import os

from curvelab.pipeline import tsp_ratio_table, plot_ratio_curve

HERE = os.path.dirname(os.path.abspath(__file__))


def main():
    print("segment (ratio is identically 1):")
    for row in tsp_ratio_table("segment", [1], 2.0):
        print(f"  length {row['length']:.4f}  sum {row['jones_sum']:.4f}  "
              f"ratio {row['ratio']:.4f}")

    print("substitution arc, depths 3..6:")
    table = tsp_ratio_table("koch", [3, 4, 5, 6], 2.0)
    for row in table:
        print(f"  depth {row['depth']}  length {row['length']:.4f}  "
              f"sum {row['jones_sum']:.4f}  ratio {row['ratio']:.4f}")
    out = os.path.join(HERE, "ratio_curve_koch.svg")
    plot_ratio_curve(table, out)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
