"""Distance of F1 critical points from their tropical predictions as xi scales up."""

import argparse

import numpy as np

from torres import bside
from torres.configuration import Configuration
from torres.jobs import generate_z, parse_config

F1 = Configuration(((1, 0), (1, 0), (0, 1), (1, 1)))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--xi", type=float, nargs=2, default=[12.0, 3.0])
    ap.add_argument("--scales", type=float, nargs="+", default=[0.5, 1, 2, 4])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    Lam = bside.default_lambda_basis(2)
    for s in args.scales:
        xi = (s * args.xi[0], s * args.xi[1])
        cfg = parse_config({"alphas": [list(a) for a in F1.alphas], "xi0": ["2", "1"],
                            "P": [{"coef": "1", "exps": [1, 0, 1, 0]}], "z": {"xi": list(xi)},
                            "seed": args.seed})
        z = generate_z(cfg)
        res = bside.critical_points(F1, Lam, z)
        flags = bside.zero_flags(F1, xi)
        dist = max(min(float(np.max(np.abs(bside.l_map(F1, p.u) - bside.ts_vector(F1, F, xi))))
                       for F in flags) for p in res.points)
        worst = max(p.residual for p in res.points)
        print(f"xi=({xi[0]:g}, {xi[1]:g})  points {res.found_count}/{res.expected_count}  "
              f"max|l(u)-ts| {dist:.3e}  max residual {worst:.1e}")


if __name__ == "__main__":
    main()
