"""Compare the two JK algorithms (basic decomposition vs flag sum) on random data."""

import argparse
import random
import time

from torres.residues import jk_basic, jk_via_flags
from torres.sampling import random_chamber, random_configuration, random_fraction, random_regular_point


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--configs", type=int, default=60)
    ap.add_argument("--fractions", type=int, default=5)
    ap.add_argument("--points", type=int, default=3)
    ap.add_argument("--max-rank", type=int, default=3)
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    t0 = time.perf_counter()
    checks = bad = 0
    for _ in range(args.configs):
        r = rng.randint(1, args.max_rank)
        A = random_configuration(rng, r, rng.randint(r + 1, args.max_n))
        C = random_chamber(rng, A)
        pts = [random_regular_point(rng, C) for _ in range(args.points)]
        for _ in range(args.fractions):
            phi = random_fraction(rng, A)
            ref = jk_basic(C, phi)
            for xi in pts:
                checks += 1
                if jk_via_flags(C, xi, phi) != ref:
                    bad += 1
                    print("mismatch:", A.alphas, C.xi0, xi, phi)
    print(f"{checks} comparisons, {bad} mismatches, {time.perf_counter() - t0:.1f}s")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
