"""Compare the truncated A-side series with the B-side residue sum over a bound sweep.

    python3 scripts/mirror_check.py configs/f1.json --bounds 5 10 15 20
"""

import argparse

from torres import aside, bside
from torres.configuration import chamber_of, require_valid
from torres.jobs import generate_z, load_config


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--bounds", type=int, nargs="+", default=[5, 10, 20])
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    cfg = load_config(args.config)
    A = cfg.configuration()
    require_valid(A)
    C = chamber_of(A, cfg.xi0)
    z = generate_z(cfg)
    P = cfg.polynomial()
    Lam = tuple(map(tuple, cfg.lambda_basis)) if cfg.lambda_basis else bside.default_lambda_basis(A.r)
    res = bside.toric_residue_sum(P, A, Lam, z, bside.HomotopySettings(seed=cfg.seed, threads=args.threads))
    print(f"{cfg.name}: B-side {res.value:.15g}  points {res.found_count}/{res.expected_count}")
    print(f"{'bound':>6} {'terms':>6} {'|A-B|':>12} {'tail est':>12}")
    for b in args.bounds:
        s = aside.mp_series(P, A, C, z, b)
        print(f"{b:>6} {len(s.terms):>6} {abs(s.partial_sum - res.value):>12.3e} {s.tail_estimate:>12.3e}")


if __name__ == "__main__":
    main()
