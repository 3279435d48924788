#!/usr/bin/env python3
"""Width decay experiment: exact widths, the gamma_n coefficient, and the
two-sided sandwich across a range of indices, with the grid oracle delta.

Example:
  python scripts/width_asymptotics.py --q 0.5 --beta 0.7 --n-max 20
"""

import argparse
import math

from neumann_widths import NeumannParams, exact_width, min_guaranteed_n_beta, supnorm_square_conv
from neumann_widths.errors import NotFound


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=float, default=0.5)
    ap.add_argument("--beta", type=float, default=0.7)
    ap.add_argument("--n-max", type=int, default=20)
    ap.add_argument("--verify", action="store_true", help="run the sup-norm oracle per row")
    args = ap.parse_args()

    params = NeumannParams(args.q, args.beta)
    try:
        n_star = min_guaranteed_n_beta(args.q, args.beta, n_cap=200_000).n
        print(f"q={args.q} beta={args.beta}: equalities guaranteed from n = {n_star}")
    except NotFound:
        print(f"q={args.q} beta={args.beta}: guaranteed index beyond scan cap")
        n_star = None

    gamma_cap = 16.0 / (9.0 * math.pi)
    header = f"{'n':>4} {'theta_n':>20} {'width':>24} {'gamma_n':>12} {'|gamma|<cap':>11}"
    if args.verify:
        header += f" {'oracle_delta':>13}"
    print(header)
    for n in range(1, args.n_max + 1):
        r = exact_width(params, n)
        line = (f"{n:>4} {r.theta:>20.16f} {r.width:>24.16e} "
                f"{r.gamma_n:>12.6f} {str(abs(r.gamma_n) <= gamma_cap):>11}")
        if args.verify:
            max_abs, _ = supnorm_square_conv(params, n)
            line += f" {abs(max_abs - r.width):>13.2e}"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
