"""Print the decade comparison table (c(n), n a_n, q(n) and Li(n) against pi(n))."""

import argparse

from primefreq import _kernels as K
from primefreq.analysis import decades
from primefreq.core_seq import stream
from primefreq.prime_count import li, pi_checkpoints


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--upto", type=lambda s: int(float(s)), default=10**8)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    cps = decades(10, args.upto)
    pis = {c.n: c.pi for c in pi_checkpoints(args.upto, cps, workers=args.workers)}
    idx, cols = stream(args.upto, cps)
    print("n,pi,c/pi,na/pi,q/pi,li/pi,gap")
    for n, row in zip(idx.tolist(), cols):
        p = pis[n]
        a = row[K.COL_A]
        print(f"{n},{p},{row[K.COL_C] / p:.6f},{n * a / p:.6f},{row[K.COL_Q] / p:.6f},"
              f"{li(n) / p:.6f},{1 / a - n / p:.6f}")


if __name__ == "__main__":
    main()
