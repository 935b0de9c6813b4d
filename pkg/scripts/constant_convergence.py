"""How the enclosure for S and the drift of b_n behave as the number of terms grows."""

import math

from primefreq import _kernels as K
from primefreq.constants import GAMMA
from primefreq.core_seq import stream, tail_bound


def main() -> None:
    cps = [10**k for k in range(2, 9)]
    idx, cols = stream(cps[-1], cps)
    print("N,S_low,S_high,width,b_N,gamma+S_mid,b_N-gamma-S_mid")
    for n, row in zip(idx.tolist(), cols):
        low = row[K.COL_S]
        tail = tail_bound(n)
        mid = GAMMA + low + tail / 2
        b = 1 / row[K.COL_A] - math.log(n)
        print(f"{n},{low:.12f},{low + tail:.12f},{tail:.3e},{b:.10f},{mid:.10f},{b - mid:.3e}")


if __name__ == "__main__":
    main()
