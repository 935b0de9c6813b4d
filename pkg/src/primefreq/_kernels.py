"""Compiled streaming loops.

The recurrence is order dependent, so every kernel is a single sequential
pass.  Sums use Neumaier's variant of compensated summation.
"""

import numba
import numpy as np

# column layout of stream_columns
COL_A = 0        # a_n
COL_C = 1        # c(n) = sum_{k<=n} a_k
COL_H = 2        # H_n
COL_S = 3        # sum_{k=2}^n a_{k-1} / (k (k - a_{k-1}))
COL_R = 4        # 1 + sum_{k=2}^n 1 / (k - a_{k-1})
COL_Q = 5        # sum_{k=2}^n 1 / log k
COL_X1 = 6       # sum_{k=2}^n 1 / (log k + 1)
COL_X2 = 7       # sum_{k=2}^n 1 / (log k + 2)
N_COLS = 8


@numba.njit(cache=True, inline="always")
def _nadd(s, comp, x):
    t = s + x
    if abs(s) >= abs(x):
        comp += (s - t) + x
    else:
        comp += (x - t) + s
    return t, comp


@numba.njit(cache=True)
def stream_columns(upto, checkpoints):
    """Run n = 1..upto and return one row of columns per checkpoint.

    ``checkpoints`` must be sorted ascending and lie in [1, upto].
    """
    out = np.empty((checkpoints.shape[0], N_COLS))
    sums = np.zeros(N_COLS)
    comps = np.zeros(N_COLS)
    a = 1.0
    sums[COL_C] = 1.0
    sums[COL_H] = 1.0
    sums[COL_R] = 1.0
    j = 0
    m = checkpoints.shape[0]
    while j < m and checkpoints[j] == 1:
        out[j, COL_A] = 1.0
        for col in range(1, N_COLS):
            out[j, col] = sums[col]
        j += 1
    for k in range(2, upto + 1):
        if j >= m:
            break
        fk = float(k)
        prev = a
        a = prev * (1.0 - prev / fk)
        lk = np.log(fk)
        diff = fk - prev
        terms = (a, 1.0 / fk, prev / (fk * diff), 1.0 / diff,
                 1.0 / lk, 1.0 / (lk + 1.0), 1.0 / (lk + 2.0))
        cols = (COL_C, COL_H, COL_S, COL_R, COL_Q, COL_X1, COL_X2)
        for i in range(7):
            c = cols[i]
            sums[c], comps[c] = _nadd(sums[c], comps[c], terms[i])
        while j < m and checkpoints[j] == k:
            out[j, COL_A] = a
            for col in range(1, N_COLS):
                out[j, col] = sums[col] + comps[col]
            j += 1
    return out


@numba.njit(cache=True)
def frequency_array(upto):
    """a_1..a_upto in double precision (index 0 holds a_1)."""
    out = np.empty(upto)
    a = 1.0
    out[0] = a
    for k in range(2, upto + 1):
        a = a * (1.0 - a / k)
        out[k - 1] = a
    return out


@numba.njit(cache=True)
def log_shift_sum(start, stop, shift):
    """sum_{k=start}^{stop} 1 / (log k + shift), compensated."""
    s = 0.0
    comp = 0.0
    for k in range(start, stop + 1):
        s, comp = _nadd(s, comp, 1.0 / (np.log(float(k)) + shift))
    return s + comp


@numba.njit(cache=True)
def harmonic_sum(n):
    s = 0.0
    comp = 0.0
    for k in range(1, n + 1):
        s, comp = _nadd(s, comp, 1.0 / k)
    return s + comp
