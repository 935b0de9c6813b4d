"""Engines for the frequency recurrence a_1 = 1, a_n = a_{n-1} (1 - a_{n-1}/n).

Three routes are provided:

* exact rationals (ground truth, doubly exponential denominators, capped),
* a fixed-point binary engine with a configurable number of fractional bits,
* double precision with compensated running sums (compiled, streaming).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .constants import GAMMA

EXACT_CAP = 24
DEFAULT_PRECISION = 128


class ExactModeLimit(ValueError):
    """Requested index is beyond the exact-rational engine's cap."""

    def __init__(self, n: int, cap: int):
        super().__init__(
            f"exact mode limit: n={n} exceeds cap {cap} "
            f"(denominators grow doubly exponentially; raise the cap at your own memory risk)"
        )
        self.n = n
        self.cap = cap


def _coprime_fraction(p: int, q: int) -> Fraction:
    # skip the gcd Fraction() would run; it dominates at multi-megabit sizes
    if hasattr(Fraction, "_from_coprime_ints"):  # Python >= 3.12
        return Fraction._from_coprime_ints(p, q)
    return Fraction(p, q, _normalize=False)


@dataclass(frozen=True)
class ExactFrequency:
    """a_n = numerator/denominator, already in lowest terms."""

    index: int
    numerator: int
    denominator: int

    @property
    def value(self) -> Fraction:
        return _coprime_fraction(self.numerator, self.denominator)

    def reciprocal(self) -> Fraction:
        return _coprime_fraction(self.denominator, self.numerator)


@dataclass(frozen=True)
class FloatSeqState:
    index: int
    a: float
    c: float
    b: float
    s_partial: float
    s_tail_bound: float


def _check_cap(n: int, cap: int) -> None:
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if n > cap:
        raise ExactModeLimit(n, cap)


def iter_exact(n: int, cap: int = EXACT_CAP) -> Iterator[ExactFrequency]:
    """Yield a_1..a_n as reduced fractions.

    With a_{n-1} = p/q in lowest terms, a_n = p (n q - p) / (n q^2), and any
    common factor of numerator and denominator must divide n, so the
    reduction only needs a gcd against n.
    """
    _check_cap(n, cap)
    p, q = 1, 1
    yield ExactFrequency(1, 1, 1)
    for k in range(2, n + 1):
        num = p * (k * q - p)
        den = k * q * q
        g = math.gcd(num % k, k)
        p, q = num // g, den // g
        yield ExactFrequency(k, p, q)


def exact_sequence(n: int, cap: int = EXACT_CAP) -> list[ExactFrequency]:
    return list(iter_exact(n, cap))


def frequency_exact(n: int, cap: int = EXACT_CAP) -> Fraction:
    """a_n as an exact reduced fraction."""
    last = None
    for last in iter_exact(n, cap):
        pass
    return last.value


def frequency_fixed(n: int, precision: int = DEFAULT_PRECISION) -> tuple[Fraction, Fraction]:
    """a_n in binary fixed point with ``precision`` fractional bits.

    Returns ``(value, error_bound)``.  Each step floors twice (at most two
    units in the last place) and t -> t - t^2/k is non-expanding on [0, 1]
    for k >= 2, so the error after n steps is at most 2 (n - 1) ulp.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    one = 1 << precision
    a = one
    for k in range(2, n + 1):
        a -= ((a * a) >> precision) // k
    ulp = Fraction(1, one)
    return Fraction(a, one), 2 * (n - 1) * ulp


def _as_checkpoints(upto: int, checkpoints: Sequence[int]) -> np.ndarray:
    if upto < 1:
        raise ValueError(f"upto must be >= 1, got {upto}")
    cps = sorted(int(c) for c in checkpoints) if checkpoints else [upto]
    if cps[0] < 1 or cps[-1] > upto:
        raise ValueError(f"checkpoints must lie in [1, {upto}]")
    return np.asarray(cps, dtype=np.int64)


def stream(upto: int, checkpoints: Sequence[int] = ()) -> tuple[np.ndarray, np.ndarray]:
    """Raw column snapshots (see ``_kernels``) at the given checkpoints."""
    cps = _as_checkpoints(upto, checkpoints)
    return cps, _kernels.stream_columns(int(upto), cps)


def tail_bound(terms: int) -> float:
    """Upper bound on sum_{k>N} a_{k-1} / (k (k - a_{k-1})) for N = terms >= 2.

    Uses a_{k-1} <= 1/(log(k-1) + 1) and k - a_{k-1} >= k - 1, then
    telescopes sum_{k>N} 1/(k (k-1)) = 1/N.
    """
    return 1.0 / ((math.log(terms) + 1.0) * terms)


def iterate_float(upto: int, checkpoints: Sequence[int] = ()) -> list[FloatSeqState]:
    """One sequential double-precision pass with snapshots at ``checkpoints``.

    An empty checkpoint list yields only the final state.
    """
    cps, cols = stream(upto, checkpoints)
    states = []
    for n, row in zip(cps.tolist(), cols):
        a = float(row[_kernels.COL_A])
        states.append(
            FloatSeqState(
                index=n,
                a=a,
                c=float(row[_kernels.COL_C]),
                b=1.0 / a - math.log(n),
                s_partial=float(row[_kernels.COL_S]),
                s_tail_bound=tail_bound(n) if n >= 2 else 1.0,
            )
        )
    return states


def frequency_float(n: int) -> float:
    return iterate_float(n)[-1].a


def frequency_array(upto: int) -> np.ndarray:
    """a_1..a_upto as a float array (0-based: element i is a_{i+1})."""
    if upto < 1:
        raise ValueError(f"upto must be >= 1, got {upto}")
    return _kernels.frequency_array(int(upto))


def reciprocal_step_check(n: int, exact: bool = True, cap: int = EXACT_CAP,
                          tol: float = 1e-12) -> tuple[bool, Fraction | float]:
    """Residual of 1/a_n = 1/a_{n-1} + 1/(n - a_{n-1}).

    Exact mode compares by cross-multiplication and must give exactly 0.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if exact:
        seq = exact_sequence(n, cap)
        prev, cur = seq[-2], seq[-1]
        p, q = prev.numerator, prev.denominator
        # q_n/p_n - q/p - q/(n q - p), over the denominator p_n p (n q - p)
        d = n * q - p
        num = cur.denominator * p * d - q * cur.numerator * d - q * cur.numerator * p
        residual = Fraction(abs(num), cur.numerator * p * d) if num else Fraction(0)
        return residual == 0, residual
    arr = frequency_array(n)
    prev, cur = float(arr[-2]), float(arr[-1])
    residual = abs(1.0 / cur - 1.0 / prev - 1.0 / (n - prev))
    return residual < tol, residual


def reciprocal_sum(n: int, exact: bool = False, cap: int = EXACT_CAP) -> Fraction | float:
    """1 + sum_{k=2}^n 1/(k - a_{k-1}); equals 1/a_n."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if exact:
        total = Fraction(1)
        for prev in iter_exact(n - 1, cap):
            k = prev.index + 1
            total += Fraction(prev.denominator, k * prev.denominator - prev.numerator)
        return total
    _, cols = stream(n, [n])
    return float(cols[0, _kernels.COL_R])


def b_value(n: int) -> float:
    """b_n = 1/a_n - log n."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    return iterate_float(n)[-1].b


def s_series(terms: int) -> tuple[float, float]:
    """Partial sum of sum_{k>=2} a_{k-1}/(k (k - a_{k-1})) and a tail bound.

    The full series lies in ``[partial, partial + tail_bound]``.
    """
    if terms < 2:
        raise ValueError(f"terms must be >= 2, got {terms}")
    _, cols = stream(terms, [terms])
    return float(cols[0, _kernels.COL_S]), tail_bound(terms)


def harmonic(n: int) -> float:
    """H_n with compensated summation; satisfies 0 < H_n - log n - gamma < 1/n."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    return float(_kernels.harmonic_sum(int(n)))


def harmonic_excess(n: int) -> float:
    return harmonic(n) - math.log(n) - GAMMA


def frequency_bracket(k: int) -> tuple[float, float]:
    """(1/(log k + 2), 1/(log k + 1)); a_k lies between them for k >= 2."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    lk = math.log(k)
    return 1.0 / (lk + 2.0), 1.0 / (lk + 1.0)
