"""Prime counting and the explicit comparison functions around pi(x).

pi is computed exactly with an odd-only segmented sieve of Eratosthenes;
``pi_trial`` is a deliberately naive trial-division oracle for tests.
"""

from __future__ import annotations

import csv
import enum
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate

from . import _kernels

log = logging.getLogger(__name__)

MAX_LIMIT = 10**9
TRIAL_LIMIT = 10**7
DEFAULT_SEGMENT = 1 << 20  # odd numbers per segment
CACHE_ENV = "PRIMEFREQ_CACHE_DIR"
CACHE_FILENAME = "pi_cache.csv"
CACHE_VALIDATE_UPTO = 10**5

PANAITOPOL_LOWER_FROM = 59
PANAITOPOL_UPPER_FROM = 6
RS_LOWER_FROM = 67
RS_UPPER_FROM = math.exp(1.5)


class PrimeCountError(ValueError):
    pass


class ApplicabilityError(ValueError):
    pass


class Method(str, enum.Enum):
    SEGMENTED = "segmented"
    TRIAL = "trial"
    CACHED = "cached"


@dataclass(frozen=True)
class PiCheckpoint:
    n: int
    pi: int
    method: Method


@dataclass(frozen=True)
class BoundPair:
    """Envelope around pi(x); a side is ``None`` below its threshold."""

    x: float
    low: float | None
    high: float | None
    family: str

    def contains(self, value: float) -> bool:
        if self.low is not None and not self.low < value:
            return False
        if self.high is not None and not value < self.high:
            return False
        return True


def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit (plain sieve, used for base primes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _sieve_segment(lo: int, hi: int, base: np.ndarray, marks: Sequence[int]) -> tuple[int, list[int]]:
    """Count primes among odd numbers 2i+1 with lo <= i < hi.

    ``marks`` are odd indices in [lo, hi); returns the total count and, for
    each mark, the count over indices lo..mark inclusive.
    """
    mask = np.ones(hi - lo, dtype=bool)
    if lo == 0:
        mask[0] = False  # 1 is not prime
    top = 2 * hi - 1
    for p in base:
        p = int(p)
        if p * p > top:
            break
        # first odd multiple of p that is >= max(p*p, 2*lo+1)
        start = max(p * p, ((2 * lo + 1 + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        idx = (start - 1) // 2
        if idx < hi:
            mask[idx - lo::p] = False
    if not marks:
        return int(np.count_nonzero(mask)), []
    csum = np.cumsum(mask, dtype=np.int64)
    return int(csum[-1]), [int(csum[m - lo]) for m in marks]


def pi_checkpoints(limit: int, checkpoints: Iterable[int], segment_size: int = DEFAULT_SEGMENT,
                   workers: int = 1, max_limit: int = MAX_LIMIT) -> list[PiCheckpoint]:
    """Exact pi(n) at each checkpoint, with one sieve pass up to ``limit``.

    Segments are merged in ascending order, so the result does not depend on
    ``segment_size`` or ``workers``.
    """
    if limit > max_limit:
        raise PrimeCountError(f"limit {limit} exceeds the configured maximum {max_limit}")
    cps = sorted(set(int(c) for c in checkpoints))
    if cps and (cps[0] < 1 or cps[-1] > limit):
        raise PrimeCountError(f"checkpoints must lie in [1, {limit}]")
    if not cps or cps[-1] < 2:
        return [PiCheckpoint(n, 0, Method.SEGMENTED) for n in cps]
    top = cps[-1]
    n_odd = (top + 1) // 2  # odd numbers 1, 3, ..., <= top
    base = small_primes(math.isqrt(top) + 1)
    base = base[base > 2]
    bounds = [(lo, min(lo + segment_size, n_odd)) for lo in range(0, n_odd, segment_size)]
    mark_of = {n: (n - 1) // 2 for n in cps if n >= 2}
    seg_marks = []
    for lo, hi in bounds:
        seg_marks.append(sorted({m for m in mark_of.values() if lo <= m < hi}))

    def work(i: int) -> tuple[int, list[int]]:
        lo, hi = bounds[i]
        return _sieve_segment(lo, hi, base, seg_marks[i])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, range(len(bounds))))
    else:
        results = [work(i) for i in range(len(bounds))]

    counts_at: dict[int, int] = {}
    running = 1  # the prime 2
    for (total, partial), marks in zip(results, seg_marks):
        for m, cnt in zip(marks, partial):
            counts_at[m] = running + cnt
        running += total
    out = []
    for n in cps:
        pi = counts_at[mark_of[n]] if n >= 2 else 0
        out.append(PiCheckpoint(n, pi, Method.SEGMENTED))
    return out


def pi_trial(n: int) -> int:
    """pi(n) by trial division against the primes found so far."""
    if n > TRIAL_LIMIT:
        raise PrimeCountError(f"trial division guard: n={n} > {TRIAL_LIMIT}")
    primes: list[int] = []
    for m in range(2, n + 1):
        r = math.isqrt(m)
        for p in primes:
            if p > r:
                primes.append(m)
                break
            if m % p == 0:
                break
        else:
            primes.append(m)
    return len(primes)


class PiCache:
    """CSV cache of exact checkpoints (header ``n,pi,method``)."""

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self.values: dict[int, int] = {}
        if self.path.exists():
            self._load()

    @classmethod
    def from_env(cls) -> PiCache | None:
        root = os.environ.get(CACHE_ENV)
        return cls(Path(root) / CACHE_FILENAME) if root else None

    def _load(self) -> None:
        with open(self.path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != ["n", "pi", "method"]:
                raise PrimeCountError(f"{self.path}: bad cache header {reader.fieldnames}")
            for row in reader:
                n, pi = int(row["n"]), int(row["pi"])
                if n <= CACHE_VALIDATE_UPTO and pi_trial(n) != pi:
                    raise PrimeCountError(f"{self.path}: cached pi({n}) = {pi} fails validation")
                self.values[n] = pi

    def save(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.path.with_suffix(".tmp")
        with open(tmp, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["n", "pi", "method"])
            for n in sorted(self.values):
                writer.writerow([n, self.values[n], Method.SEGMENTED.value])
        tmp.replace(self.path)


def pi_values(checkpoints: Iterable[int], cache: PiCache | None = None, workers: int = 1,
              segment_size: int = DEFAULT_SEGMENT) -> list[PiCheckpoint]:
    """pi at each checkpoint, reusing and extending ``cache`` when given."""
    cps = sorted(set(int(c) for c in checkpoints))
    known = cache.values if cache is not None else {}
    missing = [n for n in cps if n not in known]
    fresh = {}
    if missing:
        log.info("sieving pi up to %d for %d checkpoints", missing[-1], len(missing))
        for cp in pi_checkpoints(missing[-1], missing, segment_size, workers):
            fresh[cp.n] = cp.pi
        if cache is not None:
            cache.values.update(fresh)
            cache.save()
    out = []
    for n in cps:
        if n in fresh:
            out.append(PiCheckpoint(n, fresh[n], Method.SEGMENTED))
        else:
            out.append(PiCheckpoint(n, known[n], Method.CACHED))
    return out


def log_shift_sum(m: int, C: float) -> float:
    """x_{m,C} = sum_{k=2}^m 1/(log k + C)."""
    if m < 2 or C < 0:
        raise ValueError(f"need m >= 2 and C >= 0, got m={m}, C={C}")
    return float(_kernels.log_shift_sum(2, int(m), float(C)))


def squeeze_sum(n: int, C: float) -> float:
    """sum_{k=1}^n 1/(log k + C), the k = 1 term being 1/C."""
    if n < 1 or C <= 0:
        raise ValueError(f"need n >= 1 and C > 0, got n={n}, C={C}")
    return float(_kernels.log_shift_sum(1, int(n), float(C)))


def q_sum(n: int) -> float:
    """q(n) = sum_{k=2}^n 1/log k."""
    return log_shift_sum(n, 0.0)


def li(x: float) -> float:
    """Offset logarithmic integral, integral of dt/log t from 2 to x."""
    if x < 2:
        raise ValueError(f"Li is defined for x >= 2, got {x}")
    if x == 2:
        return 0.0
    # substitute t = e^u: integrand e^u/u on [log 2, log x] is smooth
    val, _ = integrate.quad(lambda u: math.exp(u) / u, math.log(2), math.log(x),
                            epsabs=1e-9, epsrel=1e-13, limit=200)
    return val


def panaitopol_bounds(x: float) -> BoundPair:
    """x/(log x - 1 + 1/sqrt(log x)) < pi(x) < x/(log x - 1 - 1/sqrt(log x))."""
    if x < PANAITOPOL_UPPER_FROM:
        raise ApplicabilityError(f"Panaitopol bounds need x >= {PANAITOPOL_UPPER_FROM}, got {x}")
    lx = math.log(x)
    r = 1.0 / math.sqrt(lx)
    den_hi = lx - 1.0 - r
    if den_hi <= 0:
        raise ApplicabilityError(f"nonpositive denominator at x={x}")
    low = x / (lx - 1.0 + r) if x >= PANAITOPOL_LOWER_FROM else None
    return BoundPair(x, low, x / den_hi, "panaitopol")


def rosser_schoenfeld_bounds(x: float) -> BoundPair:
    """x/(log x - 1/2) < pi(x) < x/(log x - 3/2)."""
    if x < RS_UPPER_FROM:
        raise ApplicabilityError(f"Rosser-Schoenfeld bounds need x >= e^1.5, got {x}")
    lx = math.log(x)
    low = x / (lx - 0.5) if x >= RS_LOWER_FROM else None
    return BoundPair(x, low, x / (lx - 1.5), "rosser_schoenfeld")
