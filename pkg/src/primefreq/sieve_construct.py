"""Good integers and the set-level sieve that defines the frequencies.

Step k of the construction, on a universe {1..M}:

* ``B_k`` keeps the elements of ``A_{k-1}`` at 0-based positions 0, k, 2k, ...
* ``C_k`` is what survives when the whole construction up to step k-1 is run
  on ``B_k`` as a fresh universe,
* ``A_k = A_{k-1} \\ C_k``.

Step 1 keeps everything: ``A_1 = B_1 = {1..M}`` and ``C_1`` is empty.
At cardinality level this is |A_k| = |A_{k-1}| - |A_{k-1}|^2 / (k M), and a
universe size is *good* when every quotient on the way is an exact integer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .core_seq import exact_sequence
from .report import ClaimRecord, Status

GOOD_INTEGER_CAP = 20
DEFAULT_MAX_ELEMENTS = 20_000_000


class SieveError(ValueError):
    pass


class DivisibilityError(SieveError):
    """The universe size is not good for the requested depth."""

    def __init__(self, step: int, detail: str, level: int = 0):
        where = f"step {step}" if level == 0 else f"recursion level {level}, step {step}"
        super().__init__(f"divisibility failure at {where}: {detail}")
        self.step = step
        self.level = level


class MemoryBudgetError(SieveError):
    pass


class SizeLimitError(SieveError):
    pass


@dataclass(frozen=True)
class GoodInteger:
    index: int
    value: int


@dataclass(frozen=True)
class StepRecord:
    k: int
    A: int
    B: int
    C: int


@dataclass
class SieveTrace:
    M: int
    steps: list[StepRecord]
    elements: list[dict[str, np.ndarray]] | None = field(default=None, repr=False)

    def cardinalities(self) -> list[int]:
        return [s.A for s in self.steps]

    def frequencies(self) -> list[Fraction]:
        return [Fraction(s.A, self.M) for s in self.steps]

    def to_dict(self, include_elements: bool = False) -> dict[str, Any]:
        steps = []
        for i, s in enumerate(self.steps):
            row: dict[str, Any] = {"k": s.k, "A": s.A, "B": s.B, "C": s.C}
            if include_elements and self.elements is not None:
                row["elements"] = {key: arr.tolist() for key, arr in self.elements[i].items()}
            steps.append(row)
        return {
            "M": self.M,
            "steps": steps,
            "elements_included": bool(include_elements and self.elements is not None),
        }

    def to_json(self, include_elements: bool = False) -> str:
        return json.dumps(self.to_dict(include_elements), indent=2) + "\n"


def good_integer(n: int, cap: int = GOOD_INTEGER_CAP) -> GoodInteger:
    """M_n from M_1 = 1, M_n = n M_{n-1}^2, checked against the closed form."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if n > cap:
        raise SizeLimitError(
            f"good integer M_{n} exceeds cap {cap}: bit length roughly doubles per step"
        )
    m = 1
    for k in range(2, n + 1):
        m = k * m * m
    closed = good_integer_closed_form(n)
    if m != closed:
        raise AssertionError(f"M_{n}: recurrence {m} != closed form {closed}")
    return GoodInteger(n, m)


def good_integer_closed_form(n: int) -> int:
    """prod_{j=2}^n j^(2^(n-j))."""
    out = 1
    for j in range(2, n + 1):
        out *= j ** (1 << (n - j))
    return out


def _step_counts(k: int, size_a: int, M: int, level: int = 0) -> tuple[int, int]:
    if size_a % k:
        raise DivisibilityError(k, f"|A_{k-1}| = {size_a} is not a multiple of {k}", level)
    size_b = size_a // k
    if (size_a * size_b) % M:
        raise DivisibilityError(
            k, f"|A_{k-1}|^2/(k M) = {size_a}^2/({k}*{M}) is not an integer", level
        )
    return size_b, size_a * size_b // M


def cardinality_pipeline(n: int, M: int) -> SieveTrace:
    """|A_k|, |B_k|, |C_k| for k = 1..n using exact integers only."""
    if n < 1 or M < 1:
        raise ValueError(f"need n >= 1 and M >= 1, got n={n}, M={M}")
    steps = [StepRecord(1, M, M, 0)]
    size_a = M
    for k in range(2, n + 1):
        size_b, size_c = _step_counts(k, size_a, M)
        size_a -= size_c
        steps.append(StepRecord(k, size_a, size_b, size_c))
    return SieveTrace(M, steps)


def _run(universe: np.ndarray, depth: int, level: int,
         record: list | None) -> np.ndarray:
    """Run steps 1..depth on ``universe`` and return the survivors A_depth."""
    size = len(universe)
    survivors = universe
    if record is not None:
        record.append((StepRecord(1, size, size, 0),
                       {"A": universe, "B": universe, "C": universe[:0]}))
    for k in range(2, depth + 1):
        _step_counts(k, len(survivors), size, level)
        b = survivors[::k]
        c = _run(b, k - 1, level + 1, None)
        # c is a subset of b, hence of survivors
        survivors = np.setdiff1d(survivors, c, assume_unique=True)
        if record is not None:
            record.append((StepRecord(k, len(survivors), len(b), len(c)),
                           {"A": survivors, "B": b, "C": c}))
    return survivors


def explicit_sieve(n: int, M: int, max_elements: int = DEFAULT_MAX_ELEMENTS,
                   keep_elements: bool = True) -> SieveTrace:
    """Materialize A_k, B_k, C_k over {1..M} and cross-check the counts."""
    if n < 1 or M < 1:
        raise ValueError(f"need n >= 1 and M >= 1, got n={n}, M={M}")
    if M > max_elements:
        raise MemoryBudgetError(
            f"M={M} exceeds the element budget {max_elements}; use cardinality_pipeline"
        )
    record: list = []
    _run(np.arange(1, M + 1, dtype=np.int64), n, 0, record)
    steps = [r[0] for r in record]
    expected = cardinality_pipeline(n, M).steps
    if steps != expected:
        raise AssertionError(f"explicit sieve counts {steps} differ from pipeline {expected}")
    elements = [r[1] for r in record] if keep_elements else None
    return SieveTrace(M, steps, elements)


def verify_frequency_equivalence(n: int, multiplier: int,
                                 max_elements: int = DEFAULT_MAX_ELEMENTS) -> ClaimRecord:
    """|A_k|/M = a_k for every k <= n, identically at M_n and multiplier * M_n."""
    exact = [f.value for f in exact_sequence(n)]
    base = good_integer(n).value
    mismatches = []
    ratios = {}
    for mult in sorted({1, multiplier}):
        trace = explicit_sieve(n, mult * base, max_elements, keep_elements=False)
        ratios[mult] = trace.frequencies()
        for k, (got, want) in enumerate(zip(ratios[mult], exact), start=1):
            if got != want:
                mismatches.append({"multiplier": mult, "k": k, "ratio": str(got), "a_k": str(want)})
    homogeneous = ratios[1] == ratios[multiplier]
    ok = not mismatches and homogeneous
    witness: dict[str, Any] = {
        "n": n,
        "multiplier": multiplier,
        "M": multiplier * base,
        "A_n": int(ratios[multiplier][-1] * multiplier * base),
        "ratio": str(ratios[multiplier][-1]),
    }
    if mismatches:
        witness["mismatches"] = mismatches
    return ClaimRecord(
        "sieve_homogeneity",
        "|A_k|/M = a_k for all k <= n, independent of the good integer M",
        Status.VERIFIED if ok else Status.VIOLATED,
        witness,
    )
