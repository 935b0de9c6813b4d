"""Numerical audit of the claims around a_n, c(n) and pi(n).

Every claim is decided at finite n.  Asymptotic equivalences are judged by a
trend rule over decade checkpoints (strictly monotone, distance to 1
strictly shrinking); they are never compared with their limit directly.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Any, Callable, Sequence

import numpy as np

from . import _kernels as K
from .constants import GAMMA, REFERENCE
from .core_seq import exact_sequence, reciprocal_sum, reciprocal_step_check, s_series, stream
from .prime_count import (
    PANAITOPOL_LOWER_FROM,
    RS_LOWER_FROM,
    PiCache,
    panaitopol_bounds,
    pi_values,
    rosser_schoenfeld_bounds,
)
from .report import AuditReport, ClaimRecord, Status
from .sieve_construct import (
    cardinality_pipeline,
    explicit_sieve,
    good_integer,
    good_integer_closed_form,
    verify_frequency_equivalence,
)

SEQ_LOCAL_MAX = 10**6
FLOAT_SLACK = 1e-12
IDENTITY_TOL = 1e-12
S_TERMS = 10**7
EXACT_AUDIT_MAX = 16
GOOD_INTEGER_AUDIT_MAX = 15
SIEVE_AUDIT_N = 5
CONSTANT_TOL = 5e-5
TREND_FROM = 1000


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    a_n: float
    c_n: float
    pi_n: int
    ratio_c_pi: float
    ratio_na_pi: float
    gap: float


CSV_FIELDS = ["n", "a_n", "c_n", "pi_n", "ratio_c_pi", "ratio_na_pi", "gap"]


@dataclass(frozen=True)
class ConstantEstimates:
    terms: int
    S_low: float
    S_high: float
    S_hat: float
    gammaS_hat: float
    gammaS1_hat: float
    error_bar: float


def _fmt(x: Any) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def _check_cps(checkpoints: Sequence[int]) -> list[int]:
    cps = sorted(set(int(c) for c in checkpoints))
    if not cps:
        raise ValueError("at least one checkpoint is required")
    if cps[0] < 2:
        raise ValueError("checkpoints must be >= 2")
    return cps


def comparison_table(checkpoints: Sequence[int], cache: PiCache | None = None,
                     workers: int = 1) -> list[ComparisonRow]:
    cps = _check_cps(checkpoints)
    pis = {p.n: p.pi for p in pi_values(cps, cache=cache, workers=workers)}
    _, cols = stream(cps[-1], cps)
    rows = []
    for n, row in zip(cps, cols):
        a, c, pi = float(row[K.COL_A]), float(row[K.COL_C]), pis[n]
        rows.append(ComparisonRow(n, a, c, pi, c / pi, n * a / pi, 1.0 / a - n / pi))
    return rows


def rows_to_csv(rows: Sequence[ComparisonRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in rows:
        writer.writerow([_fmt(v) for v in asdict(r).values()])
    return buf.getvalue()


def gap_estimate(n: int, pi_n: int | None = None) -> tuple[float, tuple[float, float]]:
    """1/a_n - n/pi(n) and the interval (b_n + 1) +- 1/sqrt(log n) that must hold it."""
    if n < PANAITOPOL_LOWER_FROM:
        raise ValueError(f"gap estimate needs n >= {PANAITOPOL_LOWER_FROM}, got {n}")
    if pi_n is None:
        pi_n = pi_values([n])[0].pi
    _, cols = stream(n, [n])
    a = float(cols[0, K.COL_A])
    b = 1.0 / a - math.log(n)
    half = 1.0 / math.sqrt(math.log(n))
    return 1.0 / a - n / pi_n, (b + 1.0 - half, b + 1.0 + half)


def constant_estimates(terms: int = S_TERMS) -> ConstantEstimates:
    partial, tail = s_series(terms)
    s_hat = partial + tail / 2
    gs = GAMMA + s_hat
    return ConstantEstimates(terms, partial, partial + tail, s_hat, gs, gs + 1.0, tail / 2)


def decades(lo: int, hi: int) -> list[int]:
    out, p = [], 10
    while p <= hi:
        if p >= lo:
            out.append(p)
        p *= 10
    return out


def default_checkpoints(limit: int) -> list[int]:
    cps = {59, 67, 100, limit, *decades(10, limit)}
    return sorted(c for c in cps if 2 <= c <= limit)


def trend_toward_one(values: Sequence[float]) -> bool:
    """Strictly monotone and strictly approaching 1."""
    if len(values) < 2:
        return False
    d = np.diff(values)
    monotone = bool(np.all(d > 0) or np.all(d < 0))
    dist = np.abs(np.asarray(values) - 1.0)
    return monotone and bool(np.all(np.diff(dist) < 0))


def _record(claim_id: str, statement: str, ok: bool | None, **witness: Any) -> ClaimRecord:
    if ok is None:
        status = Status.INCONCLUSIVE
    else:
        status = Status.VERIFIED if ok else Status.VIOLATED
    clean = {k: (float(v) if isinstance(v, np.floating) else int(v) if isinstance(v, np.integer) else v)
             for k, v in witness.items()}
    return ClaimRecord(claim_id, statement, status, clean)


def _worst(n: np.ndarray, margin: np.ndarray) -> dict[str, Any]:
    """Witness for the smallest margin (negative margin = violation)."""
    i = int(np.argmin(margin))
    return {"n": int(n[i]), "margin": float(margin[i]), "violations": int(np.count_nonzero(margin <= -FLOAT_SLACK))}


def _two_sided(claim_id: str, statement: str, n, low, mid, high) -> ClaimRecord:
    """low <= mid <= high elementwise, up to FLOAT_SLACK (strict or not)."""
    if len(n) == 0:
        return _record(claim_id, statement, None, reason="no admissible n")
    lo = _worst(n, mid - low)
    hi = _worst(n, high - mid)
    bad = lo["violations"] + hi["violations"]
    return _record(claim_id, statement, bad == 0, n_min=int(n[0]), n_max=int(n[-1]),
                   lower=lo, upper=hi)


class _Sequence:
    """Columns for every n = 1..N plus the pi checkpoints."""

    def __init__(self, seq_max: int, cps: Sequence[int]):
        self.N = seq_max
        every = list(range(1, seq_max + 1))
        idx, cols = stream(max([seq_max, *cps]), sorted(set(every) | set(cps)))
        self.row = {int(n): i for i, n in enumerate(idx)}
        self.cols = cols
        full = cols[[self.row[n] for n in every]] if every else np.empty((0, K.N_COLS))
        self.n = np.arange(1, seq_max + 1, dtype=np.int64)
        self.a = full[:, K.COL_A]
        self.c = full[:, K.COL_C]
        self.h = full[:, K.COL_H]
        self.s = full[:, K.COL_S]
        self.r = full[:, K.COL_R]
        self.q = full[:, K.COL_Q]
        self.x1 = full[:, K.COL_X1]
        self.x2 = full[:, K.COL_X2]
        self.logn = np.log(self.n.astype(float))
        self.b = 1.0 / self.a - self.logn

    def at(self, n: int, col: int) -> float:
        return float(self.cols[self.row[n], col])


def _claim_bracket(sq: _Sequence) -> ClaimRecord:
    sel = slice(1, None)
    lk = sq.logn[sel]
    return _two_sided("frequency_bracket", "1/(log k + 2) <= a_k <= 1/(log k + 1) for k >= 2",
                      sq.n[sel], 1.0 / (lk + 2.0), sq.a[sel], 1.0 / (lk + 1.0))


def _claim_b_bounds(sq: _Sequence) -> ClaimRecord:
    sel = slice(1, None)
    b = sq.b[sel]
    return _two_sided("b_bounds", "1/2 + gamma < b_n < 1 + gamma for n >= 2, b_n = 1/a_n - log n",
                      sq.n[sel], np.full_like(b, 0.5 + GAMMA), b, np.full_like(b, 1.0 + GAMMA))


def _claim_b_increasing(sq: _Sequence) -> ClaimRecord:
    statement = "b_n is increasing"
    if sq.N < 3:
        return _record("b_increasing", statement, None, reason="needs n >= 3")
    db = np.diff(sq.b[1:])  # b_n - b_{n-1} for n = 3..N
    bad = np.flatnonzero(db <= 0)
    # exact reciprocals for the witness pair
    ex = exact_sequence(min(sq.N, EXACT_AUDIT_MAX))
    exact_b = [float(e.reciprocal()) - math.log(e.index) for e in ex]
    extra = {"decreasing_on_3_to_N": bool(np.all(db < 0)), "N": sq.N}
    if len(bad) == 0:
        return _record("b_increasing", statement, True, **extra)
    n = int(bad[0]) + 3
    lhs = exact_b[n - 1] if n <= len(exact_b) else float(sq.b[n - 1])
    rhs = exact_b[n - 2] if n - 1 <= len(exact_b) else float(sq.b[n - 2])
    return _record("b_increasing", statement, False, n=n, lhs=lhs, rhs=rhs, margin=lhs - rhs,
                   counterexample=f"b_{n} < b_{n - 1}", **extra)


def _claim_b_limit(sq: _Sequence, const: ConstantEstimates) -> ClaimRecord:
    statement = "b_n = H_n - log n + sum_{k<=n} a_{k-1}/(k(k-a_{k-1})) converges to gamma + S ~ 1.24005"
    if sq.N < 2:
        return _record("b_limit", statement, None, reason="needs n >= 2")
    resid = np.abs((1.0 / sq.a) - (sq.h + sq.s))[1:]
    i = int(np.argmax(resid))
    identity_ok = bool(resid[i] <= IDENTITY_TOL)
    const_ok = abs(const.gammaS_hat - REFERENCE.limit_b) < CONSTANT_TOL
    return _record("b_limit", statement, identity_ok and const_ok,
                   identity_max_residual=float(resid[i]), identity_worst_n=i + 2,
                   gammaS_hat=const.gammaS_hat, reference=REFERENCE.limit_b,
                   b_N=float(sq.b[-1]), N=sq.N)


def _claim_harmonic(sq: _Sequence) -> ClaimRecord:
    excess = sq.h - sq.logn - GAMMA
    return _two_sided("harmonic_bracket", "0 < H_n - log n - gamma < 1/n",
                      sq.n, np.zeros_like(excess), excess, 1.0 / sq.n)


def _claim_squeeze(sq: _Sequence) -> ClaimRecord:
    # k = 1 terms of the two sums are 1/2 and 1
    return _two_sided("squeeze",
                      "sum_{k<=n} 1/(log k + 2) <= c(n) <= sum_{k<=n} 1/(log k + 1)",
                      sq.n, 0.5 + sq.x2, sq.c, 1.0 + sq.x1)


def _claim_reciprocal_step(sq: _Sequence) -> ClaimRecord:
    statement = "1/a_n = 1/a_{n-1} + 1/(n - a_{n-1}) for n >= 2"
    if sq.N < 2:
        return _record("reciprocal_step", statement, None, reason="needs n >= 2")
    m = min(sq.N, EXACT_AUDIT_MAX)
    exact_ok = all(reciprocal_step_check(n, exact=True)[0] for n in range(2, m + 1))
    prev, cur, n = sq.a[:-1], sq.a[1:], sq.n[1:]
    resid = np.abs(1.0 / cur - 1.0 / prev - 1.0 / (n - prev))
    i = int(np.argmax(resid))
    return _record("reciprocal_step", statement, exact_ok and bool(resid[i] < IDENTITY_TOL),
                   exact_upto=m, exact_all_zero=exact_ok,
                   float_max_residual=float(resid[i]), float_worst_n=int(n[i]))


def _claim_reciprocal_sum(sq: _Sequence) -> ClaimRecord:
    statement = "1/a_n = 1 + sum_{k=2}^n 1/(k - a_{k-1}) for n >= 2"
    if sq.N < 2:
        return _record("reciprocal_sum", statement, None, reason="needs n >= 2")
    m = min(sq.N, EXACT_AUDIT_MAX)
    exact_ok = all(reciprocal_sum(e.index, exact=True) == e.reciprocal()
                   for e in exact_sequence(m)[1:])
    resid = np.abs(sq.r - 1.0 / sq.a)
    i = int(np.argmax(resid))
    return _record("reciprocal_sum", statement, exact_ok and bool(resid[i] <= IDENTITY_TOL),
                   exact_upto=m, exact_equal=exact_ok,
                   float_max_residual=float(resid[i]), float_worst_n=i + 1)


def _trend_record(claim_id: str, statement: str, points: list[int],
                  value: Callable[[int], float], **extra: Any) -> ClaimRecord:
    if len(points) < 2:
        return _record(claim_id, statement, None, reason="fewer than two decade checkpoints",
                       points=points)
    vals = [value(n) for n in points]
    return _record(claim_id, statement, trend_toward_one(vals), points=points,
                   values=[float(v) for v in vals], **extra)


def _claim_recip_log(sq: _Sequence) -> ClaimRecord:
    return _trend_record("recip_log", "1/a_n ~ log n (trend of (1/a_n)/log n)",
                         decades(10, sq.N), lambda n: (1.0 / sq.a[n - 1]) / sq.logn[n - 1])


def _claim_shift_ratio(sq: _Sequence) -> ClaimRecord:
    pts = decades(10, sq.N)
    rec = _trend_record("shift_ratio", "x_{m,1} ~ x_{m,2}, x_{m,C} = sum_{n=2}^m 1/(log n + C)",
                        pts, lambda m: sq.x1[m - 1] / sq.x2[m - 1])
    if rec.status is Status.VERIFIED:
        dominated = bool(np.all(sq.q[1:] >= sq.x1[1:]) and np.all(sq.x1[1:] >= sq.x2[1:]))
        if not dominated:
            return _record(rec.claim_id, rec.statement, False, **rec.witness, dominated=False)
    return rec


def _claim_good_integers() -> ClaimRecord:
    bad = [n for n in range(1, GOOD_INTEGER_AUDIT_MAX + 1)
           if good_integer(n).value != good_integer_closed_form(n)]
    first = [good_integer(n).value for n in range(1, 6)]
    return _record("good_integers", "M_1 = 1, M_n = n M_{n-1}^2 = prod_{j=2}^n j^(2^(n-j))",
                   not bad, checked_upto=GOOD_INTEGER_AUDIT_MAX, first_five=first, mismatches=bad)


def _claim_sieve_recurrence() -> ClaimRecord:
    n = SIEVE_AUDIT_N
    M = good_integer(n).value
    trace = explicit_sieve(n, M, keep_elements=False)
    pipeline = cardinality_pipeline(n, M)
    exact = [e.value * M for e in exact_sequence(n)]
    ok = trace.cardinalities() == pipeline.cardinalities() == exact
    return _record("sieve_recurrence",
                   "|A_k| = |A_{k-1}| - |A_{k-1}|^2/(k M) exactly, and |A_k|/M = a_k",
                   ok, n=n, M=M, A=trace.cardinalities(), C=[s.C for s in trace.steps])


def _claim_s_constant(const: ConstantEstimates) -> ClaimRecord:
    ref, ulp = REFERENCE.s_ref, 10.0 ** -REFERENCE.s_ref_digits
    literal = const.S_low <= ref <= const.S_high
    # consistent with the printed digits under rounding or truncation
    consistent = const.S_high >= ref - ulp / 2 and const.S_low < ref + ulp
    return _record("s_constant", "sum_{k>=2} a_{k-1}/(k(k-a_{k-1})) = S ~ 0.662834",
                   consistent, terms=const.terms, low=const.S_low, high=const.S_high,
                   reference=ref, interval_contains_reference=literal)


def _pi_claims(sq: _Sequence, pis: dict[int, int], const: ConstantEstimates) -> list[ClaimRecord]:
    cps = sorted(pis)
    pan_pts = [n for n in cps if n >= PANAITOPOL_LOWER_FROM]
    rs_pts = [n for n in cps if n >= RS_LOWER_FROM]
    out = []

    def envelope(claim_id, statement, pts, bounds):
        if not pts:
            return _record(claim_id, statement, None, reason="no checkpoint in the applicability range")
        rows, ok = [], True
        for n in pts:
            bp = bounds(n)
            inside = bp.contains(pis[n])
            ok &= inside
            rows.append({"n": n, "low": bp.low, "pi": pis[n], "high": bp.high, "inside": inside})
        return _record(claim_id, statement, ok, checks=rows)

    out.append(envelope("panaitopol",
                        "x/(log x - 1 + 1/sqrt(log x)) < pi(x) < x/(log x - 1 - 1/sqrt(log x)), x >= 59",
                        pan_pts, panaitopol_bounds))
    out.append(envelope("rosser_schoenfeld", "x/(log x - 1/2) < pi(x) < x/(log x - 3/2), x >= 67",
                        rs_pts, rosser_schoenfeld_bounds))

    def pointwise(claim_id, statement, check, extra_ok=True, **extra):
        if not pan_pts:
            return _record(claim_id, statement, None, reason="no checkpoint n >= 59")
        rows = [check(n) for n in pan_pts]
        ok = all(r["holds"] for r in rows) and extra_ok
        return _record(claim_id, statement, ok, checks=rows, **extra)

    def inv_a(n):
        return 1.0 / sq.at(n, K.COL_A)

    def log_gap(n):
        lhs = abs(n / pis[n] - math.log(n) + 1.0)
        rhs = 1.0 / math.sqrt(math.log(n))
        return {"n": n, "lhs": lhs, "rhs": rhs, "margin": rhs - lhs, "holds": lhs <= rhs}

    def gap_bound(n):
        lhs = abs(inv_a(n) - n / pis[n])
        rhs = 2.0 + GAMMA + 1.0 / math.sqrt(math.log(n))
        return {"n": n, "lhs": lhs, "rhs": rhs, "margin": 3.0 - lhs,
                "holds": lhs <= rhs and lhs < 3.0}

    def gap_limit(n):
        gap = inv_a(n) - n / pis[n]
        b = inv_a(n) - math.log(n)
        half = 1.0 / math.sqrt(math.log(n))
        lo, hi = b + 1.0 - half, b + 1.0 + half
        return {"n": n, "gap": gap, "low": lo, "high": hi,
                "distance_to_reference": abs(gap - REFERENCE.limit_gap), "holds": lo <= gap <= hi}

    out.append(pointwise("pi_log_gap", "|n/pi(n) - log n + 1| <= 1/sqrt(log n), n >= 59", log_gap))
    out.append(pointwise("gap_bound", "|1/a_n - n/pi(n)| <= 2 + gamma + 1/sqrt(log n) < 3, n >= 59",
                         gap_bound))
    const_ok = abs(const.gammaS1_hat - REFERENCE.limit_gap) < CONSTANT_TOL
    out.append(pointwise("gap_limit",
                         "1/a_n - n/pi(n) tends to gamma + S + 1 ~ 2.24005; finite form: "
                         "gap in (b_n + 1) +- 1/sqrt(log n)",
                         gap_limit, extra_ok=const_ok, gammaS1_hat=const.gammaS1_hat,
                         reference=REFERENCE.limit_gap))

    trend_pts = [n for n in decades(TREND_FROM, cps[-1]) if n in pis]
    out.append(_trend_record("c_pi", "c(n) ~ pi(n)", trend_pts,
                             lambda n: sq.at(n, K.COL_C) / pis[n]))
    out.append(_trend_record("na_pi", "pi(n) ~ n a_n", trend_pts,
                             lambda n: n * sq.at(n, K.COL_A) / pis[n]))
    out.append(_trend_record("q_pi", "pi(n) ~ q(n) = sum_{k=2}^n 1/log k", trend_pts,
                             lambda n: sq.at(n, K.COL_Q) / pis[n]))
    return out


def claims_audit(limit: int, checkpoints: Sequence[int] | None = None, cache: PiCache | None = None,
                 workers: int = 1, s_terms: int = S_TERMS) -> AuditReport:
    """Evaluate every claim; sequence-local claims over n <= min(limit, 10^6)."""
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    cps = default_checkpoints(limit) if checkpoints is None else sorted(set(int(c) for c in checkpoints))
    if cps and (cps[0] < 2 or cps[-1] > limit):
        raise ValueError(f"checkpoints must lie in [2, {limit}]")
    sq = _Sequence(min(limit, SEQ_LOCAL_MAX), cps)
    pis = {p.n: p.pi for p in pi_values(cps, cache=cache, workers=workers)} if cps else {}
    const = constant_estimates(s_terms)
    claims = [
        _claim_bracket(sq),
        _claim_b_bounds(sq),
        _claim_b_increasing(sq),
        _claim_b_limit(sq, const),
        _claim_harmonic(sq),
        _claim_squeeze(sq),
        _claim_reciprocal_step(sq),
        _claim_reciprocal_sum(sq),
        _claim_recip_log(sq),
        _claim_shift_ratio(sq),
        _claim_good_integers(),
        _claim_sieve_recurrence(),
        verify_frequency_equivalence(SIEVE_AUDIT_N, 2),
        _claim_s_constant(const),
        *_pi_claims(sq, pis, const),
    ]
    return AuditReport(limit, cps, claims)


def expected_statuses(limit: int, checkpoints: Sequence[int]) -> dict[str, Status]:
    """What a correct audit must report, from the input ranges alone."""
    V, I = Status.VERIFIED, Status.INCONCLUSIVE
    N = min(limit, SEQ_LOCAL_MAX)
    cps = sorted(checkpoints)

    def when(cond: bool) -> Status:
        return V if cond else I

    seq_decades = len(decades(10, N)) >= 2
    pi_decades = len([n for n in decades(TREND_FROM, cps[-1] if cps else 0) if n in cps]) >= 2
    pan = any(n >= PANAITOPOL_LOWER_FROM for n in cps)
    return {
        "b_bounds": when(N >= 2),
        "b_increasing": Status.VIOLATED if N >= 3 else I,
        "b_limit": when(N >= 2),
        "c_pi": when(pi_decades),
        "frequency_bracket": when(N >= 2),
        "gap_bound": when(pan),
        "gap_limit": when(pan),
        "good_integers": V,
        "harmonic_bracket": V,
        "na_pi": when(pi_decades),
        "panaitopol": when(pan),
        "pi_log_gap": when(pan),
        "q_pi": when(pi_decades),
        "recip_log": when(seq_decades),
        "reciprocal_step": when(N >= 2),
        "reciprocal_sum": when(N >= 2),
        "rosser_schoenfeld": when(any(n >= RS_LOWER_FROM for n in cps)),
        "s_constant": V,
        "shift_ratio": when(seq_decades),
        "sieve_homogeneity": V,
        "sieve_recurrence": V,
        "squeeze": when(N >= 2),
    }


def mismatches(report: AuditReport) -> dict[str, tuple[str, str]]:
    """Claims whose status differs from ``expected_statuses``."""
    want = {k: v.value for k, v in expected_statuses(report.limit, report.checkpoints).items()}
    got = {k: v.value for k, v in report.statuses().items()}
    return {k: (want.get(k, "missing"), got.get(k, "missing"))
            for k in sorted(set(want) | set(got)) if want.get(k) != got.get(k)}
