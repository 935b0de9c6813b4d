import json
import math

import pytest

from primefreq import analysis
from primefreq.analysis import (
    claims_audit,
    comparison_table,
    constant_estimates,
    default_checkpoints,
    expected_statuses,
    gap_estimate,
    mismatches,
    rows_to_csv,
    trend_toward_one,
)
from primefreq.constants import GAMMA
from primefreq.core_seq import exact_sequence
from primefreq.report import AuditReport, ClaimRecord, Status


@pytest.fixture(scope="module")
def report_1e5():
    return claims_audit(10**5)


def test_comparison_rows():
    r2, r100 = comparison_table([2, 100])
    assert (r2.c_n, r2.pi_n, r2.a_n) == (1.5, 1, 0.5)
    assert r2.gap == 1 / 0.5 - 2 / 1
    assert r100.pi_n == 25
    exact_c = sum(e.numerator / e.denominator for e in exact_sequence(24))
    # c(100) exceeds c(24) by at most 76 * a_24
    a24 = exact_sequence(24)[-1]
    assert exact_c < r100.c_n < exact_c + 76 * a24.numerator / a24.denominator
    assert all(math.isfinite(v) for v in (r100.ratio_c_pi, r100.ratio_na_pi, r100.gap))


def test_comparison_rejects_bad_input():
    with pytest.raises(ValueError):
        comparison_table([])
    with pytest.raises(ValueError):
        comparison_table([1, 10])


def test_comparison_csv():
    text = rows_to_csv(comparison_table([2, 10]))
    lines = text.splitlines()
    assert lines[0] == "n,a_n,c_n,pi_n,ratio_c_pi,ratio_na_pi,gap"
    assert lines[1].startswith("2,0.5,1.5,1,1.5,")
    assert text.endswith("\n")


def test_decade_ratios_increase():
    rows = comparison_table([10**k for k in range(3, 7)])
    c = [r.ratio_c_pi for r in rows]
    na = [r.ratio_na_pi for r in rows]
    assert c == sorted(c) and na == sorted(na)
    assert all(abs(r.gap) < 3 for r in rows)


@pytest.mark.parametrize("n", [59, 100, 10**4, 10**6])
def test_gap_estimate_containment(n):
    gap, (lo, hi) = gap_estimate(n)
    assert lo <= gap <= hi
    assert hi - lo == pytest.approx(2 / math.sqrt(math.log(n)))


def test_gap_estimate_threshold():
    with pytest.raises(ValueError):
        gap_estimate(58)


def test_constant_estimates():
    est = constant_estimates()
    assert est.S_high - est.S_low < 1e-7
    assert abs(est.gammaS_hat - 1.24005) < 5e-5
    assert est.gammaS1_hat == pytest.approx(est.gammaS_hat + 1.0, abs=1e-15)
    assert est.gammaS_hat == pytest.approx(est.S_hat + GAMMA, abs=1e-15)


def test_constant_interval_against_reference():
    est = constant_estimates()
    # the series value sits above the printed 0.662834 by more than the interval width
    assert est.S_low > 0.662834
    assert round(est.S_hat, 6) == 0.662835
    assert math.floor(est.S_hat * 1e6) / 1e6 == 0.662834


def test_trend_rule():
    assert trend_toward_one([0.8, 0.9, 0.95])
    assert trend_toward_one([1.2, 1.1, 1.01])
    assert not trend_toward_one([0.8, 0.9, 0.89])
    assert not trend_toward_one([0.8, 1.3])
    assert not trend_toward_one([0.9])


def test_default_checkpoints():
    assert default_checkpoints(10) == [10]
    assert default_checkpoints(1000) == [10, 59, 67, 100, 1000]
    assert default_checkpoints(1) == []


def test_audit_statuses(report_1e5):
    statuses = report_1e5.statuses()
    assert statuses.pop("b_increasing") is Status.VIOLATED
    assert set(statuses.values()) == {Status.VERIFIED}
    assert mismatches(report_1e5) == {}


def test_audit_covers_every_claim(report_1e5):
    assert set(report_1e5.statuses()) == set(expected_statuses(10**5, report_1e5.checkpoints))


def test_b_increasing_witness(report_1e5):
    rec = next(c for c in report_1e5.claims if c.claim_id == "b_increasing")
    w = rec.witness
    assert w["n"] == 3
    assert w["rhs"] == pytest.approx(2 - math.log(2), abs=1e-15)
    assert w["lhs"] == pytest.approx(12 / 5 - math.log(3), abs=1e-15)
    assert w["lhs"] < w["rhs"]
    assert w["decreasing_on_3_to_N"] is True


def test_violated_records_carry_witness(report_1e5):
    for c in report_1e5.claims:
        if c.status is Status.VIOLATED:
            assert {"n", "lhs", "rhs", "margin"} <= set(c.witness)


def test_small_limit_inconclusive():
    rep = claims_audit(10)
    st = rep.statuses()
    for cid in ("panaitopol", "rosser_schoenfeld", "gap_bound", "gap_limit", "pi_log_gap",
                "c_pi", "na_pi", "q_pi"):
        assert st[cid] is Status.INCONCLUSIVE
    assert st["b_increasing"] is Status.VIOLATED
    assert mismatches(rep) == {}


def test_final_item_two_at_59():
    rep = claims_audit(59, checkpoints=[59])
    rec = next(c for c in rep.claims if c.claim_id == "gap_bound")
    assert rec.status is Status.VERIFIED
    assert rec.witness["checks"][0]["lhs"] < 3


def test_audit_deterministic():
    a = claims_audit(2000).to_json()
    b = claims_audit(2000, workers=3).to_json()
    assert a == b
    json.loads(a)


def test_mismatch_detection():
    rep = claims_audit(100)
    tampered = AuditReport(rep.limit, rep.checkpoints,
                           [c if c.claim_id != "b_increasing" else
                            ClaimRecord(c.claim_id, c.statement, Status.VERIFIED, {})
                            for c in rep.claims])
    assert mismatches(tampered) == {"b_increasing": ("VIOLATED", "VERIFIED")}
    dropped = AuditReport(rep.limit, rep.checkpoints, rep.claims[1:])
    assert list(mismatches(dropped).values()) == [("VERIFIED", "missing")]


def test_duplicate_claims_rejected():
    rec = ClaimRecord("x", "x", Status.VERIFIED)
    with pytest.raises(ValueError):
        AuditReport(1, [], [rec, rec])


def test_violation_is_caught(monkeypatch):
    # shifting gamma breaks the harmonic bracket; the audit must notice
    monkeypatch.setattr(analysis, "GAMMA", GAMMA + 0.01)
    rep = claims_audit(1000)
    assert rep.status_of("harmonic_bracket") is Status.VIOLATED
    assert "harmonic_bracket" in mismatches(rep)
