import json
import subprocess
import sys

import pytest

from primefreq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_freq_exact(capsys):
    code, out, _ = run(capsys, "freq", "--n", "4", "--exact")
    assert code == 0
    assert out == "n,a,inv_a,b\n4,215/576,576/215,1.2927754063219699\n"


def test_freq_one(capsys):
    code, out, _ = run(capsys, "freq", "--n", "1")
    assert code == 0
    assert out.splitlines()[1] == "1,1,1,1"


def test_freq_float_matches_fixed_point(capsys):
    _, fl, _ = run(capsys, "freq", "--n", "1000000", "--float")
    _, hp, _ = run(capsys, "freq", "--n", "1000000", "--precision", "128")
    a_float = fl.splitlines()[1].split(",")[1]
    a_hp = hp.splitlines()[1].split(",")[1]
    assert len(a_hp) > 30
    assert a_float[:14] == a_hp[:14]  # "0." + 12 digits
    assert abs(float(a_float) - float(a_hp)) < 1e-12


def test_freq_json(capsys):
    _, out, _ = run(capsys, "freq", "--n", "3", "--exact", "--format", "json")
    assert json.loads(out)[0]["a"] == "5/12"


def test_freq_cap_is_backend_error(capsys):
    code, _, err = run(capsys, "freq", "--n", "30", "--exact")
    assert code == 3 and "exact mode limit" in err


def test_freq_modes_exclusive(capsys):
    with pytest.raises(SystemExit) as info:
        main(["freq", "--n", "4", "--exact", "--float"])
    assert info.value.code == 2


def test_sieve(capsys):
    code, out, _ = run(capsys, "sieve", "--n", "4")
    assert code == 0
    assert [line.split(",")[2] for line in out.splitlines()[1:]] == ["576", "288", "240", "215"]
    _, out, _ = run(capsys, "sieve", "--n", "1")
    assert out.splitlines()[1:] == ["1,1,1,1,0,1"]
    _, out, _ = run(capsys, "sieve", "--n", "4", "--multiplier", "2")
    assert out.splitlines()[-1].split(",")[2] == "430"


def test_sieve_explicit_json(capsys):
    _, out, _ = run(capsys, "sieve", "--n", "3", "--explicit", "--format", "json")
    data = json.loads(out)
    assert data["M"] == 12 and [s["A"] for s in data["steps"]] == [12, 6, 5]


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "--checkpoints", "100,1000")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()]
    assert rows[0] == ["n", "a_n", "c_n", "pi_n", "ratio_c_pi", "ratio_na_pi", "gap"]
    assert [r[3] for r in rows[1:]] == ["25", "168"]
    _, out, _ = run(capsys, "compare", "--checkpoints", "2")
    assert out.splitlines()[1].split(",")[2:4] == ["1.5", "1"]


def test_compare_sorts_checkpoints(capsys):
    _, out, _ = run(capsys, "compare", "--checkpoints", "1000,100,1e3")
    assert [line.split(",")[0] for line in out.splitlines()[1:]] == ["100", "1000"]


@pytest.mark.parametrize("argv", [
    ["compare", "--checkpoints", ""],
    ["compare", "--checkpoints", "1,10"],
    ["audit", "--limit", "10", "--bogus"],
    ["audit", "--limit", "abc"],
    ["audit", "--limit", "100", "--checkpoints", "1000"],
    ["freq"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_audit_exit_codes(capsys):
    code, out, _ = run(capsys, "audit", "--limit", "100000")
    assert code == 0
    assert json.loads(out)["limit"] == 100000
    code, out, _ = run(capsys, "audit", "--limit", "10")
    assert code == 0
    statuses = {c["claim_id"]: c["status"] for c in json.loads(out)["claims"]}
    assert statuses["panaitopol"] == "INCONCLUSIVE"


def test_cache_flag(tmp_path, capsys):
    path = tmp_path / "pi.csv"
    _, first, _ = run(capsys, "compare", "--checkpoints", "100,1000", "--cache", str(path))
    assert path.read_text().startswith("n,pi,method\n")
    _, second, _ = run(capsys, "compare", "--checkpoints", "100,1000", "--cache", str(path))
    assert first == second


def test_cache_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PRIMEFREQ_CACHE_DIR", str(tmp_path))
    run(capsys, "compare", "--checkpoints", "100")
    assert (tmp_path / "pi_cache.csv").read_text() == "n,pi,method\n100,25,segmented\n"


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "primefreq", "freq", "--n", "2", "--exact"],
                         capture_output=True, text=True, check=True).stdout
    assert out == "n,a,inv_a,b\n2,1/2,2,1.3068528194400546\n"
