import json
import subprocess
import sys

import pytest

from areawalk import cli
from areawalk.enumerator import EnumerationConfig, closed_area_histogram
from areawalk.tables import ReferenceColumn, reference_columns


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_n16(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "16")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "n,p,q,s,count"
    assert len(lines) == 1 + 17
    assert lines[1] == "16,0,0,0,33820044"
    assert lines[-1] == "16,0,0,16,16"


def test_enumerate_odd(capsys):
    code, out, err = run(capsys, "enumerate", "--n", "3")
    assert code == 0
    assert out.splitlines() == ["n,p,q,s,count"]
    assert "no closed walks for odd n" in err


def test_enumerate_endpoint_signed(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "4", "--endpoint", "1,1", "--signed")
    assert code == 0
    assert out.splitlines()[1:] == ["4,1,1,-1,2", "4,1,1,0,10", "4,1,1,1,10", "4,1,1,2,2"]


@pytest.mark.parametrize("fmt", ["csv", "json"])
@pytest.mark.parametrize("signed", [False, True])
def test_output_round_trip(capsys, fmt, signed):
    argv = ["enumerate", "--n", "24", "--format", fmt] + (["--signed"] if signed else [])
    _, out, _ = run(capsys, *argv)
    parsed = cli.parse_records(out, fmt)
    want = closed_area_histogram(24)
    if not signed:
        want.counts = {s: c for s, c in want.counts.items() if s >= 0}
    assert parsed.counts == want.counts
    assert parsed.n == 24 and tuple(parsed.endpoint) == (0, 0)


def test_json_metadata(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "enumerate", "--n", "20", "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    doc = json.loads(target.read_text())
    assert doc["strategy"] == "iterative" and doc["mode"] == "modular"
    assert len(doc["prime_basis"]) == 2
    assert all(isinstance(r["count"], str) for r in doc["counts"])
    assert [r["s"] for r in doc["counts"]] == sorted(r["s"] for r in doc["counts"])


def test_bigint_json_has_no_basis(capsys):
    _, out, _ = run(capsys, "enumerate", "--n", "8", "--mode", "bigint", "--format", "json")
    assert json.loads(out)["prime_basis"] is None


def test_flag_errors_exit_2(capsys):
    for argv in (["enumerate"], ["enumerate", "--n", "0"], ["enumerate", "--n", "4", "--endpoint", "1"],
                 ["enumerate", "--n", "4", "--threads", "0"], ["verify", "--n", "30"],
                 ["verify", "--n", "4", "--oracle-cap", "25"]):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 2


def test_resource_refusal_exit_3(capsys):
    code, _, err = run(capsys, "enumerate", "--n", "64", "--memory-limit", "1")
    assert code == 3 and "exceeds the limit" in err


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2")
    assert code == 0 and "13 monomials compared" in out
    code, out, _ = run(capsys, "verify", "--n", "10")
    assert code == 0 and "OK" in out


def test_verify_mismatch_exit_1(capsys, monkeypatch):
    import areawalk.enumerator as en

    real = en.full_series_counts
    monkeypatch.setattr(en, "full_series_counts", lambda n, cfg: {**real(n, cfg), (9, 9, 9): 1})
    code, out, _ = run(capsys, "verify", "--n", "3")
    assert code == 1 and "first mismatch at (9, 9, 9)" in out


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "83 reference values checked" in out


def test_selftest_tampered(capsys, monkeypatch):
    cols = reference_columns()
    rows = list(cols[1].rows)
    rows[5] = (rows[5][0], 12345)
    cols[1] = ReferenceColumn(cols[1].name, cols[1].n, tuple(rows))
    import areawalk.enumerator as en

    monkeypatch.setattr(en, "reference_columns", lambda: cols)
    code, out, _ = run(capsys, "selftest")
    assert code == 1
    assert "sampled n=32 s=10: expected 12345" in out


def test_primes(capsys):
    code, out, _ = run(capsys, "primes", "--n", "128")
    lines = out.splitlines()
    primes = [int(l) for l in lines[:-1]]
    assert code == 0 and len(primes) >= 9 and len(set(primes)) == len(primes)
    assert "ok=True" in lines[-1]
    code, out, _ = run(capsys, "primes", "--n", "1")
    assert int(out.splitlines()[0]) > 4


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("AREAWALK_THREADS", "3")
    seen = {}
    real = cli._config

    def spy(args):
        cfg = real(args)
        seen["threads"] = cfg.threads
        return cfg

    monkeypatch.setattr(cli, "_config", spy)
    run(capsys, "enumerate", "--n", "8")
    assert seen["threads"] == 3
    monkeypatch.setenv("AREAWALK_THREADS", "zero")
    with pytest.raises(SystemExit):
        cli.main(["enumerate", "--n", "8"])


def test_checkpoint_flag(capsys, tmp_path):
    code, first, _ = run(capsys, "enumerate", "--n", "24", "--checkpoint", str(tmp_path))
    assert code == 0 and len(list(tmp_path.iterdir())) == 2
    _, second, _ = run(capsys, "enumerate", "--n", "24", "--checkpoint", str(tmp_path))
    assert first == second


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "areawalk.cli", "enumerate", "--n", "8"],
                         capture_output=True, text=True, check=True).stdout
    assert out.splitlines()[1] == "8,0,0,0,2156"
