import io
import json

import pytest

from conftest import SG4
from frobkill.cli import run_command


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def ring(tmp_path):
    path = tmp_path / "sg4.ring"
    path.write_text(SG4.format(p=2))
    return path


def test_hilbert(ring):
    code, out, _ = run("hilbert", ring, "--degrees", "0..4")
    assert code == 0
    assert [line.split("\t")[1] for line in out.splitlines()] == ["1", "4", "9", "13", "17"]


def test_lc_table(ring, tmp_path):
    code, out, _ = run("lc", ring, "--i", 1, "--degrees", "-2..4", "--out", tmp_path / "c.json")
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines() if line[:1].isdigit() or line[:1] == "-"]
    assert {int(t): int(d) for t, d, _ in rows} == {t: int(t == 1) for t in range(-2, 5)}
    classes = json.loads((tmp_path / "c.json").read_text())["classes"]
    assert len(classes) == 1 and classes[0]["degree"] == 1


def test_frob_auto_and_class(ring, tmp_path):
    code, out, _ = run("frob", ring, "--i", 1, "--auto")
    assert code == 0 and "g(T) = T^2" in out
    run("lc", ring, "--i", 1, "--out", tmp_path / "c.json")
    code, out2, _ = run("frob", ring, "--i", 1, "--class", tmp_path / "c.json")
    assert code == 0 and out2 == out


def test_kill_verify_roundtrip(ring, tmp_path):
    cert = tmp_path / "cert.kc"
    code, out, _ = run("kill", ring, "--i", 1, "--out", cert)
    assert code == 0 and "level = Z1_1" in out
    code, out, _ = run("verify", cert, ring)
    assert code == 0 and out.strip().endswith("OK")


def test_single_class_certificate(ring, tmp_path):
    run("lc", ring, "--i", 1, "--out", tmp_path / "c.json")
    code, _, _ = run("kill", ring, "--i", 1, "--class", tmp_path / "c.json", "--out", tmp_path / "k.kc")
    assert code == 0
    assert run("verify", tmp_path / "k.kc", ring)[0] == 0


def test_deterministic_output(ring, tmp_path):
    run("kill", ring, "--i", 1, "--out", tmp_path / "a.kc")
    run("kill", ring, "--i", 1, "--out", tmp_path / "b.kc")
    assert (tmp_path / "a.kc").read_bytes() == (tmp_path / "b.kc").read_bytes()


def test_trivialize(ring, tmp_path):
    code, out, _ = run("trivialize", ring, "--params", "a,d", "--witness", "b^2", "--out", tmp_path / "t.kc")
    assert code == 0 and "cofactors =" in out
    assert run("verify", tmp_path / "t.kc", ring)[0] == 0


def test_exit_codes(ring, tmp_path):
    code, _, err = run("kill", ring, "--i", 2)
    assert code == 2 and json.loads(err)["error"] == "precondition"
    bad = tmp_path / "bad.ring"
    bad.write_text("p = 4\nvars = x\n")
    code, _, err = run("lc", bad, "--i", 0)
    assert code == 5 and json.loads(err)["error"] == "parse"
    bad.write_text("p = 3\nvars = x, y\nideal = x^2-y\n")
    code, _, err = run("lc", bad, "--i", 0)
    assert code == 5 and "inhomogeneous" in json.loads(err)["message"]
    junk = tmp_path / "junk.kc"
    junk.write_text("{not json")
    assert run("verify", junk, ring)[0] == 4
    junk.write_text("[1, 2]")
    assert run("verify", junk, ring)[0] == 4
    assert run("lc", ring)[0] == 5


def test_time_budget(ring, monkeypatch):
    monkeypatch.setenv("CHARP_KILL_BUDGET_MS", "0")
    code, _, err = run("kill", ring, "--i", 1)
    assert code == 3 and json.loads(err)["error"] == "budget"


def test_pair_cap(ring):
    code, _, err = run("kill", ring, "--i", 1, "--pair-cap", 1)
    assert code == 3 and "pair budget" in json.loads(err)["message"]
