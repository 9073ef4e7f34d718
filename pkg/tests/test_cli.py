import json
import subprocess
import sys

import pytest

from gac.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants_e2(capsys):
    code, out, _ = run(capsys, "invariants", "e2.txt")
    assert code == 0
    assert out.strip() == "K0 = 0, K1 = 0, det sign = -, singular = 0"


def test_invariants_leavitt_json(capsys):
    code, out, _ = run(capsys, "invariants", "inf_pair.txt", "--algebra", "leavitt",
                       "--field", "C", "--json")
    data = json.loads(out)
    assert code == 0 and data["k1_algebraic"]["display"] == "D^1" and data["k0"]["free_rank"] == 1


def test_classify_exit_codes(capsys):
    code, out, _ = run(capsys, "classify", "e2.txt", "e2cs.txt", "--regime", "leavitt",
                       "--field", "C")
    assert code == 2 and "Open Question 1" in out
    code, out, _ = run(capsys, "classify", "e2.txt", "e2cs.txt", "--regime", "cstar")
    assert code == 0 and "rordam" in out
    code, _, _ = run(capsys, "classify", "e2.txt", "example.txt", "--regime", "flow")
    assert code == 0


def test_classify_not_equivalent(capsys, tmp_path):
    three = tmp_path / "three.txt"
    three.write_text("vertices: v\nedge v v 3\n")
    code, _, _ = run(capsys, "classify", "e2.txt", str(three))
    assert code == 1


def test_classify_hypothesis_error(capsys, tmp_path):
    loop = tmp_path / "loop.txt"
    loop.write_text("vertices: v\nedge v v 1\n")
    code, _, err = run(capsys, "classify", "e2.txt", str(loop))
    assert code == 3 and "simple" in err
    code, _, _ = run(capsys, "classify", "e2.txt", str(loop), "--assume-simple")
    assert code in (0, 1, 2)


def test_classify_k6(capsys):
    code, out, _ = run(capsys, "classify", "inf_loop.txt", "inf_pair.txt", "--regime", "leavitt",
                       "--field", "numberfield:K", "--k6-a", "Z/2", "--k6-b", "Z/2")
    assert code == 0 and "K6" in out
    code, _, _ = run(capsys, "classify", "inf_loop.txt", "inf_pair.txt", "--regime", "leavitt",
                     "--field", "numberfield:K", "--k6-a", "Z/2")
    assert code == 3


def test_move(capsys):
    code, out, _ = run(capsys, "move", "e2.txt", "--move", "O", "--at", "v",
                       "--partition", "e:v->v=1|1")
    assert code == 0 and "edge v_1 v_2 1" in out
    code, out, _ = run(capsys, "move", "example.txt", "--move", "CS", "--at", "v", "--json")
    data = json.loads(out)
    assert len(data["graph"]["vertices"]) == 4
    code, _, err = run(capsys, "move", "e2.txt", "--move", "S", "--at", "v")
    assert code == 3 and "source" in err


def test_search_and_check_path(capsys, tmp_path):
    cert = tmp_path / "path.json"
    code, out, _ = run(capsys, "search", "e2.txt", "square.txt", "-o", str(cert))
    assert code == 0 and "path of length 1" in out and "O at v" in out
    code, out, _ = run(capsys, "check-path", str(cert))
    assert code == 0 and "valid" in out
    data = json.loads(cert.read_text())
    data["steps"][0]["partition"][0]["mult"] = [2, 0]
    cert.write_text(json.dumps(data))
    code, out, _ = run(capsys, "check-path", str(cert))
    assert code == 1 and "invalid" in out


def test_search_inconclusive(capsys):
    code, out, _ = run(capsys, "search", "e2.txt", "e2cs.txt")
    assert code == 2 and "inconclusive at bounds" in out
    code, out, _ = run(capsys, "search", "e2.txt", "e2cs.txt", "--allow-cs", "--json")
    assert code == 0 and json.loads(out)["found"]


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "invariants", "missing.txt")[0] == 3
    bad = tmp_path / "bad.txt"
    bad.write_text("edge v v 2\n")
    code, _, err = run(capsys, "invariants", str(bad))
    assert code == 3 and "undeclared vertex" in err
    assert run(capsys, "frobnicate")[0] == 3
    assert run(capsys, "invariants", "e2.txt", "--algebra", "leavitt", "--field", "F_6")[0] == 3


def test_vertex_bound_from_environment(capsys, tmp_path, monkeypatch):
    g = tmp_path / "g.txt"
    g.write_text("vertices: a b c\nedge a b 1\nedge b c 1\nedge c a 2\n")
    monkeypatch.setenv("GAC_MAX_VERTICES", "2")
    assert run(capsys, "invariants", str(g))[0] == 3


def test_demo_is_deterministic(capsys):
    first = run(capsys, "demo")
    second = run(capsys, "demo")
    assert first[0] == 0 and first == second
    assert "O_8: K0 = Z/7" in first[1]
    assert json.loads(run(capsys, "demo", "--json")[1])["demo"]


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "gac.cli", "invariants", "e2.txt"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "det sign = -" in proc.stdout


@pytest.mark.parametrize("verb", ["invariants", "classify", "move", "search", "check-path", "demo"])
def test_help(capsys, verb):
    assert main([verb, "--help"]) == 0
