import json
import subprocess
import sys

from askeywilson.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_weyl(capsys):
    code, out, err = run(capsys, "verify", "weyl", "--no-timing", "--jobs", "1")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    group = next(r for r in rows if r["check"] == "weyl.group")
    assert group["params"]["order"] == 192
    assert all(r["status"] == "PASS" for r in rows)
    assert "PASS=11" in err


def test_verify_is_deterministic(capsys):
    first = run(capsys, "verify", "weyl", "--no-timing", "--jobs", "1")[1]
    second = run(capsys, "verify", "weyl", "--no-timing", "--jobs", "2")[1]
    assert first == second


def test_verify_writes_json_file(capsys, tmp_path):
    path = tmp_path / "out.jsonl"
    code, out, _ = run(capsys, "verify", "weyl", "--no-timing", "--json", str(path))
    assert code == 0 and not out
    assert len(path.read_text().splitlines()) == 11


def test_unknown_suite_is_config_error(capsys):
    assert run(capsys, "verify", "bogus")[0] == 2


def test_bad_flag_is_usage_error(capsys):
    assert run(capsys, "verify", "weyl", "--frobnicate")[0] == 2


def test_weyl_orbit(capsys):
    code, out, _ = run(capsys, "weyl", "orbit", "--m", "1,3,7,19")
    lines = out.split()
    assert code == 0 and lines[0] == "192" and len(lines) == 193


def test_skein_product(capsys):
    code, out, _ = run(capsys, "skein", "product", "--x", "A12", "--y", "A23")
    assert code == 0 and out.strip() == "(1)*A12*A23"


def test_expand_n4_product(capsys):
    code, out, _ = run(capsys, "expand", "--product", "Q13d*Q24d", "--dims", "2,2,2,2")
    assert code == 0
    assert "(qh^4)*Q14d*Q23" in out and "(-qh^-2 - qh^2)*Q1234" in out


def test_dump_daha_rules(capsys):
    code, out, _ = run(capsys, "dump-rules", "daha", "--max-length", "4")
    rules = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert {"lhs": "t0*t0", "origin": "axiom t0^2", "rhs": "(-1)*1 + (1)*t0*Z0"} in rules


def test_dump_aw3_rules(capsys):
    code, out, _ = run(capsys, "dump-rules", "aw3")
    assert code == 0 and out.strip()


def test_failing_suite_exits_one():
    proc = subprocess.run([sys.executable, "-m", "askeywilson.cli", "verify", "sdet",
                           "--no-timing"], capture_output=True, text=True)
    assert proc.returncode == 1
    assert '"reflection.sdet.printed"' in proc.stdout
