import io
import json
import subprocess
import sys

import pytest

from nervekit.cli import main
from nervekit.nerve import CAP_ENV


def run(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def session(tmp_path):
    path = str(tmp_path / "dialogue.json")
    code, _, _ = run("init", path, "--worlds", "1,2,3", "--atom", "p=1,2", "--atom", "q=2,3",
                     "--measure", "1=0.2,2=0.5,3=0.3")
    assert code == 0
    return path


@pytest.fixture
def worked(session):
    for f in ("p", "q", "!p"):
        assert run("assert", session, f)[0] == 0
    return session


def test_init_refuses_overwrite(session):
    code, _, err = run("init", session, "--worlds", "a")
    assert code == 3 and "exists" in err
    assert run("init", session, "--worlds", "a", "--force")[0] == 0


def test_init_world_limit(tmp_path):
    path = str(tmp_path / "big.json")
    worlds = ",".join(str(i) for i in range(20))
    assert run("init", path, "--worlds", worlds, "--max-worlds", "10")[0] == 3
    assert run("init", path, "--worlds", worlds, "--max-worlds", "20")[0] == 0


def test_init_bad_measure(tmp_path):
    path = tmp_path / "m.json"
    code, _, err = run("init", str(path), "--worlds", "a,b", "--measure", "a=0.5,b=0.4")
    assert code == 3 and "not normalized" in err
    assert not path.exists()


def test_assert_reports(session):
    code, out, _ = run("assert", session, "p")
    assert code == 0 and "simplices 2" in out
    run("assert", session, "q")
    code, out, _ = run("assert", session, "!p")
    assert "simplices 6" in out and "breaks consistent group {1,2}" in out


def test_assert_contradiction_warns(session):
    code, _, err = run("assert", session, "p & !p")
    assert code == 0 and "contradictory" in err


def test_nerve_views(worked):
    assert run("nerve", worked)[1].strip() == "{1,2} {2,3}"
    assert run("nerve", worked, "--full")[1].strip() == "{} {1} {2} {3} {1,2} {2,3}"
    assert run("nerve", worked, "--minimal-inconsistent")[1].strip() == "{1,3}"
    doc = json.loads(run("nerve", worked, "--structured")[1])
    assert doc == {"n": 3, "simplex_count": 6, "facets": [[1, 2], [2, 3]]}


def test_consistent_exit_codes(worked):
    assert run("consistent", worked, "1,2")[0] == 0
    code, out, _ = run("consistent", worked, "1,3")
    assert code == 1 and "{1,3}" in out
    assert run("consistent", worked, "")[0] == 0
    assert run("consistent", worked, "1,7")[0] == 3


def test_entails(worked):
    assert run("entails", worked, "--premises", "1,2", "p & q")[0] == 0
    assert run("entails", worked, "--premises", "1,2", "!p")[0] == 1
    code, out, err = run("entails", worked, "--premises", "1,3", "q")
    assert code == 0 and "warning" in err and "{1,3}" in err
    code, out, _ = run("entails", worked, "--premises", "1,3", "q", "--structured")
    assert json.loads(out)["warnings"]


def test_rank(worked):
    code, out, _ = run("rank", worked, "--premises", "1,2", "--candidates", "p|q; q; p&q; !q")
    lines = out.strip().splitlines()[1:]
    assert [line.split(None, 2)[2] for line in lines] == ["(p & q)", "q", "(p | q)"]
    assert lines[0].split()[:2] == ["0.6931", "0.5000"]
    doc = json.loads(run("rank", worked, "--premises", "1,2", "--enumerate", "--structured")[1])
    assert [c["extension"] for c in doc["consequences"]] == [["2"], ["1", "2"], ["2", "3"], ["1", "2", "3"]]


def test_rank_without_measure(tmp_path):
    path = str(tmp_path / "nm.json")
    run("init", path, "--worlds", "a,b", "--atom", "p=a")
    assert run("rank", path, "--candidates", "p")[0] == 3


def test_usage_errors(worked):
    assert run("consistent", worked, "one,two")[0] == 2
    assert run("rank", worked)[0] == 2
    assert run("bogus")[0] == 2


def test_failing_command_leaves_file(worked):
    before = open(worked, "rb").read()
    for argv in (["assert", worked, "p &"], ["assert", worked, "zz"]):
        assert run(*argv)[0] == 3
    assert open(worked, "rb").read() == before


def test_simplex_cap(worked, monkeypatch):
    assert run("--simplex-cap", "8", "assert", worked, "q")[0] == 3
    monkeypatch.setenv(CAP_ENV, "8")
    assert run("assert", worked, "q")[0] == 3
    monkeypatch.delenv(CAP_ENV)
    assert run("assert", worked, "q")[0] == 0


def test_missing_file(tmp_path):
    assert run("nerve", str(tmp_path / "nope.json"))[0] == 3


def test_repl_matches_batch(tmp_path):
    batch = str(tmp_path / "batch.json")
    inter = str(tmp_path / "inter.json")
    for path in (batch, inter):
        run("init", path, "--worlds", "1,2,3", "--atom", "p=1,2", "--atom", "q=2,3")
    commands = ["p", "q", "!p", "p | q"]
    for c in commands:
        run("assert", batch, c)
    script = "\n".join(f"assert {c}" for c in commands) + "\nconsistent 1,3\nnerve --full\nquit\n"
    code, out, err = run("repl", inter, stdin=script)
    assert err == ""
    assert open(batch, "rb").read() == open(inter, "rb").read()
    assert "[n=0 simplices=1 consistent]>" in out
    assert "[n=4 simplices=" in out and "INCONSISTENT]>" in out
    assert "inconsistent (minimal witness {1,3})" in out


def test_repl_recovers_from_errors(session):
    script = "assert p &\nconsistent x\nfrobnicate\nassert p\nhelp\n"
    code, out, err = run("repl", session, stdin=script)
    assert "error" in err and "usage error" in err
    assert "verbs:" in out
    assert "[n=1 simplices=2 consistent]>" in out


def test_module_entry_point(worked):
    proc = subprocess.run([sys.executable, "-m", "nervekit", "nerve", worked, "--full"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "{} {1} {2} {3} {1,2} {2,3}"
