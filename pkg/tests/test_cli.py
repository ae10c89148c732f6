import json
import shutil
import subprocess

import pytest

from repfam.cli import main


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


PATH5 = "p tw 5 4\n1 2\n2 3\n3 4\n4 5\n"
DAG = "p arc 4 3\na 1 2\na 2 3\na 3 4\n"


def test_kpath_yes(capsys, files):
    code, out, _ = run(capsys, ["kpath", "--k", "4", files("p.gr", PATH5), "--json"])
    assert code == 0
    sol = json.loads(out)
    assert sol["schema"] == 1 and sol["status"] == "YES"
    assert sorted(sol["path"]) == [1, 2, 3, 4, 5]
    assert "seed" in sol["provenance"] and "monte_carlo" in sol["provenance"]


def test_kpath_no(capsys, files):
    code, out, _ = run(capsys, ["kpath", "--k", "5", files("p.gr", PATH5)])
    assert code == 1 and out.strip() == "NO"


def test_linear_reducer_flag(capsys, files):
    code, out, _ = run(capsys, ["kpath", "--k", "4", "--no-preprocess", "--reducer", "linear",
                                files("p.gr", PATH5), "--json"])
    assert code == 0
    assert json.loads(out)["provenance"]["reducer"] == "linear"


def test_cycle_dag(capsys, files):
    code, _, _ = run(capsys, ["cycle", "--k", "4", files("d.gr", DAG)])
    assert code == 1


def test_repfam_uniform(capsys, files):
    fam = "2 1 4 6\n" + "".join(f"{w} {a} {b}\n" for w, (a, b) in
                                 enumerate([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]))
    code, out, _ = run(capsys, ["repfam", "--q", "1", "--sense", "min", files("f.txt", fam),
                                "--matroid", "uniform:4:3", "--json"])
    assert code == 0
    sol = json.loads(out)
    assert 1 <= len(sol["sets"]) <= 3


def test_repfam_text_output_is_family(capsys, files):
    fam = "1 1 3 3\n5 0\n1 1\n3 2\n"
    code, out, _ = run(capsys, ["repfam", files("f.txt", fam), "--matroid", "uniform:3:2",
                                "--sense", "min"])
    assert code == 0
    assert out.splitlines()[0].split()[:2] == ["1", "1"]


def test_cheaptour(capsys, files):
    g = files("w.gr", "p tw 4 3\n1 2 3\n2 3 4\n3 4 5\n")
    code, out, _ = run(capsys, ["cheaptour", "--k", "3", g, "--json"])
    assert code == 0 and json.loads(out)["weight"] == 12


def test_steiner_and_verify(capsys, files):
    g = files("s.gr", "p tw 4 3\n1 2\n1 3\n1 4\n")
    code, out, _ = run(capsys, ["steiner", "--terminals", "2,3,4", g, "--json"])
    assert code == 0
    sol = json.loads(out)
    assert sol["weight"] == 3
    code, out, _ = run(capsys, ["verify", g, files("sol.json", json.dumps(sol))])
    assert code == 0 and out.strip() == "VALID"
    sol["edges"] = sol["edges"][:2]
    code, out, _ = run(capsys, ["verify", g, files("bad.json", json.dumps(sol))])
    assert code == 1 and out.startswith("INVALID")


def test_steiner_with_td(capsys, files):
    g = files("s.gr", "p tw 3 2\n1 2\n2 3\n")
    td = files("s.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n")
    code, out, _ = run(capsys, ["steiner", "--terminals", "1,3", g, "--td", td])
    assert code == 0 and out.startswith("weight 2")


def test_meg_and_scss(capsys, files):
    g = files("t.gr", "p arc 3 4\na 1 2\na 2 3\na 3 1\na 1 3\n")
    code, out, _ = run(capsys, ["meg", g, "--json"])
    assert code == 0 and json.loads(out)["weight"] == 3
    code, out, _ = run(capsys, ["meg", "--scss", g, "--json"])
    assert code == 0 and json.loads(out)["problem"] == "scss"
    code, _, _ = run(capsys, ["meg", "--scss", files("d.gr", DAG)])
    assert code == 2


def test_ktree(capsys, files):
    g = files("g.gr", "p tw 3 3\n1 2\n2 3\n1 3\n")
    t = files("t.gr", "p tw 3 2\n1 2\n2 3\n")
    code, out, _ = run(capsys, ["ktree", g, "--pattern", t, "--json"])
    assert code == 0
    sol = json.loads(out)
    code, _, _ = run(capsys, ["verify", g, files("k.json", json.dumps(sol)), "--pattern", t])
    assert code == 0


def test_sepcol_build(capsys, tmp_path):
    out_file = tmp_path / "c.bin"
    code, out, _ = run(capsys, ["sepcol-build", "--n", "8", "--p", "2", "--q", "2", "--verify",
                                "--out", str(out_file), "--json"])
    assert code == 0 and json.loads(out)["provenance"]["verified"]
    assert out_file.read_bytes()[:4] == b"SEPC"


def test_input_errors(capsys, files):
    assert run(capsys, ["kpath", "--k", "3", "--bogus", files("p.gr", PATH5)])[0] == 2
    assert run(capsys, ["kpath", "--k", "3", files("bad.gr", "p tw 2 1\n1 9\n")])[0] == 2
    assert run(capsys, ["kpath", "--k", "3", "/nonexistent/graph.gr"])[0] == 2
    assert run(capsys, ["steiner", "--terminals", "9", files("p.gr", PATH5)])[0] == 2
    assert run(capsys, ["kpath", "--k", "3", "--confidence", "0", files("p.gr", PATH5)])[0] == 2
    assert run(capsys, ["ktree", files("p.gr", PATH5), "--pattern", files("p.gr", PATH5),
                        "--epsilon", "3"])[0] == 2
    assert run(capsys, [])[0] == 2


def test_parse_error_names_line(capsys, files):
    code, _, err = run(capsys, ["kpath", "--k", "2", files("bad.gr", "p tw 3 2\n1 2\n2 x\n")])
    assert code == 2 and "line 3" in err


def test_seed_env_and_determinism(capsys, files, monkeypatch):
    g = files("r.gr", "p tw 8 10\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n7 8\n1 5\n2 6\n3 8\n")
    monkeypatch.setenv("REPFAM_SEED", "17")
    _, a, _ = run(capsys, ["kpath", "--k", "6", "--no-preprocess", g, "--json"])
    _, b, _ = run(capsys, ["kpath", "--k", "6", "--no-preprocess", g, "--json"])
    assert a == b
    assert json.loads(a)["provenance"]["seed"] == 17


@pytest.mark.skipif(shutil.which("repfam") is None, reason="console script not installed")
def test_console_script(files):
    p = subprocess.run(["repfam", "kpath", "--k", "4", files("p.gr", PATH5), "--json"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["status"] == "YES"
