import json

import pytest

from buchloop.catalog import random_loop, symmetric
from buchloop.cli import main
from buchloop.table import read_table, write_table


@pytest.fixture(scope="module")
def q64_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "q64.tbl"
    assert main(["paper-example", "--order", "64", "-o", str(path)]) == 0
    return path


def test_paper_example_header_and_round_trip(q64_file, q64):
    text = q64_file.read_text()
    assert text.startswith("# ") and "c111 c222 c112 c121 c122 c212" in text
    assert (read_table(q64_file).mul == q64.mul).all()
    assert main(["validate", str(q64_file)]) == 0


def test_validate_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.tbl"
    bad.write_text("2\n0 1\n1 1\n")
    assert main(["validate", str(bad)]) == 1
    junk = tmp_path / "junk.tbl"
    junk.write_text("2\n0 z\n1 0\n")
    assert main(["validate", str(junk)]) == 2
    assert "'z'" in capsys.readouterr().err
    assert main(["validate", str(tmp_path / "missing.tbl")]) == 2


def test_validate_relabel(tmp_path):
    f = tmp_path / "t.tbl"
    f.write_text("2\n1 0\n0 1\n")
    out = tmp_path / "o.tbl"
    assert main(["validate", str(f)]) == 1
    assert main(["validate", str(f), "--relabel", "-o", str(out)]) == 0
    assert read_table(out).mul.tolist() == [[0, 1], [1, 0]]


def test_check_exit_codes(q64_file, capsys):
    assert main(["check", str(q64_file), "--law", "buchsteiner", "--mode", "exhaustive"]) == 0
    assert main(["check", str(q64_file), "--law", "cc"]) == 1
    assert "[8, 32, 8]" in capsys.readouterr().out
    assert main(["check", str(q64_file), "--law", "nope"]) == 2
    assert "nope" in capsys.readouterr().err
    assert main(["check", str(q64_file), "--law", "cc", "--mode", "quick"]) == 2
    assert main(["check", str(q64_file)]) == 2


def test_check_json_is_byte_identical(q64_file, tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        main(["check", str(q64_file), "--law", "lcc", "--mode", "sampled", "--samples", "2000",
              "--seed", "3", "--json", str(out), "--threads", str(k + 1)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    rep = json.loads(outs[0])
    assert rep["passed"] is False and rep["records"][0]["seed"] == 3
    assert "seconds" not in rep["records"][0]


def test_structure_report(q64_file, tmp_path):
    out = tmp_path / "s.json"
    assert main(["structure", str(q64_file), "--nuclei", "--center", "--json", str(out)]) == 0
    rep = json.loads(out.read_text())
    recs = {r["check"]: r for r in rep["records"]}
    assert recs["nuclei"]["N"] == list(range(8))
    assert recs["center"]["center"] == [0, 6]
    assert set(recs) == {"nuclei", "center"}


def test_isotope_and_quotient(q64_file, tmp_path):
    iso = tmp_path / "iso.tbl"
    assert main(["isotope", str(q64_file), "--at", "9", "-o", str(iso)]) == 0
    assert read_table(iso).order == 64
    assert main(["isotope", str(q64_file), "--at", "64"]) == 2
    assert main(["isotope", str(q64_file), "--at", "x"]) == 2
    quo = tmp_path / "q.tbl"
    assert main(["quotient", str(q64_file), "--subloop", "0,1,2,3,4,5,6,7", "-o", str(quo)]) == 0
    assert read_table(quo).order == 8
    assert main(["quotient", str(q64_file), "--subloop", "0,8"]) == 1
    assert main(["quotient", str(q64_file), "--subloop", "0,a"]) == 2


def test_suite_command(q64_file, tmp_path):
    for kind in ("theorems", "calculus", "minverse:1"):
        assert main(["suite", str(q64_file), "--kind", kind]) == 0, kind
    assert main(["suite", str(q64_file), "--kind", "minverse:-1"]) == 1
    assert main(["suite", str(q64_file), "--kind", "other"]) == 2
    loop = tmp_path / "r.tbl"
    write_table(random_loop(6, 0), loop)
    assert main(["suite", str(loop), "--kind", "theorems"]) == 1


def test_group_table_passes_laws(tmp_path):
    f = tmp_path / "s3.tbl"
    write_table(symmetric(3), f)
    for law in ("buchsteiner", "cc", "extra", "wip", "wwip"):
        assert main(["check", str(f), "--law", law]) == 0
