import json

import pytest

from fundom.cli import format_number, main, splice

Z3S3 = {"tensor": [{"kind": "cyclic", "degree": 3}, {"kind": "symmetric", "degree": 3}]}


@pytest.fixture
def files(tmp_path):
    def make(name, content):
        p = tmp_path / name
        p.write_text(content if isinstance(content, str) else json.dumps(content))
        return str(p)
    return make


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_project_worked_example(files, capsys):
    g = files("g.json", Z3S3)
    raw = '{"x": [[5,3,3],[4,0,0],[3,5,1]],  "y": "caf\\u00e9", "z": 1.50}'
    inp = files("in.jsonl", raw + "\n")
    code, out, _ = run(["project", "--group", g, "--input", inp, "--witness"], capsys)
    assert code == 0
    line = out.strip()
    assert line.startswith(raw[:-1])  # pass-through bytes preserved
    rec = json.loads(line)
    assert rec["canonical"] == [[0, 0, 4], [5, 1, 3], [3, 3, 5]]
    assert rec["witness"]["degree"] == 9 and sorted(rec["witness"]["images"]) == list(range(1, 10))
    assert '"canonical":[[0,0,4],[5,1,3],[3,3,5]]' in line


@pytest.mark.parametrize("kind,expected", [("desc", [[5, 3, 1], [3, 5, 3], [0, 4, 0]]),
                                           ("asc-avg", [[0, 0, 4], [1, 5, 3], [3, 3, 5]]),
                                           ("desc-avg", [[5, 3, 3], [4, 0, 0], [3, 5, 1]])])
def test_project_kinds(files, capsys, kind, expected):
    g = files("g.json", Z3S3)
    inp = files("in.jsonl", '{"x": [[5,3,3],[4,0,0],[3,5,1]]}\n')
    code, out, _ = run(["project", "--group", g, "--input", inp, "--projection", kind], capsys)
    assert code == 0 and json.loads(out)["canonical"] == expected


def test_project_empty_and_round_trip(files, capsys, tmp_path):
    g = files("g.json", {"kind": "dihedral", "degree": 5})
    assert run(["project", "--group", g, "--input", files("e.jsonl", "")], capsys)[:2] == (0, "")
    inp = files("in.jsonl", '{"x":[0.5,3,-1,2,7]}\n{"x":[1,1,2,2,3],"id":2}\n')
    out1 = tmp_path / "o1.jsonl"
    assert main(["project", "--group", g, "--input", inp, "--output", str(out1)]) == 0
    recs = [json.loads(l) for l in out1.read_text().splitlines()]
    assert recs[1]["id"] == 2
    again = files("again.jsonl", "".join(json.dumps({"x": r["canonical"]}) + "\n" for r in recs))
    code, out, _ = run(["project", "--group", g, "--input", again], capsys)
    assert [json.loads(l)["canonical"] for l in out.splitlines()][0] == recs[0]["canonical"]


def test_project_errors(files, capsys):
    g = files("g.json", Z3S3)
    code, _, err = run(["project", "--group", g, "--input", files("a", '{"x":[[1,2,3],[4,5,6],[7,8,9]]}\n{"x": [1,2\n')], capsys)
    assert code == 2 and "line 2" in err
    code, _, err = run(["project", "--group", g, "--input", files("b", '{"x":[1,2,3]}\n')], capsys)
    assert code == 2 and "shape" in err
    code, _, err = run(["project", "--group", files("bad.json", "{oops"), "--input", files("c", "")], capsys)
    assert code == 2
    with pytest.raises(SystemExit) as e:
        main(["project", "--projection", "sideways"])
    assert e.value.code == 2


def test_verify_counting(files, capsys):
    g = files("z4.json", {"kind": "cyclic", "degree": 4})
    code, out, _ = run(["verify", "--group", g, "--suite", "counting"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["details"][0]["count"] == 6 and rep["group_spec"]["degree"] == 4


def test_verify_gallery_and_invariance(files, capsys):
    s4 = files("s4.json", {"kind": "symmetric", "degree": 4})
    code, out, _ = run(["verify", "--group", s4, "--suite", "gallery"], capsys)
    assert code == 0 and json.loads(out)["details"][0]["chambers"] == 1
    d4 = files("d4.json", {"kind": "dihedral", "degree": 4})
    code, out, _ = run(["verify", "--group", d4, "--suite", "invariance", "--trials", "1000", "--seed", "7"], capsys)
    assert code == 0 and json.loads(out)["failures"] == 0


def test_verify_bounds_are_usage_errors(files, capsys):
    g = files("z9.json", {"kind": "cyclic", "degree": 9})
    assert run(["verify", "--group", g, "--suite", "counting"], capsys)[0] == 2


def test_cayley_demo(capsys):
    code, out, _ = run(["cayley-demo", "--per-class", "5", "--seed", "1"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["accuracy"] == 1 and rep["two_step_matches"] == 25


def test_dirichlet(files, capsys):
    g = files("s2.json", {"kind": "symmetric", "degree": 2})
    code, out, _ = run(["dirichlet", "--group", g, "--input", files("i", '{"x":[1,3]}\n{"x":[3,1]}\n')], capsys)
    a, b = map(json.loads, out.splitlines())
    assert code == 0 and a["canonical"] == [3, 1] and a["objective"] == 5
    assert b["canonical"] == [3, 1] and b["steps"] == 0
    z3z3 = files("z.json", {"tensor": [{"kind": "cyclic", "degree": 3}, {"kind": "cyclic", "degree": 3}]})
    inp = files("m", '{"x":[[1,5,2],[0,3,3],[9,1,4]]}\n{"x":[[2,2,0],[7,1,1],[0,0,5]]}\n')
    code, out, err = run(["dirichlet", "--group", z3z3, "--input", inp, "--multi-seed", "--oracle"], capsys)
    assert code == 0 and "match_rate" in json.loads(err)
    assert all("oracle_match" in json.loads(l) for l in out.splitlines())
    nocycle = files("n.json", {"tensor": [{"degree": 3, "generators": ["(1 2)"]}, {"kind": "cyclic", "degree": 3}]})
    code, _, err = run(["dirichlet", "--group", nocycle, "--input", inp, "--multi-seed"], capsys)
    assert code == 2 and "cycle" in err


def test_number_format_and_splice():
    assert format_number(3.0) == "3" and format_number(-0.0) == "0" and format_number(1.5) == "1.5"
    assert splice('{"x": [1]}', {"x": [1]}, {"c": [2.0]}) == '{"x": [1],"c":[2]}'
    # key collision falls back to re-serialisation
    assert json.loads(splice('{"x":[1],"canonical":0}', {"x": [1], "canonical": 0}, {"canonical": [1.0]})) == {
        "x": [1], "canonical": [1]}


def test_determinism(files, capsys):
    g = files("s8s8.json", {"tensor": [{"kind": "symmetric", "degree": 8}, {"kind": "symmetric", "degree": 8}]})
    import numpy as np
    from fundom.cayley import order8_tables, permuted_samples
    S = permuted_samples(order8_tables()["Q8"], 3, np.random.default_rng(0))
    inp = files("t.jsonl", "".join(json.dumps({"x": s.tolist()}) + "\n" for s in S))
    first = run(["project", "--group", g, "--input", inp], capsys)[1]
    assert first == run(["project", "--group", g, "--input", inp], capsys)[1]
    assert len({json.dumps(json.loads(l)["canonical"]) for l in first.splitlines()}) == 1
