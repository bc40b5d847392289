import json

import pytest

from malle_lab.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_tame_table_csv(capsys):
    code, out = run(["tame-table", "--l", "5", "--k", "1"], capsys)
    assert code == 0
    lines = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert lines[0] == "sn_class,r,a_index,compositum_exponent"
    body = {tuple(l.split(",")[:2]): l.split(",")[3] for l in lines[1:]}
    assert body[("(12)", "0")] == "13"
    assert body[("(123)", "0")] == "14"


def test_verify_lemmas_exit_codes(capsys, tmp_path):
    code, out = run(["verify-lemmas", "--n", "3", "--group", "5", "--rk", "default"], capsys)
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["uniformity"]["passed"] is True

    zero = {
        "n": 3,
        "rk": [{"cycle_type": [2, 1], "r": 0}, {"cycle_type": [3], "r": 0}],
    }
    path = tmp_path / "rk.json"
    path.write_text(json.dumps(zero))
    code, out = run(["verify-lemmas", "--n", "3", "--group", "5", "--rk", str(path)], capsys)
    assert code == 1
    rep = json.loads(out)["report"]
    assert rep["uniformity"]["witness"] == [[3], 5]


def test_missing_file_exit_2(capsys):
    code, _ = run(
        ["count-pairs", "--sn-fields", "/nonexistent.jsonl", "--abelians", "/n2.jsonl", "--x", "1e6"],
        capsys,
    )
    assert code == 2


def test_invariants_product(capsys):
    code, out = run(
        [
            "invariants",
            "--generators", "(12);(123)",
            "--degree", "3",
            "--product", "(123)",
            "--product-degree", "3",
        ],
        capsys,
    )
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["order"] == 18 and rep["a"] == 3 and rep["b"] == 1


def test_invariants_bad_input_exit_2(capsys):
    code, _ = run(["invariants", "--generators", "garbage"], capsys)
    assert code == 2


def test_euler_constant_cli(capsys):
    code, out = run(["euler-constant", "--pmax", "5"], capsys)
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["value"] == pytest.approx(2 * rep["c3"] * (31 / 25) * (4 / 5))


def test_convolve_cli(capsys):
    code, out = run(["convolve", "--s1", "integers", "--s2", "integers",
                     "--a", "1", "--b", "1", "--x", "10"], capsys)
    assert code == 0
    assert json.loads(out)["report"]["count"] == 27


def test_abelian_uniformity_cli(capsys):
    code, out = run(
        ["abelian-uniformity", "--l", "3", "--q", "7,13", "--x", "1e6", "--bound", "3.0"],
        capsys,
    )
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["max_ratio"] <= 3.0


def test_determinism_and_version_embed(capsys, tmp_path):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify-lemmas", "--n", "4", "--group", "7", "--out", str(f1)])
    main(["verify-lemmas", "--n", "4", "--group", "7", "--out", str(f2)])
    capsys.readouterr()
    b1, b2 = f1.read_bytes(), f2.read_bytes()
    assert b1 == b2
    assert json.loads(b1)["version"]


def test_count_pairs_cli_roundtrip(capsys, tmp_path):
    from malle_lab.fields.cubic import enumerate_cubic
    from malle_lab.fields.cyclic import enumerate_cyclic

    sn = tmp_path / "cubics.jsonl"
    ab = tmp_path / "c3.jsonl"
    with open(sn, "w") as fh:
        enumerate_cubic(1000).write_jsonl(fh)
    with open(ab, "w") as fh:
        enumerate_cyclic(3, 1000).write_jsonl(fh)
    code, out = run(
        [
            "count-pairs",
            "--sn-fields", str(sn),
            "--abelians", str(ab),
            "--x", "1e9",
            "--mode", "interval",
            "--y-ladder", "10,100",
            "--sn-xmax", "1000",
            "--ab-xmax", "1000",
        ],
        capsys,
    )
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["mode"] == "interval"
    assert all(a <= b for a, b in zip(rep["n_lo"], rep["n_hi"]))


def test_sieve_exp_cli(capsys, tmp_path):
    scheme = {"n_vars": 2, "codim": 1, "polys": [[[1, [1, 0]]]]}
    path = tmp_path / "scheme.json"
    path.write_text(json.dumps(scheme))
    code, out = run(
        ["sieve-exp", "--scheme", str(path), "--r", "20,50,100,200", "--q", "3,5,7,11,31"],
        capsys,
    )
    assert code == 0
    assert "fitted_q_exponent" in out


def test_enumerate_cyclic_cli(capsys):
    code, out = run(["enumerate-cyclic", "--l", "3", "--x", "100"], capsys)
    assert code == 0
    lines = [json.loads(l) for l in out.splitlines() if l.strip()]
    assert [rec["disc"] for rec in lines] == [49, 81]
