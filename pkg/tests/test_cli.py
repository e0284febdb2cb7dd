import json

import numpy as np
import pytest

from grpdlab import algebra as A, groupoid as G, pnorm, rigidity, sft, thompson as T
from grpdlab.cli import main

SWAP = {"alphabets": [2], "columns": [{"v": ["0"], "u": ["1"]}, {"v": ["1"], "u": ["0"]}]}


def dump(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def files(tmp_path):
    g = G.pair_groupoid(2)
    f = {}
    f["g2"] = dump(tmp_path / "g2.json", G.groupoid_to_json(g))
    f["z2"] = dump(tmp_path / "z2.json", G.groupoid_to_json(G.cyclic_group_groupoid(2)))
    f["ones2"] = dump(tmp_path / "ones2.json", {"groupoid": "g2.json",
                                                "coeffs": {"(1,1)": [1, 0], "(1,2)": [1, 0]}})
    f["swap"] = dump(tmp_path / "swap.json", SWAP)
    f["id"] = dump(tmp_path / "id.json", T.table_to_json(T.identity_table((2,))))
    return f


def test_table_compose_identity_swap(files, capsys):
    code, out = run(capsys, "table", "compose", files["id"], files["swap"])
    assert code == 0
    assert json.loads(out) == SWAP
    _, out2 = run(capsys, "table", "compose", files["swap"], files["id"])
    assert out2 == out


def test_algebra_norm(files, capsys):
    code, rep = run_json(capsys, "algebra", "norm", "--p", "3", files["ones2"])
    assert code == 0
    assert rep["value"] == pytest.approx(2 ** (2 / 3), abs=1e-6)


def test_witness(capsys):
    code, w = run_json(capsys, "check", "witness", "--alphabets", "2")
    assert code == 0 and w["word"] != w["image"]
    t = T.table_from_json(w["commutator"])
    assert list(T.apply(t, tuple(w["word"]))) == w["image"]


def test_usage_errors(files, capsys):
    with pytest.raises(SystemExit) as e:
        main(["table", "frobnicate"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["algebra", "norm"])
    assert e.value.code == 1
    assert main(["algebra", "norm", "--p", "0.5", files["ones2"]]) == 1
    assert main(["table", "equals", "--depth", "9", files["swap"], files["swap"]]) == 1
    assert main(["table", "apply", files["swap"]]) == 1


def test_validation_failures(tmp_path, files, capsys):
    bad = dump(tmp_path / "bad.json", {"alphabets": [2], "columns": [{"v": ["0"], "u": ["1"]}]})
    code, rep = run_json(capsys, "table", "validate", bad)
    assert code == 2 and not rep["valid"]
    assert main(["table", "invert", bad]) == 2
    assert main(["algebra", "norm", str(tmp_path / "missing.json")]) == 2
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert main(["groupoid", "validate", str(junk)]) == 2
    broken = G.groupoid_to_json(G.pair_groupoid(2))
    broken["inv"]["(1,2)"] = "(1,2)"
    assert main(["groupoid", "validate", dump(tmp_path / "broken.json", broken)]) == 2
    assert main(["check", "core", "--p", "2"]) == 2
    capsys.readouterr()


def test_refuted_exit_code(monkeypatch, capsys):
    fake = rigidity.RigidityReport("core", {}, rigidity.REFUTED, counterexample=np.eye(2))
    monkeypatch.setattr(rigidity, "core_diagonal_check", lambda *a, **k: fake)
    code, rep = run_json(capsys, "check", "core")
    assert code == 3 and rep["verdict"] == "refuted-with-witness"


def test_groupoid_commands(tmp_path, files, capsys):
    code, rep = run_json(capsys, "groupoid", "decompose", files["g2"])
    assert code == 0
    code, _ = run(capsys, "groupoid", "decompose", files["z2"])
    assert code == 2
    code, rep = run_json(capsys, "groupoid", "condw", files["z2"])
    assert code == 0
    act = G.FinitePartialBijectionSemigroup.from_generators([0, 1], [{0: 1, 1: 0}])
    path = dump(tmp_path / "act.json", G.action_to_json(act))
    code, germ = run_json(capsys, "groupoid", "germ", path)
    assert code == 0
    h = G.groupoid_from_json(germ)
    assert G.find_isomorphism(h, G.pair_groupoid(2)) is not None


def test_sft_commands(tmp_path, capsys):
    path = dump(tmp_path / "cyl.json", {"alphabets": [2], "range": ["0"], "domain": ["1"]})
    code, S = run_json(capsys, "sft", "extend", path)
    assert code == 0
    sp = dump(tmp_path / "S.json", S)
    code, rep = run_json(capsys, "sft", "fullgroup", sp)
    assert rep["full_group_element"] and rep["domain_measure"] == "1"
    code, inv = run_json(capsys, "sft", "invert", sp)
    ip = dump(tmp_path / "inv.json", inv)
    code, prod = run_json(capsys, "sft", "product", sp, ip)
    assert code == 0
    P = sft.bisection_from_json(prod)
    assert sft.semantic_equal(P, sft.identity_bisection((2,)))


def test_table_commands(tmp_path, files, capsys):
    code, rep = run_json(capsys, "table", "apply", "--point", "01", files["swap"])
    assert rep["image"] == ["11"]
    code, rep = run_json(capsys, "table", "equals", "--depth", "3", files["swap"], files["id"])
    assert rep == {"equal": False, "equal_on_grid": False}
    code, b = run_json(capsys, "table", "to-bisection", files["swap"])
    assert sft.is_full_group_element(sft.bisection_from_json(b))
    code, inv = run_json(capsys, "table", "invert", files["swap"])
    assert T.equals(T.table_from_json(inv), T.table_from_json(SWAP))
    code, red = run_json(capsys, "table", "reduce", files["swap"])
    assert code == 0


def test_algebra_commands(tmp_path, files, capsys):
    d = dump(tmp_path / "d.json", {"groupoid": "g2.json", "coeffs": {"(1,2)": [1, 0]}})
    e = dump(tmp_path / "e.json", {"groupoid": "g2.json", "coeffs": {"(2,1)": [1, 0]}})
    code, rep = run_json(capsys, "algebra", "convolve", d, e)
    assert rep["coeffs"] == {"(1,1)": [1.0, 0.0]}
    code, rep = run_json(capsys, "algebra", "expect", files["ones2"])
    assert rep["coeffs"] == {"(1,1)": [1.0, 0.0]}
    code, rep = run_json(capsys, "algebra", "lambda", files["ones2"])
    assert set(rep) == {"(1,1)", "(2,2)"}
    # e*d = delta_(2,2) and d*e = delta_(1,1): the pair (d, e) realizes (2,2) -> (1,1)
    beta = dump(tmp_path / "beta.json", {"beta": {"(2,2)": "(1,1)"}})
    code, rep = run_json(capsys, "algebra", "admissible", d, e, beta)
    assert code == 0 and rep["admissible"] is True
    wrong = dump(tmp_path / "wrong.json", {"beta": {"(1,1)": "(2,2)"}})
    code, rep = run_json(capsys, "algebra", "admissible", d, e, wrong)
    assert rep["admissible"] is False and rep["N2"] is False


def test_twisted_convolve(tmp_path, files, capsys):
    s = dump(tmp_path / "s.json", {"groupoid": "z2.json", "coeffs": {"1": [1, 0]}})
    c = dump(tmp_path / "c.json", {"entries": [["1", "1", [-1, 0]]]})
    code, rep = run_json(capsys, "algebra", "convolve", "--cocycle", c, s, s)
    assert code == 0 and rep["coeffs"] == {"0": [-1.0, 0.0]}


def test_pnorm_commands(tmp_path, capsys):
    h = dump(tmp_path / "h.json", pnorm.matrix_to_json(np.array([[0, 1], [1, 0]], dtype=complex)))
    code, rep = run_json(capsys, "pnorm", "herm", "--p", "4", h)
    assert rep["hermitian"] is False
    code, rep = run_json(capsys, "pnorm", "isometry", "--p", "3", h)
    assert rep["invertible_isometry"] is True
    code, rep = run_json(capsys, "pnorm", "norm", "--p", "1.5", h)
    assert rep["value"] == pytest.approx(1, abs=1e-9)
    e11 = dump(tmp_path / "e11.json", pnorm.matrix_to_json(np.diag([1, 0]).astype(complex)))
    code, rep = run_json(capsys, "pnorm", "mp", e11, e11)
    assert code == 0 and rep["mp_partial_isometry"] is True


def test_check_commands(files, capsys):
    code, rep = run_json(capsys, "check", "af", files["z2"])
    assert code == 0 and rep["verdict"] == "inconclusive"
    code, rep = run_json(capsys, "check", "tfg", "--n", "2", "--samples", "5")
    assert code == 0 and rep["statistics"]["cosets"] == 2
    code, rep = run_json(capsys, "check", "isometries", "--samples", "5")
    assert code == 0 and rep["verdict"] == "confirmed"


def test_text_and_output_file(tmp_path, files, capsys):
    code, out = run(capsys, "check", "af", "--text", files["g2"])
    assert code == 0 and "verdict: confirmed" in out
    target = tmp_path / "out.json"
    assert main(["table", "invert", files["swap"], "-o", str(target)]) == 0
    assert T.equals(T.table_from_json(json.loads(target.read_text())), T.table_from_json(SWAP))


def test_tol_override_is_scoped(files, capsys):
    from grpdlab import config
    before = config.NORM_TOL
    assert main(["check", "af", "--tol", "0.5", files["g2"]]) == 0
    capsys.readouterr()
    assert config.NORM_TOL == before


def test_wrong_file_kind_is_invalid(files, capsys):
    assert main(["pnorm", "norm", files["swap"]]) == 2
    assert main(["table", "invert", files["g2"]]) == 2
    assert main(["algebra", "norm", files["swap"]]) == 2


@pytest.mark.parametrize("argv", [
    ["check", "witness", "--alphabets", "2,3"],
    ["check", "tfg", "--n", "2", "--samples", "10", "--seed", "4"],
    ["algebra", "norm", "--p", "1.5", "ONES"],
])
def test_byte_identical_reruns(argv, files, capsys):
    argv = [files["ones2"] if a == "ONES" else a for a in argv]
    assert main(argv) in (0, 3)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_round_trip_revalidates(tmp_path, files, capsys):
    _, inv = run_json(capsys, "table", "compose", files["swap"], files["swap"])
    p = dump(tmp_path / "c.json", inv)
    code, rep = run_json(capsys, "table", "validate", p)
    assert code == 0 and rep["valid"]
    _, conv = run_json(capsys, "algebra", "convolve", files["ones2"], files["ones2"])
    p = dump(tmp_path / "conv.json", conv)
    code, _ = run_json(capsys, "algebra", "expect", p)
    assert code == 0
    _, germ = run_json(capsys, "groupoid", "decompose", files["g2"])
    assert germ
