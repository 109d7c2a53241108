import json

import pytest

from gamecomonads import zoo
from gamecomonads.cli import main
from gamecomonads.structures import structure_to_dict


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data), encoding="utf-8")
    return str(p)


def plain(tmp_path, name, A):
    return write(tmp_path, name, structure_to_dict(A))


@pytest.fixture
def lin2(tmp_path):
    return plain(tmp_path, "lin2.json", zoo.lin(2))


@pytest.fixture
def lin3(tmp_path):
    return plain(tmp_path, "lin3.json", zoo.lin(3))


def out_json(capsys):
    return json.loads(capsys.readouterr().out.strip().splitlines()[-1])


def test_check_identical_exit_zero(tmp_path, capsys, lin2):
    assert main(["check", "--game", "ef", "--tier", "2", "-k", "2", lin2, lin2]) == 0
    v = out_json(capsys)
    assert v["equiv"] is True and v["k"] == 2


def test_check_lin23_tier2_not_equivalent(tmp_path, capsys, lin2, lin3):
    assert main(["check", "--game", "ef", "--tier", "2", "-k", "2", lin2, lin3]) == 1
    assert out_json(capsys)["equiv"] is False


def test_check_all_games_and_tiers_run(tmp_path, capsys, lin2):
    for game in ("ef", "pebble"):
        for tier in ("1", "2", "3"):
            assert main(["check", "--game", game, "--tier", tier, "-k", "2",
                         lin2, lin2]) == 0
    P = plain(tmp_path, "pk.json", zoo.kripke_two_cycle())
    for tier in ("1", "2", "3"):
        assert main(["check", "--game", "modal", "--tier", tier, "-k", "2", P, P]) == 0


def test_check_writes_certificate(tmp_path, capsys, lin2):
    cert_path = tmp_path / "cert.json"
    assert main(["check", "--game", "ef", "--tier", "1", "-k", "2",
                 lin2, lin2, "--cert", str(cert_path)]) == 0
    cert = json.loads(cert_path.read_text())
    assert cert["forward"]["strategy"]


def test_check_modal_requires_point(tmp_path, capsys, lin2):
    assert main(["check", "--game", "modal", "--tier", "1", "-k", "1",
                 lin2, lin2]) == 2


def test_check_modal_rejects_high_arity(tmp_path, capsys):
    data = {"signature": {"T": 3}, "universe": ["a"],
            "relations": {"T": [["a", "a", "a"]]}, "point": "a"}
    p = write(tmp_path, "t3.json", data)
    assert main(["check", "--game", "modal", "--tier", "1", "-k", "1", p, p]) == 2


def test_check_signature_mismatch_is_usage_error(tmp_path, capsys, lin2):
    other = write(tmp_path, "other.json",
                  {"signature": {"S": 2}, "universe": ["a"], "relations": {}})
    assert main(["check", "--game", "ef", "--tier", "1", "-k", "1",
                 lin2, other]) == 2


def test_check_rejects_k0(tmp_path, capsys, lin2):
    assert main(["check", "--game", "ef", "--tier", "1", "-k", "0",
                 lin2, lin2]) == 2


def test_check_rejects_bad_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{nope", encoding="utf-8")
    assert main(["check", "--game", "ef", "--tier", "1", "-k", "1",
                 str(p), str(p)]) == 2


def test_check_rejects_unknown_field(tmp_path, capsys, lin2):
    p = write(tmp_path, "extra.json",
              {"signature": {"R": 2}, "universe": ["a"], "relations": {},
               "colour": 1})
    assert main(["check", "--game", "ef", "--tier", "1", "-k", "1", lin2, str(p)]) == 2


def test_param_tree_width_k3(tmp_path, capsys):
    p = plain(tmp_path, "k3.json", zoo.clique(3))
    assert main(["param", "--kind", "tree-width", p]) == 0
    v = out_json(capsys)
    assert v["value"] == 2
    assert v["witness"]["kind"] == "tree-decomposition"


def test_param_tree_depth_k3(tmp_path, capsys):
    p = plain(tmp_path, "k3.json", zoo.clique(3))
    assert main(["param", "--kind", "tree-depth", p]) == 0
    v = out_json(capsys)
    assert v["value"] == 3
    assert v["witness"]["height"] == 3


def test_param_modal_depth_chain(tmp_path, capsys):
    p = plain(tmp_path, "chain.json", zoo.kripke_chain(2))
    assert main(["param", "--kind", "modal-depth", p]) == 0
    v = out_json(capsys)
    assert v["value"] == 2 and v["coalgebra_number"] == 2
    assert v["witness"]["alpha"]["w2"] == ["w0", "t", "w1", "t", "w2"]


def test_param_modal_depth_none(tmp_path, capsys):
    p = plain(tmp_path, "loop.json", zoo.kripke_loop())
    assert main(["param", "--kind", "modal-depth", p]) == 0
    v = out_json(capsys)
    assert v["value"] is None and v["witness"] is None


def test_param_writes_witness_file(tmp_path, capsys):
    p = plain(tmp_path, "pathy.json", zoo.path(3))
    w = tmp_path / "witness.json"
    assert main(["param", "--kind", "tree-width", p, "--witness", str(w)]) == 0
    assert json.loads(w.read_text())["kind"] == "tree-decomposition"


def test_param_bound_exceeded(tmp_path, capsys):
    big = zoo.validate_structure({"R": 1}, [f"v{i}" for i in range(21)], {"R": []})
    p = plain(tmp_path, "big.json", big)
    assert main(["param", "--kind", "tree-depth", p]) == 2


def test_coalgebra_construct_edge(tmp_path, capsys):
    p = plain(tmp_path, "edge.json", zoo.edge())
    assert main(["coalgebra", "--comonad", "ef", "-k", "2", p]) == 0
    v = out_json(capsys)
    assert v["coalgebra"] == {"a": ["a"], "b": ["a", "b"]}


def test_coalgebra_construct_none_below_tree_depth(tmp_path, capsys):
    p = plain(tmp_path, "edge.json", zoo.edge())
    assert main(["coalgebra", "--comonad", "ef", "-k", "1", p]) == 1
    assert out_json(capsys)["coalgebra"] is None


def test_coalgebra_emitted_reverifies(tmp_path, capsys):
    p = plain(tmp_path, "edge.json", zoo.edge())
    out = tmp_path / "alpha.json"
    assert main(["coalgebra", "--comonad", "ef", "-k", "2", p, "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["coalgebra", "--comonad", "ef", "-k", "2", p, str(out)]) == 0
    v = out_json(capsys)
    assert v["valid"] is True and v["violation"] is None


def test_coalgebra_verify_reports_violation(tmp_path, capsys):
    p = plain(tmp_path, "edge.json", zoo.edge())
    alpha = write(tmp_path, "alpha.json", {"alpha": {"a": ["a"], "b": ["b"]}})
    assert main(["coalgebra", "--comonad", "ef", "-k", "2", p, alpha]) == 1
    v = out_json(capsys)
    assert v["valid"] is False and "comparable" in v["violation"]


def test_coalgebra_malformed_alpha(tmp_path, capsys):
    p = plain(tmp_path, "edge.json", zoo.edge())
    alpha = tmp_path / "alpha.json"
    alpha.write_text("[1,2,3]", encoding="utf-8")
    assert main(["coalgebra", "--comonad", "ef", "-k", "2", p, str(alpha)]) == 2


def test_coalgebra_pebble_and_modal(tmp_path, capsys):
    p = plain(tmp_path, "k3.json", zoo.clique(3))
    assert main(["coalgebra", "--comonad", "pebble", "-k", "3", p]) == 0
    assert main(["coalgebra", "--comonad", "pebble", "-k", "2", p]) == 1
    q = plain(tmp_path, "chain.json", zoo.kripke_chain(1))
    assert main(["coalgebra", "--comonad", "modal", "-k", "1", q]) == 0


def test_selftest_small(capsys):
    assert main(["selftest", "--seed", "0", "--iters", "3"]) == 0
    out = capsys.readouterr().out
    assert "all passed" in out


def test_selftest_deterministic_bytes(capsys):
    main(["selftest", "--seed", "7", "--iters", "2"])
    first = capsys.readouterr().out
    main(["selftest", "--seed", "7", "--iters", "2"])
    second = capsys.readouterr().out
    assert first == second


def test_selftest_zero_iters(capsys):
    assert main(["selftest", "--iters", "0"]) == 0


def test_rejects_duplicate_json_keys(tmp_path, capsys):
    p = tmp_path / "dup.json"
    p.write_text('{"signature": {"R": 2, "R": 1}, "universe": ["a"], "relations": {}}',
                 encoding="utf-8")
    assert main(["check", "--game", "ef", "--tier", "1", "-k", "1",
                 str(p), str(p)]) == 2
    assert "duplicate relation name" in capsys.readouterr().err


def test_usage_error_exit_code():
    assert main(["check", "--game", "ef"]) == 2
    assert main([]) == 2
