import json

import pytest

from horofan.cli import parse_vectors, run_command
from horofan.config import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK, GOLDEN_DIR
from horofan.criteria import is_toroidal
from horofan.documents import read_document, to_stacky_fan
from horofan.errors import DocumentParseError


def _fan(name):
    return str(GOLDEN_DIR / f"{name}.json")


def _map(name):
    return str(GOLDEN_DIR / "maps" / f"{name}.json")


def _run(capsys, *argv):
    code = run_command(list(argv))
    return code, capsys.readouterr().out


def test_parse_vectors():
    assert parse_vectors("1,0; 0,1", "--cone") == [(1, 0), (0, 1)]
    with pytest.raises(DocumentParseError):
        parse_vectors("1,x", "--cone")


def test_kbeta_text(capsys):
    code, out = _run(capsys, "kbeta", _fan("a2_mod_z2"))
    assert code == EXIT_OK
    assert out.strip() == "μ₂ (rank 0, torsion [2])"


def test_gms_json(capsys):
    code, out = _run(capsys, "gms", _fan("line_quotient"), "--json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["exists"] is True
    assert payload["reason"] == "OK"
    assert payload["gms_fan"]["maximal_cones"] == [{"generators": [[1]], "colours": []}]
    assert payload["Phi"] == [[1, 0]]


def test_gms_without_unique_maximal_unstable_cone(capsys):
    code, out = _run(capsys, "gms", _fan("no_good_quotient"), "--json")
    assert code == EXIT_CHECK_FAILED
    assert json.loads(out)["reason"] == "NoUniqueMaxUnstable"


@pytest.mark.parametrize("argv, expected", [
    (["validate", _fan("line_quotient")], EXIT_OK),
    (["validate", _map("line_quotient_gms")], EXIT_OK),
    (["toroidal", _fan("affine_line")], EXIT_OK),
    (["toroidal", _fan("line_quotient")], EXIT_CHECK_FAILED),
    (["unstable", _fan("line_quotient"), "--cone", "0,1"], EXIT_OK),
    (["unstable", _fan("line_quotient"), "--cone", "1,0", "--method", "3"], EXIT_CHECK_FAILED),
    (["unstable", _fan("line_quotient"), "--cone", "1,1"], EXIT_INPUT_ERROR),
    (["iso", _map("cox_map")], EXIT_OK),
    (["iso", _map("decolouration")], EXIT_CHECK_FAILED),
    (["gms-check", _map("line_quotient_gms")], EXIT_OK),
    (["gms-check", _map("double_ray")], EXIT_CHECK_FAILED),
    (["iso", _fan("line_quotient")], EXIT_INPUT_ERROR),
    (["fantastack", _fan("extra_columns_base"), "--extra-columns", "1,0;1,1;0,2"], EXIT_OK),
    (["fantastack", _fan("extra_columns_base"), "--extra-columns", "1,0;1,1"], EXIT_CHECK_FAILED),
    (["classgroup", _fan("cox_base")], EXIT_OK),
    (["nonsense"], EXIT_INPUT_ERROR),
])
def test_exit_codes(capsys, argv, expected):
    code, _ = _run(capsys, *argv)
    assert code == expected


def test_unstable_lists_every_cone(capsys):
    code, out = _run(capsys, "unstable", _fan("no_good_quotient"), "--json")
    assert code == EXIT_OK
    assert len(json.loads(out)["unstable"]) == 3


def test_malformed_document(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"lattice": {"rank": 2}', encoding="utf-8")
    assert run_command(["kbeta", str(path)]) == EXIT_INPUT_ERROR
    assert "line 1 column 24" in capsys.readouterr().err


def test_invalid_fan_is_reported(capsys, tmp_path):
    path = tmp_path / "flat.json"
    path.write_text(json.dumps({
        "lattice": {"rank": 1},
        "fan": {"maximal_cones": [{"generators": [[1]]}]},
        "beta": {"codomain_rank": 2, "matrix": [[1], [0]]},
    }), encoding="utf-8")
    code, out = _run(capsys, "validate", str(path), "--json")
    assert code == EXIT_CHECK_FAILED
    failed = [c["name"] for c in json.loads(out)["checks"] if c["status"] == "fail"]
    assert failed == ["SCF2"]


def test_cox_and_rootstack(capsys):
    code, out = _run(capsys, "cox", _fan("cox_base"), "--json")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["beta"] == [[1, 0, -1], [0, 1, -1]]
    assert payload["regular"] is True
    assert payload["t_prime_rank"] == 1

    code, out = _run(capsys, "rootstack", _fan("cox_base"), "--ray=-1,-1", "--order", "3", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["beta"] == [[1, 0, -3], [0, 1, -3]]


def test_rootstack_on_coloured_ray(capsys):
    code, _ = _run(capsys, "rootstack", _fan("cox_base"), "--ray", "1,0", "--order", "2")
    assert code == EXIT_INPUT_ERROR


def test_decolour_writes_a_toroidal_fan(capsys, tmp_path):
    output = tmp_path / "plain.json"
    code, _ = _run(capsys, "decolour", _fan("line_quotient"), "-o", str(output))
    assert code == EXIT_OK
    s = to_stacky_fan(read_document(output))
    assert is_toroidal(s.fan)
    assert s.fan.lattice.labels == ("alpha1", "alpha2")


def test_product_of_stacky_fans(capsys, tmp_path):
    output = tmp_path / "product.json"
    assert run_command(["product", _fan("a2_mod_z2"), _fan("p2_sl2"), "-o", str(output)]) == EXIT_OK
    capsys.readouterr()
    code, out = _run(capsys, "kbeta", str(output))
    assert code == EXIT_OK
    assert out.strip() == "G_m × μ₂ (rank 1, torsion [2])"


def test_json_output_is_byte_stable(capsys, tmp_path):
    first = _run(capsys, "gms", _fan("two_ray_quotient"), "--json")[1]
    second = _run(capsys, "gms", _fan("two_ray_quotient"), "--json")[1]
    assert first == second
    assert first == json.dumps(json.loads(first), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    outputs = []
    for name in ("a.json", "b.json"):
        run_command(["decolour", _fan("two_ray_quotient"), "-o", str(tmp_path / name)])
        outputs.append((tmp_path / name).read_bytes())
    assert outputs[0] == outputs[1]
    assert outputs[0].endswith(b"\n")
