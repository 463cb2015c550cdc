import json
from pathlib import Path

import pytest

from hperturb import formats
from hperturb.cli import main
from hperturb.complex import check_maurer_cartan
from hperturb.fixtures import interval_sdr, multiplication_complex, point_complex
from hperturb.graded import GradedMap

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_corpus(capsys):
    for name in ("point.json", "interval.sdr.json", "interval.delta.json", "stacked.json", "tensor-pair.json",
                 "circle.sdr.json", "interval.perturbed.json", "circle.perturbed.json"):
        code, out, _ = run(capsys, "validate", CORPUS / name)
        assert code == 0, name
        assert json.loads(out)["valid"] is True


def test_validate_wrong_sign(tmp_path, capsys):
    path = tmp_path / "bad.json"
    formats.write(path, formats.sdr_to_json(interval_sdr(h_sign=1)))
    code, _, err = run(capsys, "validate", path)
    assert code == 1 and "Dh = 1 - gf" in err


def test_validate_empty_and_missing(tmp_path, capsys):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert run(capsys, "validate", empty)[0] == 2
    assert run(capsys, "validate", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_perturb_interval(tmp_path, capsys):
    out = tmp_path / "o.json"
    code, _, _ = run(capsys, "perturb", CORPUS / "interval.sdr.json", CORPUS / "interval.delta.json", "--out", out)
    assert code == 0
    assert out.read_text() == (CORPUS / "interval.perturbed.json").read_text()
    doc = json.loads(out.read_text())
    assert doc["delta_prime"]["blocks"] == {}
    assert doc["result"]["f"]["blocks"]["0"] == [[1, 0]]


def test_perturb_by_zero(capsys):
    code, out, _ = run(capsys, "perturb", CORPUS / "interval.sdr.json")
    doc = json.loads(out)
    assert code == 0 and doc["result"] == doc["original"] and doc["delta_prime"]["blocks"] == {}


def test_perturb_not_nilpotent(tmp_path, capsys):
    s = interval_sdr()
    A = s.source
    loop = check_maurer_cartan(GradedMap.from_images(A.module, A.module, -1, {"e": {"b": -1}}), A)
    formats.write(tmp_path / "loop.json", formats.perturbation_to_json(loop))
    code, _, err = run(capsys, "perturb", CORPUS / "interval.sdr.json", tmp_path / "loop.json")
    assert code == 1 and "NotNilpotent" in err and "degree 0" in err


def test_homology_commands(tmp_path, capsys):
    code, out, _ = run(capsys, "homology", CORPUS / "point.json")
    assert code == 0 and json.loads(out) == {"0": {"betti": 1, "torsion": []}}
    code, out, _ = run(capsys, "homology", CORPUS / "interval.sdr.json")
    assert json.loads(out)["0"]["betti"] == 1
    formats.write(tmp_path / "m2.json", formats.complex_to_json(multiplication_complex(2)))
    code, out, _ = run(capsys, "homology", tmp_path / "m2.json")
    assert json.loads(out)["0"]["torsion"] == [2]
    for name in ("point", "interval", "circle"):
        src = CORPUS / (f"{name}.json" if name == "point" else f"{name}.sdr.json")
        code, out, _ = run(capsys, "homology", src)
        assert out == (CORPUS / f"{name}.homology.json").read_text()


def test_compose_and_tensor_goldens(capsys):
    code, out, _ = run(capsys, "compose", CORPUS / "stacked.json")
    assert code == 0 and out == (CORPUS / "stacked.composite.json").read_text()
    code, out, _ = run(capsys, "tensor", CORPUS / "tensor-pair.json")
    assert code == 0 and out == (CORPUS / "tensor-pair.result.json").read_text()
    code, out, _ = run(capsys, "tensor", CORPUS / "interval.sdr.json", CORPUS / "interval.sdr.json")
    assert code == 0 and formats.detect_kind(json.loads(out)) == "sdr"
    assert run(capsys, "compose", CORPUS / "interval.sdr.json", CORPUS / "interval.sdr.json")[0] == 1


def test_push_along(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "sdr", "--seed", "11", "--max-rank", "10", "--out", tmp_path / "s.json")
    _, s = formats.load_path(tmp_path / "s.json")
    formats.write(tmp_path / "z.json", {"delta": {"degree": -1, "blocks": {}}})
    code, out, _ = run(capsys, "push-along", tmp_path / "s.json", tmp_path / "z.json")
    assert code == 0 and json.loads(out)["delta"]["blocks"] == {}


@pytest.mark.parametrize("kind", ["complex", "sdr", "stacked-sdr", "perturbation", "tensor-pair"])
def test_gen_is_deterministic_and_valid(tmp_path, capsys, kind):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "gen", kind, "--seed", 1, "--max-rank", 6, "--out", a)[0] == 0
    assert run(capsys, "gen", kind, "--seed", 1, "--max-rank", 6, "--out", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert run(capsys, "validate", a)[0] == 0


def test_gen_perturbation_on_point(tmp_path, capsys):
    formats.write(tmp_path / "pt.json", formats.complex_to_json(point_complex()))
    code, out, _ = run(capsys, "gen", "perturbation", "--on", tmp_path / "pt.json")
    assert code == 0 and json.loads(out)["delta"]["blocks"] == {}


def test_gen_other_rings(tmp_path, capsys):
    for ring in ("Q", "Zp:5"):
        assert run(capsys, "gen", "sdr", "--ring", ring, "--out", tmp_path / "x.json")[0] == 0
        assert run(capsys, "validate", tmp_path / "x.json")[0] == 0
    assert run(capsys, "gen", "sdr", "--ring", "Zp:4")[0] == 2


def test_check_commands(capsys):
    code, out, _ = run(capsys, "check", "--suite", "all", "--trials", 0)
    assert code == 0
    assert all(r["trials"] == 0 and r["failures"] == 0 for r in json.loads(out)["reports"])
    code, out, err = run(capsys, "check", "--suite", "vertical", "--seed", 7, "--trials", 20)
    assert code == 0 and "vertical: 20 trials, 0 failures" in err
    code, out, _ = run(capsys, "check", "--suite", "bpl", "--trials", 6, "--jobs", 2)
    assert code == 0 and json.loads(out)["reports"][0]["failures"] == 0
    assert run(capsys, "check", "--trials", -1)[0] == 2
