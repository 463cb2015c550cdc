import json
from pathlib import Path

import pytest

from hperturb import formats
from hperturb.bpl import perturb_sdr
from hperturb.errors import FormatError, MaurerCartanViolation, SdrViolation
from hperturb.fixtures import circle_sdr, interval_sdr
from hperturb.generate import random_sdr
from hperturb.ring import GF, QQ

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def test_dumps_is_canonical(interval):
    text = formats.dumps(formats.sdr_to_json(interval))
    assert text.endswith("\n")
    assert formats.dumps(formats.loads(text)) == text


@pytest.mark.parametrize("ring", [QQ, GF(5)])
def test_round_trip_other_rings(rng, ring):
    s = random_sdr(rng, ring, 8).sdr
    doc = formats.sdr_to_json(s)
    assert formats.sdr_from_json(formats.loads(formats.dumps(doc))) == s


def test_fraction_entries():
    doc = {"ring": "Q", "ranks": {"0": 1}}
    M = formats.module_from_json(doc)
    f = formats.map_from_json({"degree": 0, "blocks": {"0": [["1/2"]]}}, M, M)
    assert formats.map_to_json(f)["blocks"]["0"] == [["1/2"]]


@pytest.mark.parametrize(
    "text",
    ["", "   ", "{", "[]", '{"ranks": {"x": 1}, "ring": "Z"}', '{"ranks": {"0": -1}, "ring": "Z"}', '{"foo": 1}'],
)
def test_malformed(text):
    with pytest.raises(FormatError):
        kind, _ = formats.load_document(formats.loads(text))


def test_bad_block_shape(interval):
    doc = formats.sdr_to_json(interval)
    doc["f"]["blocks"]["0"] = [[1, 1, 1]]
    with pytest.raises(FormatError):
        formats.load_document(doc)


def test_validation_on_load():
    bad = formats.sdr_to_json(interval_sdr(h_sign=1))
    with pytest.raises(SdrViolation):
        formats.load_document(bad)
    doc = formats.sdr_to_json(interval_sdr())
    doc["source"]["d"]["blocks"] = {}
    with pytest.raises(SdrViolation):
        formats.load_document(doc)


def test_perturbation_checked_on_load(interval):
    doc = {"complex": formats.complex_to_json(interval.source), "delta": {"degree": -1, "blocks": {"1": [[0], [1]]}}}
    formats.load_document(doc)
    doc["complex"]["module"]["ranks"] = {"0": 2, "1": 1, "2": 1}
    doc["complex"]["module"].pop("labels")
    doc["delta"]["blocks"]["2"] = [[1]]
    with pytest.raises((MaurerCartanViolation, FormatError)):
        formats.load_document(doc)


def test_path_references(tmp_path, interval):
    formats.write(tmp_path / "a.json", formats.complex_to_json(interval.source))
    doc = formats.sdr_to_json(interval)
    doc["source"] = "a.json"
    formats.write(tmp_path / "s.json", doc)
    kind, value = formats.load_path(tmp_path / "s.json")
    assert kind == "sdr" and value == interval


def test_stored_perturbed_output_is_rechecked(interval, interval_delta):
    doc = formats.perturbed_to_json(perturb_sdr(interval, interval_delta))
    formats.load_document(doc)
    doc["delta_prime"] = {"degree": -1, "blocks": {}}
    formats.load_document(doc)
    doc["result"]["h"]["blocks"] = {}
    with pytest.raises((FormatError, SdrViolation)):
        formats.load_document(doc)


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.json")), ids=lambda p: p.name)
def test_corpus_round_trip(path):
    text = path.read_text(encoding="utf-8")
    obj = formats.loads(text)
    assert formats.dumps(obj) == text
    try:
        kind = formats.detect_kind(obj)
    except FormatError:
        return  # golden outputs such as homology reports
    _, value = formats.load_document(obj, path.parent)
    assert formats.dumps(formats.dump_document(kind, value)) == text


def test_corpus_is_current():
    from hperturb.corpus import corpus_documents

    for name, doc in corpus_documents().items():
        assert (CORPUS / name).read_text(encoding="utf-8") == formats.dumps(doc), name


def test_circle_golden():
    golden = json.loads((CORPUS / "circle.homology.json").read_text())
    assert golden == {"0": {"betti": 1, "torsion": []}, "1": {"betti": 1, "torsion": []}}
    _, s = formats.load_path(CORPUS / "circle.sdr.json")
    assert s == circle_sdr()


def test_fourfold_counterexample_fixture():
    from hperturb.bpl import transfer_composites
    from hperturb.graded import identity

    _, (delta, s) = formats.load_path(CORPUS / "fourfold.perturbation.json")
    composite = transfer_composites(s, delta)["four-fold"]
    assert composite != identity(s.source.module)
    stored = formats.read(CORPUS / "fourfold.composite.json")
    assert formats.map_to_json(composite) == stored
