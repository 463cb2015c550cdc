"""Regenerate the example corpus and its golden outputs.

    python -m hperturb.corpus corpus/
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

from . import formats
from .bpl import check_tensor_functoriality, perturb_sdr, transfer_composites, tensor_perturbation
from .checks import build_bpl, trial_rng
from .complex import check_maurer_cartan, perturb_complex
from .fixtures import circle_sdr, interval_perturbation, interval_sdr, point_complex
from .errors import NotNilpotent
from .generate import filtered_perturbation, random_perturbation, random_sdr, random_stack
from .graded import GradedMap
from .homology import homology
from .nilpotent import nilpotency_index
from .ring import ZZ
from .sdr import compose_sdr, tensor_sdr

STACK_SEED = 3
TENSOR_SEED = 5
FOURFOLD_SEED = 0


def _tensor_pair():
    rng = random.Random(TENSOR_SEED)
    left = random_sdr(rng, ZZ, 4)
    right = random_sdr(rng, ZZ, 4)
    dl = random_perturbation(rng, left.sdr.source, left.source_frame, [left.sdr.h])
    dr = random_perturbation(rng, right.sdr.source, right.source_frame, [right.sdr.h])
    try:
        nilpotency_index(tensor_perturbation(dl, dr).delta @ tensor_sdr(left.sdr, right.sdr).h)
    except NotNilpotent:
        dl = filtered_perturbation(rng, left.sdr.source, left.source_frame)
        dr = filtered_perturbation(rng, right.sdr.source, right.source_frame)
    return left.sdr, right.sdr, dl, dr


def corpus_documents() -> dict:
    """File name -> JSON document, inputs and golden outputs alike."""
    docs = {}
    point = point_complex()
    docs["point.json"] = formats.complex_to_json(point)
    docs["point.homology.json"] = homology(point).to_json()

    s, delta = interval_sdr(), interval_perturbation()
    docs["interval.sdr.json"] = formats.sdr_to_json(s)
    docs["interval.delta.json"] = formats.perturbation_to_json(delta)
    docs["interval.perturbed.json"] = formats.perturbed_to_json(perturb_sdr(s, delta))
    docs["interval.homology.json"] = homology(s.source).to_json()
    docs["interval.perturbed.homology.json"] = homology(perturb_complex(delta)).to_json()

    stack = [x.sdr for x in random_stack(random.Random(STACK_SEED), ZZ, 8, stages=3)]
    docs["stacked.json"] = formats.dump_document("stacked-sdr", stack)
    composite = stack[0]
    for x in stack[1:]:
        composite = compose_sdr(composite, x)
    docs["stacked.composite.json"] = formats.sdr_to_json(composite)

    left, right, dl, dr = _tensor_pair()
    docs["tensor-pair.json"] = formats.dump_document("tensor-pair", (left, right, dl, dr))
    report = check_tensor_functoriality(left, right, dl, dr)
    docs["tensor-pair.result.json"] = {
        "result": formats.sdr_to_json(report["result"]),
        "delta_prime": formats.map_to_json(report["delta_prime"].delta),
    }

    circle = circle_sdr()
    docs["circle.sdr.json"] = formats.sdr_to_json(circle)
    docs["circle.homology.json"] = homology(circle.source).to_json()
    docs["circle.perturbed.json"] = formats.perturbed_to_json(perturb_sdr(circle, _circle_delta(circle)))

    # an instance whose four-fold composite is not the identity
    s, delta = _fourfold_instance()
    docs["fourfold.perturbation.json"] = formats.dump_document("perturbation", (delta, s))
    composite = transfer_composites(s, delta)["four-fold"]
    docs["fourfold.composite.json"] = formats.map_to_json(composite)
    return docs


def _fourfold_instance():
    inst = build_bpl(trial_rng(FOURFOLD_SEED, "bpl", 0), ZZ, 6)
    return inst["sdr"], inst["delta"]


def _circle_delta(circle):
    # d + delta kills e1 and leaves e0 as the only edge between the vertices
    M = circle.source.module
    delta = GradedMap.from_images(M, M, -1, {"e1": {"v1": 1, "v0": -1}})
    return check_maurer_cartan(delta, circle.source)


def write_corpus(directory) -> list:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, doc in corpus_documents().items():
        formats.write(directory / name, doc)
        written.append(name)
    return written


if __name__ == "__main__":
    for name in write_corpus(sys.argv[1] if len(sys.argv) > 1 else "corpus"):
        print(name)
