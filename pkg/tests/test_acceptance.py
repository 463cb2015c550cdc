"""Acceptance criteria, each at its stated trial count and exact equality.

Every test prints one ``criterion N: PASS|FAIL`` line (shown with ``pytest -s``
or when this file is run as a script).
"""

import importlib
import random
import subprocess
import sys
from pathlib import Path

import pytest

from hperturb import checks, formats
from hperturb.bpl import (
    check_tensor_inner_case,
    check_tensor_outer_case,
    perturb_sdr,
)
from hperturb.complex import check_maurer_cartan, perturb_complex
from hperturb.errors import FormatError, SdrViolation, Violation
from hperturb.fixtures import interval_complex, interval_perturbation, interval_sdr
from hperturb.generate import random_sdr
from hperturb.homology import smith_normal_form
from hperturb.nilpotent import neumann_inverse
from hperturb.ring import ZZ
from hperturb.sdr import revalidate, sdr_defects

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
SEED = 20240601


LINES = []


def report(n, ok, detail=""):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}{' - ' + detail if detail else ''}"
    LINES.append(line)
    print(line)
    assert ok, detail


def run_trials(name, trials, verify, max_rank=12, build=None):
    """Run ``verify`` on ``trials`` seeded instances; return failing trial ids."""
    build = build or checks.SUITES[name][0]
    failed = []
    for i in range(trials):
        inst = build(checks.trial_rng(SEED, name, i), ZZ, max_rank)
        try:
            verify(inst)
        except (Violation, AssertionError) as exc:
            failed.append((i, str(exc)))
    return failed


def test_criterion_01_sdr_axioms():
    def verify(inst):
        for s in inst["stack"]:
            defects = sdr_defects(s.source, s.target, s.f, s.g, s.h)
            bad = [name for name, witness in defects if not witness.is_zero()]
            if bad:
                raise Violation(bad)

    def build(rng, ring, max_rank):
        return {"stack": [random_sdr(rng, ring, max_rank).sdr]}

    failed = run_trials("sdr-axioms", 500, verify, build=build)
    valid_signs = []
    for c in range(-3, 4):
        s = interval_sdr(h_sign=c)
        defects = sdr_defects(s.source, s.target, s.f, s.g, s.h)
        if all(w.is_zero() for _, w in defects):
            valid_signs.append(c)
    with pytest.raises(SdrViolation):
        revalidate(interval_sdr(h_sign=1))
    report(1, not failed and valid_signs == [-1], f"500 SDRs, {len(failed)} failures; valid h(b) signs {valid_signs}")


def test_criterion_02_calculus():
    failed = run_trials("identities", 500, checks.verify_identities)
    report(2, not failed, f"500 trials of the identity list, {len(failed)} failures {failed[:1]}")


def test_criterion_03_perturbation_lemma():
    def verify(inst):
        s, delta = inst["sdr"], inst["delta"]
        out = perturb_sdr(s, delta)
        r, d = out.result, delta.delta
        # (a) relations against the perturbed differentials
        assert r.source == perturb_complex(delta) and r.target == perturb_complex(out.delta_prime)
        revalidate(r)
        # (b) both forms of delta' and of h^
        assert r.f @ d @ s.g == s.f @ d @ r.g
        left, _ = neumann_inverse(d @ s.h)
        right, _ = neumann_inverse(s.h @ d)
        assert s.h @ left == right @ s.h == r.h
        # (c) delta' solves Maurer-Cartan on B
        check_maurer_cartan(out.delta_prime.delta, s.target)

    failed = run_trials("bpl", 300, verify)
    report(3, not failed, f"300 pairs, {len(failed)} failures {failed[:1]}")


def test_criterion_04_universal_property():
    sizes = []

    def verify(inst):
        sizes.append(inst["complex"].module.total_rank + inst["other"].module.total_rank)
        checks.verify_universal(inst)

    failed = run_trials("universal", 100, verify, max_rank=12)
    report(4, not failed and max(sizes) <= 12, f"100 triples (rank ≤ {max(sizes)}), {len(failed)} failures")


def test_criterion_05_vertical():
    failed = run_trials("vertical", 200, checks.verify_vertical)
    report(5, not failed, f"200 stacks, {len(failed)} failures {failed[:1]}")


def test_criterion_06_iteration():
    failed = run_trials("iteration", 200, checks.verify_iteration)
    report(6, not failed, f"200 triples incl. α-composite identity, {len(failed)} failures {failed[:1]}")


def test_criterion_07_tensor():
    sizes = []

    def verify(inst):
        sizes.append(inst["left"].source.module.total_rank * inst["right"].source.module.total_rank)
        checks.verify_tensor(inst)

    failed = run_trials("tensor", 100, verify, max_rank=24)
    report(7, not failed and max(sizes) <= 24, f"100 pairs (rank ≤ {max(sizes)}), {len(failed)} failures")


def test_criterion_07_tensor_inner_case():
    rng = random.Random(SEED)
    for _ in range(20):
        framed = random_sdr(rng, ZZ, 6)
        s = framed.sdr
        delta = checks._perturbation(rng, s.source, framed.source_frame, [s.h])
        check_tensor_inner_case(interval_complex(), s, delta)
    report("7 (1 ⊗ δ case)", True, "20 instances")


def test_criterion_07_tensor_outer_case():
    rng = random.Random(SEED + 1)
    for _ in range(20):
        framed = random_sdr(rng, ZZ, 6)
        check_tensor_outer_case(interval_perturbation(), framed.sdr)
        c = random_sdr(rng, ZZ, 5)
        delta = checks._filtered(rng, c.sdr.source, c.source_frame)
        check_tensor_outer_case(delta, framed.sdr)
    report("7 (δ ⊗ 1 case)", True, "40 instances")


def test_criterion_08_composites():
    failed = run_trials("composites", 200, checks.verify_composites, build=checks.SUITES["bpl"][0])
    report(8, not failed, f"200 trials, {len(failed)} failures {failed[:1]}")


def test_criterion_09_homology():
    calls = []
    hom = importlib.import_module("hperturb.homology")

    original = hom._self_check

    def counting(*args):
        calls.append(1)
        return original(*args)

    hom._self_check = counting
    try:
        failed = run_trials("homology", 100, checks.verify_homology)
    finally:
        hom._self_check = original
    smith_normal_form(((2, 4), (6, 8)))
    report(9, not failed and calls, f"100 outputs, {len(failed)} failures, {len(calls)} SNF self-checks")


def test_criterion_10_determinism_and_round_trip(tmp_path):
    outputs = {}
    for kind in ("complex", "sdr", "stacked-sdr", "perturbation", "tensor-pair"):
        for run in ("a", "b"):
            path = tmp_path / f"{kind}.{run}.json"
            cmd = [sys.executable, "-m", "hperturb.cli", "gen", kind, "--seed", "42", "--max-rank", "10", "--out", str(path)]
            assert subprocess.run(cmd).returncode == 0
            outputs[kind, run] = path.read_bytes()
    same = all(outputs[k, "a"] == outputs[k, "b"] for k in {k for k, _ in outputs})
    mismatched = []
    for path in sorted(CORPUS.glob("*.json")):
        text = path.read_text(encoding="utf-8")
        obj = formats.loads(text)
        if formats.dumps(obj) != text:
            mismatched.append(path.name)
            continue
        try:
            kind = formats.detect_kind(obj)
        except FormatError:
            continue  # golden reports are not loadable documents
        _, value = formats.load_document(obj, path.parent)
        if formats.dumps(formats.dump_document(kind, value)) != text:
            mismatched.append(path.name)
    report(10, same and not mismatched, f"gen byte-identical: {same}; corpus round-trip mismatches: {mismatched}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
