"""Command-line front end.

Exit codes: 0 success, 1 mathematical violation, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import checks, formats
from .bpl import check_tensor_functoriality, perturb_sdr, tensor_perturbation
from .complex import perturb_complex, zero_perturbation
from .errors import FormatError, HptError, NotNilpotent, SdrViolation, Violation
from .generate import (
    filtered_perturbation,
    random_complex,
    random_perturbation,
    random_sdr,
    random_stack,
)
from .homology import homology
from .nilpotent import nilpotency_index
from .ring import Ring
from .sdr import compose_sdr, push_along, tensor_sdr


def _emit(obj, out=None):
    text = formats.dumps(obj)
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise FormatError(f"cannot write {out}: {exc}") from None
    else:
        sys.stdout.write(text)


def _load(path, *kinds):
    kind, value = formats.load_path(path)
    if kinds and kind not in kinds:
        raise FormatError(f"{path}: expected {' or '.join(kinds)}, found {kind}")
    return kind, value


def _admissibility(delta, h):
    try:
        index = nilpotency_index(delta @ h)
    except NotNilpotent as exc:
        return {"admissible": False, "failing_degree": exc.degree}
    return {"admissible": True, "nilpotency": {str(k): n for k, n in sorted(index.index.items())}}


# -- commands ---------------------------------------------------------------


def cmd_validate(args):
    kind, value = _load(args.path)
    report = {"kind": kind, "valid": True}
    if kind == "perturbation":
        p, sdr = value
        if sdr is not None:
            report.update(_admissibility(p.delta, sdr.h))
    elif kind == "stacked-sdr":
        for upper, lower in zip(value, value[1:]):
            if upper.target != lower.source:
                raise Violation("stack stages do not compose")
        report["stages"] = len(value)
    elif kind == "perturbed-sdr":
        report["nilpotency"] = {str(k): n for k, n in sorted(value.certificate.index.items())}
    _emit(report, args.out)
    return 0


def _load_delta(path, complex_):
    """A perturbation file may carry its own complex or just a ``delta`` map."""
    obj = formats.read(path)
    if "complex" in obj and formats.complex_from_json(obj["complex"], _parent(path)) != complex_:
        raise Violation("perturbation lives on a different complex")
    return formats.perturbation_from_json({"delta": obj["delta"]} if "delta" in obj else obj, complex_=complex_)


def _parent(path):
    return Path(path).parent


def cmd_perturb(args):
    _, sdr = _load(args.sdr, "sdr")
    if args.delta:
        delta = _load_delta(args.delta, sdr.source)
    else:
        delta = zero_perturbation(sdr.source)
    try:
        out = perturb_sdr(sdr, delta)
    except NotNilpotent as exc:
        print(f"NotNilpotent: delta h is not nilpotent in degree {exc.degree}", file=sys.stderr)
        return 1
    _emit(formats.perturbed_to_json(out), args.out)
    return 0


def cmd_compose(args):
    stages = []
    for path in args.paths:
        kind, value = _load(path, "sdr", "stacked-sdr")
        stages.extend(value if kind == "stacked-sdr" else [value])
    if not stages:
        raise FormatError("nothing to compose")
    result = stages[0]
    for s in stages[1:]:
        result = compose_sdr(result, s)
    _emit(formats.sdr_to_json(result), args.out)
    return 0


def cmd_tensor(args):
    if len(args.paths) == 1:
        _, (left, right, dl, dr) = _load(args.paths[0], "tensor-pair")
        if dl is None or dr is None:
            _emit(formats.sdr_to_json(tensor_sdr(left, right)), args.out)
            return 0
        report = check_tensor_functoriality(left, right, dl, dr)
        _emit(
            {
                "result": formats.sdr_to_json(report["result"]),
                "delta_prime": formats.map_to_json(report["delta_prime"].delta),
            },
            args.out,
        )
        return 0
    if len(args.paths) != 2:
        raise FormatError("tensor takes one tensor-pair file or two SDR files")
    _, left = _load(args.paths[0], "sdr")
    _, right = _load(args.paths[1], "sdr")
    _emit(formats.sdr_to_json(tensor_sdr(left, right)), args.out)
    return 0


def cmd_push_along(args):
    _, sdr = _load(args.sdr, "sdr")
    delta_prime = _load_delta(args.delta, sdr.target)
    pushed, source_delta = push_along(sdr, delta_prime)
    _emit({"sdr": formats.sdr_to_json(pushed), "delta": formats.map_to_json(source_delta.delta)}, args.out)
    return 0


def cmd_homology(args):
    kind, value = _load(args.path, "complex", "sdr", "perturbation")
    if kind == "sdr":
        value = value.source
    elif kind == "perturbation":
        value = perturb_complex(value[0])
    if value.ring.is_field:
        print(f"note: over {value.ring} homology has no torsion", file=sys.stderr)
    _emit(homology(value).to_json(), args.out)
    return 0


def cmd_gen(args):
    ring = args.ring
    rng = random.Random(args.seed)
    if args.kind == "complex":
        doc = formats.complex_to_json(random_complex(rng, ring, args.max_rank).complex)
    elif args.kind == "sdr":
        doc = formats.sdr_to_json(random_sdr(rng, ring, args.max_rank).sdr)
    elif args.kind == "stacked-sdr":
        stack = [s.sdr for s in random_stack(rng, ring, args.max_rank, stages=3)]
        doc = formats.dump_document("stacked-sdr", stack)
    elif args.kind == "perturbation":
        doc = _gen_perturbation(rng, ring, args)
    else:
        left = random_sdr(rng, ring, max(1, args.max_rank // 2))
        right = random_sdr(rng, ring, max(1, args.max_rank // 2))
        dl = random_perturbation(rng, left.sdr.source, left.source_frame, [left.sdr.h])
        dr = random_perturbation(rng, right.sdr.source, right.source_frame, [right.sdr.h])
        total = tensor_sdr(left.sdr, right.sdr)
        try:
            nilpotency_index(tensor_perturbation(dl, dr).delta @ total.h)
        except NotNilpotent:
            dl = filtered_perturbation(rng, left.sdr.source, left.source_frame)
            dr = filtered_perturbation(rng, right.sdr.source, right.source_frame)
        doc = formats.dump_document("tensor-pair", (left.sdr, right.sdr, dl, dr))
    _emit(doc, args.out)
    return 0


def _gen_perturbation(rng, ring, args):
    if args.on is None:
        framed = random_sdr(rng, ring, args.max_rank)
        p = random_perturbation(rng, framed.sdr.source, framed.source_frame, [framed.sdr.h])
        return formats.dump_document("perturbation", (p, framed.sdr))
    kind, value = _load(args.on, "complex", "sdr")
    if kind == "sdr":
        p = random_perturbation(rng, value.source, None, [value.h])
        return formats.dump_document("perturbation", (p, value))
    p = random_perturbation(rng, value)
    return formats.dump_document("perturbation", (p, None))


def cmd_check(args):
    suites = list(checks.SUITES) if args.suite == "all" else [args.suite]
    reports = []
    for suite in suites:
        rank = args.max_rank if args.max_rank is not None else checks.DEFAULT_MAX_RANK.get(suite, 12)
        reports.append(checks.run_suite(suite, args.seed, args.trials, rank, args.ring, args.jobs))
    for r in reports:
        status = "ok" if not r.failures else "FAIL"
        print(f"{r.theorem}: {r.trials} trials, {r.failures} failures [{status}]", file=sys.stderr)
    failing = [r for r in reports if r.failures]
    doc = {"reports": [r.to_json() for r in reports]}
    if failing:
        doc["counterexample"] = failing[0].counterexample
    _emit(doc, args.out)
    return 1 if failing else 0


# -- argument parsing ------------------------------------------------------------


def _ring(text):
    try:
        return Ring.parse(text)
    except FormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="hperturb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="parse and re-validate a document")
    p.add_argument("path")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("perturb", parents=[common], help="apply the perturbation lemma")
    p.add_argument("sdr")
    p.add_argument("delta", nargs="?", help="perturbation of the SDR's source (default 0)")
    p.set_defaults(run=cmd_perturb)

    p = sub.add_parser("compose", parents=[common], help="compose SDRs, top first")
    p.add_argument("paths", nargs="+")
    p.set_defaults(run=cmd_compose)

    p = sub.add_parser("tensor", parents=[common], help="tensor two SDRs or perturb a tensor pair")
    p.add_argument("paths", nargs="+")
    p.set_defaults(run=cmd_tensor)

    p = sub.add_parser("push-along", parents=[common], help="push a target perturbation back along an SDR")
    p.add_argument("sdr")
    p.add_argument("delta")
    p.set_defaults(run=cmd_push_along)

    p = sub.add_parser("homology", parents=[common], help="Betti numbers and torsion")
    p.add_argument("path")
    p.set_defaults(run=cmd_homology)

    p = sub.add_parser("gen", parents=[common], help="generate a random instance")
    p.add_argument("kind", choices=["complex", "sdr", "stacked-sdr", "perturbation", "tensor-pair"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rank", type=int, default=8)
    p.add_argument("--ring", type=_ring, default=Ring.parse("Z"))
    p.add_argument("--on", help="complex or SDR file to perturb (perturbation kind)")
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("check", parents=[common], help="run randomized property suites")
    p.add_argument("--suite", choices=[*checks.SUITES, "all"], default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-rank", type=int, default=None)
    p.add_argument("--ring", type=_ring, default=Ring.parse("Z"))
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(run=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if getattr(args, "trials", 0) < 0 or getattr(args, "max_rank", None) is not None and args.max_rank < 1:
        print("error: --trials must be >= 0 and --max-rank >= 1", file=sys.stderr)
        return 2
    try:
        return args.run(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SdrViolation as exc:
        print(f"SdrViolation: {exc}", file=sys.stderr)
        return 1
    except NotNilpotent as exc:
        print(f"NotNilpotent: degree {exc.degree}", file=sys.stderr)
        return 1
    except Violation as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except HptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
