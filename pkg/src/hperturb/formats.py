"""JSON text format for modules, maps, complexes, SDRs and bundles.

Output is canonical: UTF-8, fixed key order, degrees in numeric order and
matrix rows on one line each, so equal objects serialize to equal bytes.
Wherever a complex is expected a string may be given instead; it is read
as a path relative to the referring file.
"""

from __future__ import annotations

import json
from pathlib import Path

from .calculus import NonDgIso
from .complex import ChainComplex, Perturbation, check_maurer_cartan
from .errors import FormatError, HptError
from .graded import GradedMap, GradedModule
from .ring import Ring
from .sdr import Sdr, SdrSquare, validate_sdr, validate_square


# -- canonical text -------------------------------------------------------


def _is_flat(x):
    return isinstance(x, list) and all(not isinstance(y, (list, dict)) for y in x)


def _dump(obj, level):
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_dump(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if _is_flat(obj):
            return json.dumps(obj, ensure_ascii=False)
        items = [f"{inner}{_dump(v, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False)


def dumps(obj) -> str:
    return _dump(obj, 0) + "\n"


def loads(text: str):
    if not text.strip():
        raise FormatError("empty document")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from None


def read(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    return loads(text)


def write(path, obj):
    try:
        Path(path).write_text(dumps(obj), encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot write {path}: {exc}") from None


# -- modules and maps ----------------------------------------------------


def _degree_key(k):
    try:
        return int(k)
    except (TypeError, ValueError):
        raise FormatError(f"degree key {k!r} is not an integer") from None


def _require(obj, *keys):
    if not isinstance(obj, dict):
        raise FormatError(f"expected an object, got {type(obj).__name__}")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise FormatError(f"missing keys {missing}")


def module_to_json(M: GradedModule) -> dict:
    out = {"ring": str(M.ring), "ranks": {str(k): r for k, r in M.ranks.items()}}
    if M.labels is not None:
        out["labels"] = {str(k): list(v) for k, v in M.labels.items()}
    return out


def module_from_json(obj) -> GradedModule:
    _require(obj, "ring", "ranks")
    ring = Ring.parse(obj["ring"])
    ranks = {_degree_key(k): r for k, r in obj["ranks"].items()}
    if any(not isinstance(r, int) or isinstance(r, bool) or r < 0 for r in ranks.values()):
        raise FormatError("ranks must be nonnegative integers")
    labels = obj.get("labels")
    if labels is not None:
        labels = {_degree_key(k): tuple(v) for k, v in labels.items()}
    try:
        return GradedModule(ring, ranks, labels)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def map_to_json(f: GradedMap) -> dict:
    ring = f.ring
    return {
        "degree": f.degree,
        "blocks": {str(k): [[ring.encode(x) for x in row] for row in m] for k, m in f.blocks.items()},
    }


def map_from_json(obj, source: GradedModule, target: GradedModule) -> GradedMap:
    _require(obj, "degree", "blocks")
    ring = source.ring
    degree = obj["degree"]
    if not isinstance(degree, int) or isinstance(degree, bool):
        raise FormatError("degree must be an integer")
    blocks = {}
    for k, rows in obj["blocks"].items():
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise FormatError(f"block {k} is not a list of rows")
        blocks[_degree_key(k)] = tuple(tuple(ring.decode(x) for x in row) for row in rows)
    try:
        return GradedMap(source, target, degree, blocks)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


# -- complexes and everything built on them ------------------------------


def complex_to_json(A: ChainComplex) -> dict:
    return {"module": module_to_json(A.module), "d": map_to_json(A.d)}


def complex_from_json(obj, base=None) -> ChainComplex:
    if isinstance(obj, str):
        path = Path(base or ".") / obj
        return complex_from_json(read(path), path.parent)
    _require(obj, "module", "d")
    module = module_from_json(obj["module"])
    return ChainComplex(module, map_from_json(obj["d"], module, module))


def perturbation_to_json(p: Perturbation) -> dict:
    return {"complex": complex_to_json(p.complex), "delta": map_to_json(p.delta)}


def perturbation_from_json(obj, base=None, complex_=None) -> Perturbation:
    _require(obj, "delta")
    if "complex" in obj:
        complex_ = complex_from_json(obj["complex"], base)
    elif complex_ is None:
        raise FormatError("perturbation without a complex")
    return check_maurer_cartan(map_from_json(obj["delta"], complex_.module, complex_.module), complex_)


def sdr_to_json(s: Sdr) -> dict:
    return {
        "source": complex_to_json(s.source),
        "target": complex_to_json(s.target),
        "f": map_to_json(s.f),
        "g": map_to_json(s.g),
        "h": map_to_json(s.h),
    }


def sdr_from_json(obj, base=None, validate=True) -> Sdr:
    _require(obj, "source", "target", "f", "g", "h")
    A = complex_from_json(obj["source"], base)
    B = complex_from_json(obj["target"], base)
    f = map_from_json(obj["f"], A.module, B.module)
    g = map_from_json(obj["g"], B.module, A.module)
    h = map_from_json(obj["h"], A.module, A.module)
    return validate_sdr(A, B, f, g, h) if validate else Sdr(A, B, f, g, h)


def iso_to_json(a: NonDgIso) -> dict:
    return {
        "source": module_to_json(a.source),
        "target": module_to_json(a.target),
        "alpha": map_to_json(a.alpha),
        "alpha_inv": map_to_json(a.alpha_inv),
    }


def iso_from_json(obj, source=None, target=None) -> NonDgIso:
    _require(obj, "alpha", "alpha_inv")
    source = module_from_json(obj["source"]) if "source" in obj else source
    target = module_from_json(obj["target"]) if "target" in obj else target
    if source is None or target is None:
        raise FormatError("isomorphism without source/target modules")
    return NonDgIso(map_from_json(obj["alpha"], source, target), map_from_json(obj["alpha_inv"], target, source))


def square_to_json(q: SdrSquare) -> dict:
    return {"top": sdr_to_json(q.top), "bottom": sdr_to_json(q.bottom), "u": map_to_json(q.u), "v": map_to_json(q.v)}


def square_from_json(obj, base=None) -> SdrSquare:
    _require(obj, "top", "bottom", "u", "v")
    top, bottom = sdr_from_json(obj["top"], base), sdr_from_json(obj["bottom"], base)
    u = map_from_json(obj["u"], top.source.module, bottom.source.module)
    v = map_from_json(obj["v"], top.target.module, bottom.target.module)
    return validate_square(top, bottom, u, v)


def perturbed_to_json(p) -> dict:
    return {
        "original": sdr_to_json(p.original),
        "delta": map_to_json(p.delta.delta),
        "result": sdr_to_json(p.result),
        "delta_prime": map_to_json(p.delta_prime.delta),
        "transfer": {"alpha": map_to_json(p.transfer.alpha), "alpha_inv": map_to_json(p.transfer.alpha_inv)},
        "nilpotency": {str(k): n for k, n in p.certificate.index.items()},
    }


def homology_to_json(result) -> dict:
    return result.to_json()


# -- documents --------------------------------------------------------------


def detect_kind(obj) -> str:
    if not isinstance(obj, dict):
        raise FormatError("top-level document must be an object")
    keys = set(obj)
    if {"original", "result", "delta_prime"} <= keys:
        return "perturbed-sdr"
    if {"top", "bottom", "u", "v"} <= keys:
        return "square"
    if {"f", "g", "h"} <= keys:
        return "sdr"
    if "stack" in keys:
        return "stacked-sdr"
    if {"left", "right"} <= keys:
        return "tensor-pair"
    if "alpha" in keys:
        return "iso"
    if "delta" in keys:
        return "perturbation"
    if {"module", "d"} <= keys:
        return "complex"
    if "ranks" in keys:
        return "module"
    raise FormatError("unrecognized document")


def _perturbed_from_json(obj, base):
    from .bpl import perturb_sdr

    original = sdr_from_json(obj["original"], base)
    delta = perturbation_from_json({"delta": obj["delta"]}, complex_=original.source)
    out = perturb_sdr(original, delta)
    stored = sdr_from_json(obj["result"], base, validate=False)
    if stored != out.result or map_from_json(obj["delta_prime"], original.target.module, original.target.module) != out.delta_prime.delta:
        raise FormatError("stored perturbation-lemma output does not match a recomputation")
    return out


def load_document(obj, base=None):
    """Parse and re-validate a document; returns ``(kind, value)``."""
    kind = detect_kind(obj)
    try:
        if kind == "complex":
            return kind, complex_from_json(obj, base)
        if kind == "module":
            return kind, module_from_json(obj)
        if kind == "perturbation":
            sdr = sdr_from_json(obj["sdr"], base) if "sdr" in obj else None
            complex_ = sdr.source if sdr is not None else None
            p = perturbation_from_json(obj, base, complex_)
            return kind, (p, sdr)
        if kind == "sdr":
            return kind, sdr_from_json(obj, base)
        if kind == "square":
            return kind, square_from_json(obj, base)
        if kind == "iso":
            return kind, iso_from_json(obj)
        if kind == "stacked-sdr":
            return kind, [sdr_from_json(x, base) for x in obj["stack"]]
        if kind == "tensor-pair":
            left, right = sdr_from_json(obj["left"], base), sdr_from_json(obj["right"], base)
            dl = perturbation_from_json({"delta": obj["left_delta"]}, complex_=left.source) if "left_delta" in obj else None
            dr = perturbation_from_json({"delta": obj["right_delta"]}, complex_=right.source) if "right_delta" in obj else None
            return kind, (left, right, dl, dr)
        return kind, _perturbed_from_json(obj, base)
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"malformed {kind} document: {exc!r}") from None


def dump_document(kind, value) -> dict:
    """Inverse of :func:`load_document` (references come back inlined)."""
    if kind == "complex":
        return complex_to_json(value)
    if kind == "module":
        return module_to_json(value)
    if kind == "perturbation":
        p, sdr = value
        out = {}
        if sdr is not None:
            out["sdr"] = sdr_to_json(sdr)
        out.update(perturbation_to_json(p))
        return out
    if kind == "sdr":
        return sdr_to_json(value)
    if kind == "square":
        return square_to_json(value)
    if kind == "iso":
        return iso_to_json(value)
    if kind == "stacked-sdr":
        return {"stack": [sdr_to_json(s) for s in value]}
    if kind == "tensor-pair":
        left, right, dl, dr = value
        out = {"left": sdr_to_json(left), "right": sdr_to_json(right)}
        if dl is not None:
            out["left_delta"] = map_to_json(dl.delta)
        if dr is not None:
            out["right_delta"] = map_to_json(dr.delta)
        return out
    if kind == "perturbed-sdr":
        return perturbed_to_json(value)
    raise HptError(f"unknown kind {kind}")


def load_path(path):
    path = Path(path)
    return load_document(read(path), path.parent)
