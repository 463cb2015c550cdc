"""Hand-built instances used by the tests and the shipped corpus."""

from __future__ import annotations

from .complex import ChainComplex, Perturbation, check_maurer_cartan
from .graded import GradedMap, GradedModule
from .ring import ZZ, Ring
from .sdr import Sdr, validate_sdr


def point_complex(ring: Ring = ZZ, name: str = "x") -> ChainComplex:
    module = GradedModule(ring, {0: 1}, {0: (name,)})
    return ChainComplex(module, GradedMap(module, module, -1))


def interval_complex(ring: Ring = ZZ) -> ChainComplex:
    """Vertices a, b in degree 0, edge e in degree 1 with d e = a - b."""
    module = GradedModule(ring, {0: 2, 1: 1}, {0: ("a", "b"), 1: ("e",)})
    d = GradedMap.from_images(module, module, -1, {"e": {"a": 1, "b": -1}})
    return ChainComplex(module, d)


def interval_sdr(ring: Ring = ZZ, h_sign: int = -1) -> Sdr:
    """Contraction of the interval onto x; ``h(b) = -e`` is the valid sign."""
    A, B = interval_complex(ring), point_complex(ring)
    a, b = A.module, B.module
    f = GradedMap.from_images(a, b, 0, {"a": {"x": 1}, "b": {"x": 1}})
    g = GradedMap.from_images(b, a, 0, {"x": {"a": 1}})
    h = GradedMap.from_images(a, a, 1, {"b": {"e": h_sign}})
    return validate_sdr(A, B, f, g, h) if h_sign == -1 else Sdr(A, B, f, g, h)


def interval_perturbation(ring: Ring = ZZ) -> Perturbation:
    """delta(e) = -a, so the perturbed differential sends e to -b."""
    A = interval_complex(ring)
    delta = GradedMap.from_images(A.module, A.module, -1, {"e": {"a": -1}})
    return check_maurer_cartan(delta, A)


def circle_complex(ring: Ring = ZZ) -> ChainComplex:
    """Two vertices and two edges, both running between them."""
    module = GradedModule(ring, {0: 2, 1: 2}, {0: ("v0", "v1"), 1: ("e0", "e1")})
    d = GradedMap.from_images(
        module, module, -1, {"e0": {"v1": 1, "v0": -1}, "e1": {"v0": 1, "v1": -1}}
    )
    return ChainComplex(module, d)


def circle_minimal_complex(ring: Ring = ZZ) -> ChainComplex:
    module = GradedModule(ring, {0: 1, 1: 1}, {0: ("p",), 1: ("c",)})
    return ChainComplex(module, GradedMap(module, module, -1))


def circle_sdr(ring: Ring = ZZ) -> Sdr:
    """Collapse the edge e0 of the circle onto the minimal model (p, c)."""
    A, B = circle_complex(ring), circle_minimal_complex(ring)
    a, b = A.module, B.module
    f = GradedMap.from_images(a, b, 0, {"v0": {"p": 1}, "v1": {"p": 1}, "e1": {"c": 1}})
    g = GradedMap.from_images(b, a, 0, {"p": {"v0": 1}, "c": {"e0": 1, "e1": 1}})
    h = GradedMap.from_images(a, a, 1, {"v1": {"e0": 1}})
    return validate_sdr(A, B, f, g, h)


def multiplication_complex(n: int = 2, ring: Ring = ZZ) -> ChainComplex:
    """Z --n--> Z from degree 1 to degree 0."""
    module = GradedModule(ring, {0: 1, 1: 1}, {0: ("y",), 1: ("z",)})
    d = GradedMap.from_images(module, module, -1, {"z": {"y": n}})
    return ChainComplex(module, d)
