"""Strong deformation retractions and their double category.

An SDR ``A -> B`` is a triple ``(f, g, h)`` with ``f: A -> B`` and ``g: B -> A``
chain maps, ``h`` a degree +1 endomap of ``A``, subject to

    Df = 0, Dg = 0, Dh = 1 - gf, fg = 1, fh = 0, hg = 0, hh = 0.

Squares between two SDRs are pairs of chain maps commuting with all three
components.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complex import (
    ChainComplex,
    Perturbation,
    check_maurer_cartan,
    hom_differential,
    perturb_complex,
    tensor_complex,
)
from .errors import (
    CompatibilityViolation,
    ComplexMismatch,
    ModuleMismatch,
    NaturalityViolation,
    RingMismatch,
    SdrViolation,
)
from .graded import GradedMap, GradedModule, identity, sign, tensor_map, tensor_module, tensor_offsets

RELATIONS = ("Df = 0", "Dg = 0", "Dh = 1 - gf", "fg = 1", "fh = 0", "hg = 0", "hh = 0")


@dataclass(frozen=True, eq=False)
class Sdr:
    source: ChainComplex
    target: ChainComplex
    f: GradedMap
    g: GradedMap
    h: GradedMap

    def __eq__(self, other):
        if not isinstance(other, Sdr):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.f == other.f
            and self.g == other.g
            and self.h == other.h
        )

    __hash__ = None

    def __repr__(self):
        return f"Sdr({self.source.module.ranks} -> {self.target.module.ranks})"


def sdr_defects(source: ChainComplex, target: ChainComplex, f, g, h):
    """Every relation with its defect map (zero when the relation holds)."""
    A, B = source.module, target.module
    one_a, one_b = identity(A), identity(B)
    return [
        ("Df = 0", hom_differential(f, source, target)),
        ("Dg = 0", hom_differential(g, target, source)),
        ("Dh = 1 - gf", hom_differential(h, source, source) - (one_a - g @ f)),
        ("fg = 1", f @ g - one_b),
        ("fh = 0", f @ h),
        ("hg = 0", h @ g),
        ("hh = 0", h @ h),
    ]


def validate_sdr(source: ChainComplex, target: ChainComplex, f, g, h) -> Sdr:
    A, B = source.module, target.module
    if source.ring != target.ring:
        raise RingMismatch(f"{source.ring} vs {target.ring}")
    shapes = [
        (f, A, B, 0, "f"),
        (g, B, A, 0, "g"),
        (h, A, A, 1, "h"),
    ]
    for m, s, t, n, name in shapes:
        if m.source != s or m.target != t or m.degree != n:
            raise ModuleMismatch(f"{name} has the wrong shape for an SDR")
    failed = [(name, defect) for name, defect in sdr_defects(source, target, f, g, h) if not defect.is_zero()]
    if failed:
        raise SdrViolation(failed)
    return Sdr(source, target, f, g, h)


def revalidate(s: Sdr) -> Sdr:
    return validate_sdr(s.source, s.target, s.f, s.g, s.h)


def identity_sdr(A: ChainComplex) -> Sdr:
    one = identity(A.module)
    return Sdr(A, A, one, one, GradedMap(A.module, A.module, 1))


def compose_sdr(first: Sdr, second: Sdr) -> Sdr:
    """``A -> C -> B`` gives ``(f' f, g g', h + g h' f)``."""
    if first.target != second.source:
        raise ComplexMismatch("SDRs are not composable")
    return validate_sdr(
        first.source,
        second.target,
        second.f @ first.f,
        first.g @ second.g,
        first.h + first.g @ second.h @ first.f,
    )


def tensor_sdr(left: Sdr, right: Sdr) -> Sdr:
    """``(f (x) f, g (x) g, h (x) 1 + gf (x) h)``; not symmetric in its factors."""
    if left.source.ring != right.source.ring:
        raise RingMismatch(f"{left.source.ring} vs {right.source.ring}")
    return validate_sdr(
        tensor_complex(left.source, right.source),
        tensor_complex(left.target, right.target),
        tensor_map(left.f, right.f),
        tensor_map(left.g, right.g),
        tensor_map(left.h, identity(right.source.module))
        + tensor_map(left.g @ left.f, right.h),
    )


# -- canonical isomorphisms of tensor products ---------------------------


def _permutation_map(source: GradedModule, target: GradedModule, rule):
    """Signed permutation; ``rule(n, j)`` gives (row, sign) for source column j in degree n."""
    blocks = {}
    for n, r in source.ranks.items():
        block = [[0] * r for _ in range(target.rank(n))]
        for j in range(r):
            i, s = rule(n, j)
            block[i][j] = s
        blocks[n] = tuple(map(tuple, block))
    return GradedMap(source, target, 0, blocks)


def _tensor_index(A, B, n):
    """Map (k, i, j) -> position in (A (x) B)_n."""
    out = {}
    for k, l, off in tensor_offsets(A, B, n):
        rb = B.rank(l)
        for i in range(A.rank(k)):
            for j in range(rb):
                out[(k, i, j)] = off + i * rb + j
    return out


def associator(A: GradedModule, B: GradedModule, C: GradedModule) -> GradedMap:
    """``(A (x) B) (x) C -> A (x) (B (x) C)``; a pure reindexing, no signs."""
    AB = tensor_module(A, B)
    src, tgt = tensor_module(AB, C), tensor_module(A, tensor_module(B, C))
    BC = tensor_module(B, C)
    table = {}
    for n in src.ranks:
        left = []
        for kab, kc, _ in tensor_offsets(AB, C, n):
            ab_pos = {v: key for key, v in _tensor_index(A, B, kab).items()}
            for p in range(AB.rank(kab)):
                ka, ia, ib = ab_pos[p]
                for ic in range(C.rank(kc)):
                    left.append((ka, ia, kab - ka, ib, kc, ic))
        outer = _tensor_index(A, BC, n)
        rows = []
        for ka, ia, kb, ib, kc, ic in left:
            inner = _tensor_index(B, C, kb + kc)[(kb, ib, ic)]
            rows.append(outer[(ka, ia, inner)])
        table[n] = rows
    return _permutation_map(src, tgt, lambda n, j: (table[n][j], 1))


def symmetry(A: GradedModule, B: GradedModule) -> GradedMap:
    """``x (x) y -> (-1)^{|x||y|} y (x) x``."""
    src, tgt = tensor_module(A, B), tensor_module(B, A)
    table = {}
    for n in src.ranks:
        swapped = _tensor_index(B, A, n)
        entries = sorted((pos, key) for key, pos in _tensor_index(A, B, n).items())
        table[n] = []
        for _, (k, i, j) in entries:
            l = n - k
            table[n].append((swapped[(l, j, i)], sign(k * l)))
    return _permutation_map(src, tgt, lambda n, j: table[n][j])


# -- squares --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SdrSquare:
    """A natural transformation from the SDR ``top`` to the SDR ``bottom``.

    ``u`` runs between the sources and ``v`` between the targets.
    """

    top: Sdr
    bottom: Sdr
    u: GradedMap
    v: GradedMap

    def __eq__(self, other):
        if not isinstance(other, SdrSquare):
            return NotImplemented
        return (self.top, self.bottom) == (other.top, other.bottom) and (self.u, self.v) == (
            other.u,
            other.v,
        )

    __hash__ = None


def validate_square(top: Sdr, bottom: Sdr, u: GradedMap, v: GradedMap, dg: bool = True) -> SdrSquare:
    """Check naturality on f, g and h; with ``dg=False`` u and v may be non-dg maps
    (this is how the filler produced by the perturbation lemma is checked)."""
    if u.source != top.source.module or u.target != bottom.source.module or u.degree != 0:
        raise ModuleMismatch("u does not run between the SDR sources")
    if v.source != top.target.module or v.target != bottom.target.module or v.degree != 0:
        raise ModuleMismatch("v does not run between the SDR targets")
    if dg:
        if not hom_differential(u, top.source, bottom.source).is_zero():
            raise NaturalityViolation("u is not a chain map")
        if not hom_differential(v, top.target, bottom.target).is_zero():
            raise NaturalityViolation("v is not a chain map")
    if v @ top.f != bottom.f @ u:
        raise NaturalityViolation("f")
    if u @ top.g != bottom.g @ v:
        raise NaturalityViolation("g")
    if u @ top.h != bottom.h @ u:
        raise NaturalityViolation("h")
    return SdrSquare(top, bottom, u, v)


def identity_square(s: Sdr) -> SdrSquare:
    return SdrSquare(s, s, identity(s.source.module), identity(s.target.module))


def compose_squares_h(first: SdrSquare, second: SdrSquare) -> SdrSquare:
    """Paste ``first`` then ``second`` along the shared SDR."""
    if first.bottom != second.top:
        raise ComplexMismatch("squares do not share an SDR")
    return validate_square(first.top, second.bottom, second.u @ first.u, second.v @ first.v)


def compose_squares_v(upper: SdrSquare, lower: SdrSquare) -> SdrSquare:
    """Stack squares: SDRs compose, the middle maps must agree."""
    if upper.v != lower.u:
        raise ComplexMismatch("middle horizontal maps differ")
    return validate_square(
        compose_sdr(upper.top, lower.top),
        compose_sdr(upper.bottom, lower.bottom),
        upper.u,
        lower.v,
    )


# -- pushing along a perturbation of the target ------------------------


def push_along(s: Sdr, delta_prime: Perturbation) -> tuple:
    """Perturb the source by ``g delta' f``; the same (f, g, h) is then an SDR
    ``A_delta -> B_delta'``. Returns ``(sdr, perturbation of the source)``."""
    if delta_prime.complex != s.target:
        raise ComplexMismatch("perturbation does not live on the SDR target")
    dp = delta_prime.delta
    delta = s.g @ dp @ s.f
    p = check_maurer_cartan(delta, s.source)
    if dp @ s.f != s.f @ delta:
        raise CompatibilityViolation("δ' f ≠ f δ")
    if delta @ s.g != s.g @ dp:
        raise CompatibilityViolation("δ g ≠ g δ'")
    if delta @ s.h != -(s.h @ delta):
        raise CompatibilityViolation("δ h ≠ -h δ")
    pushed = validate_sdr(perturb_complex(p), perturb_complex(delta_prime), s.f, s.g, s.h)
    return pushed, p
