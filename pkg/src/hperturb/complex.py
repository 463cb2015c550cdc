"""Chain complexes, the Hom-complex differential and Maurer-Cartan perturbations."""

from __future__ import annotations

from dataclasses import dataclass

from . import matrix as mx
from .errors import (
    MaurerCartanViolation,
    ModuleMismatch,
    NotADifferential,
    UniversalPropertyViolation,
    WindowTooSmall,
)
from .graded import GradedMap, GradedModule, identity, sign, tensor_map, tensor_module


@dataclass(frozen=True, eq=False)
class ChainComplex:
    module: GradedModule
    d: GradedMap

    def __post_init__(self):
        d = self.d
        if d.degree != -1 or d.source != self.module or d.target != self.module:
            raise NotADifferential("differential must be a degree -1 endomap of the module")
        square = d @ d
        if not square.is_zero():
            k = next(iter(square.blocks))
            raise NotADifferential(f"d∘d is nonzero in degree {k}")

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return self.module == other.module and self.d == other.d

    __hash__ = None

    @property
    def ring(self):
        return self.module.ring

    def __repr__(self):
        return f"ChainComplex({self.module.ranks}, d={self.d.blocks})"


def zero_complex_on(module: GradedModule) -> ChainComplex:
    return ChainComplex(module, GradedMap(module, module, -1))


def tensor_complex(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    """``d = d (x) 1 + 1 (x) d`` on the tensor product."""
    d = tensor_map(A.d, identity(B.module)) + tensor_map(identity(A.module), B.d)
    return ChainComplex(tensor_module(A.module, B.module), d)


def hom_differential(f: GradedMap, src: ChainComplex, tgt: ChainComplex) -> GradedMap:
    """``D f = d f - (-1)^{|f|} f d``."""
    if f.source != src.module or f.target != tgt.module:
        raise ModuleMismatch("map does not run between the given complexes")
    return tgt.d @ f - sign(f.degree) * (f @ src.d)


@dataclass(frozen=True, eq=False)
class Perturbation:
    """A degree -1 endomap ``delta`` with ``(d + delta)**2 = 0``."""

    complex: ChainComplex
    delta: GradedMap

    def __eq__(self, other):
        if not isinstance(other, Perturbation):
            return NotImplemented
        return self.complex == other.complex and self.delta == other.delta

    __hash__ = None


def check_maurer_cartan(delta: GradedMap, A: ChainComplex) -> Perturbation:
    if delta.degree != -1 or delta.source != A.module or delta.target != A.module:
        raise ModuleMismatch("a perturbation is a degree -1 endomap of the complex")
    defect = hom_differential(delta, A, A) + delta @ delta
    if not defect.is_zero():
        k = next(iter(defect.blocks))
        raise MaurerCartanViolation(
            f"Dδ + δ² is nonzero in degree {k}", degree=k, block=defect.blocks[k]
        )
    return Perturbation(A, delta)


def zero_perturbation(A: ChainComplex) -> Perturbation:
    return Perturbation(A, GradedMap(A.module, A.module, -1))


def perturb_complex(p: Perturbation) -> ChainComplex:
    """The same module with differential ``d + delta``."""
    return ChainComplex(p.complex.module, p.complex.d + p.delta)


def relative_perturbation(p: Perturbation, epsilon: Perturbation) -> Perturbation:
    """``epsilon - delta`` as a perturbation of ``A_delta``."""
    if p.complex != epsilon.complex:
        raise ModuleMismatch("perturbations of different complexes")
    return check_maurer_cartan(epsilon.delta - p.delta, perturb_complex(p))


# -- Hom complexes --------------------------------------------------------


def hom_window(B: GradedModule, A: GradedModule):
    """Smallest degree range outside which every graded map B -> A vanishes."""
    bb, ba = B.bounds(), A.bounds()
    if bb is None or ba is None:
        return range(0)
    return range(ba[0] - bb[1], ba[1] - bb[0] + 1)


def hom_module(B: GradedModule, A: GradedModule, window=None) -> GradedModule:
    """Degree n: the entries of all blocks ``B_k -> A_{k+n}``, k ascending, row-major."""
    window = hom_window(B, A) if window is None else window
    ranks = {n: sum(B.rank(k) * A.rank(k + n) for k in B.degrees) for n in window}
    return GradedModule(B.ring, ranks)


def _hom_offsets(B: GradedModule, A: GradedModule, n: int):
    out, off = [], 0
    for k in B.degrees:
        size = B.rank(k) * A.rank(k + n)
        if size:
            out.append((k, off))
            off += size
    return out


def vectorize(f: GradedMap, hom: GradedModule):
    """Coordinates of ``f`` in the basis of the Hom module."""
    B, A, n = f.source, f.target, f.degree
    vec = [0] * hom.rank(n)
    for k, off in _hom_offsets(B, A, n):
        m = f.block(k)
        cols = B.rank(k)
        for i, row in enumerate(m):
            for j, x in enumerate(row):
                vec[off + i * cols + j] = x
    return tuple(vec)


def devectorize(vec, B: GradedModule, A: GradedModule, n: int) -> GradedMap:
    blocks = {}
    for k, off in _hom_offsets(B, A, n):
        rows, cols = A.rank(k + n), B.rank(k)
        blocks[k] = tuple(
            tuple(vec[off + i * cols + j] for j in range(cols)) for i in range(rows)
        )
    return GradedMap(B, A, n, blocks)


def _check_window(B, A, window):
    needed = hom_window(B, A)
    if window is None:
        return needed
    if len(needed) and (needed.start < window.start or needed.stop > window.stop):
        raise WindowTooSmall(
            f"window {window.start}..{window.stop - 1} misses degrees "
            f"{needed.start}..{needed.stop - 1}"
        )
    return window


def hom_complex(B: ChainComplex, A: ChainComplex, degree_window=None) -> ChainComplex:
    """Degree-n maps B -> A with differential D, built by evaluating D on basis maps."""
    window = _check_window(B.module, A.module, degree_window)
    hom = hom_module(B.module, A.module, window)
    blocks = {}
    for n in hom.degrees:
        if not hom.rank(n - 1):
            continue
        columns = []
        for j in range(hom.rank(n)):
            basis = [0] * hom.rank(n)
            basis[j] = 1
            f = devectorize(basis, B.module, A.module, n)
            columns.append(vectorize(hom_differential(f, B, A), hom))
        blocks[n] = mx.transpose(tuple(columns), hom.rank(n - 1))
    return ChainComplex(hom, GradedMap(hom, hom, -1, blocks))


def postcomposition(phi: GradedMap, B: GradedModule, hom_src: GradedModule, hom_tgt: GradedModule):
    """Matrix of ``f -> phi f`` on Hom(B, -), assembled from Kronecker blocks."""
    A, A2, p = phi.source, phi.target, phi.degree
    ring = phi.ring
    blocks = {}
    for n in hom_src.degrees:
        rows = hom_tgt.rank(n + p)
        if not rows:
            continue
        block = [[0] * hom_src.rank(n) for _ in range(rows)]
        tgt_off = dict(_hom_offsets(B, A2, n + p))
        for k, off in _hom_offsets(B, A, n):
            m = phi.blocks.get(k + n)
            if m is None or k not in tgt_off:
                continue
            # vec(M f) = (M kron I) vec(f) for row-major vec
            piece = mx.kron(m, mx.identity(B.rank(k)), ring)
            toff = tgt_off[k]
            for i, row in enumerate(piece):
                for j, x in enumerate(row):
                    block[toff + i][off + j] += x
        blocks[n] = tuple(map(tuple, block))
    return GradedMap(hom_src, hom_tgt, p, blocks)


def precomposition(phi: GradedMap, A: GradedModule, hom_src: GradedModule, hom_tgt: GradedModule):
    """Matrix of ``f -> (-1)^{|phi||f|} f phi`` on Hom(-, A)."""
    B, B2, p = phi.target, phi.source, phi.degree
    ring = phi.ring
    blocks = {}
    for n in hom_src.degrees:
        rows = hom_tgt.rank(n + p)
        if not rows:
            continue
        s = sign(p * n)
        block = [[0] * hom_src.rank(n) for _ in range(rows)]
        tgt_off = dict(_hom_offsets(B2, A, n + p))
        for k, off in _hom_offsets(B, A, n):
            # f: B_k -> A_{k+n}, phi: B2_{k-p} -> B_k
            m = phi.blocks.get(k - p)
            if m is None or (k - p) not in tgt_off:
                continue
            # vec(f M) = (I kron M^T) vec(f) for row-major vec
            piece = mx.kron(mx.identity(A.rank(k + n)), mx.transpose(m, B2.rank(k - p)), ring)
            toff = tgt_off[k - p]
            for i, row in enumerate(piece):
                for j, x in enumerate(row):
                    block[toff + i][off + j] += s * x
        blocks[n] = tuple(map(tuple, block))
    return GradedMap(hom_src, hom_tgt, p, blocks)


def _compare(lhs: ChainComplex, rhs_d: GradedMap, what: str):
    if lhs.module != rhs_d.source:
        raise UniversalPropertyViolation(f"{what}: Hom modules differ")
    for n in sorted(set(lhs.d.blocks) | set(rhs_d.blocks)):
        if lhs.d.block(n) != rhs_d.block(n):
            raise UniversalPropertyViolation(f"{what}: differentials differ in degree {n}", n)


def check_universal_property(B: ChainComplex, p: Perturbation) -> dict:
    """Compare Hom(B, A_delta) with Hom(B, A) perturbed by post-composition with delta,
    and dually Hom(A_delta, B) with Hom(A, B) perturbed by ``-delta^*``."""
    A, delta = p.complex, p.delta
    A_delta = perturb_complex(p)

    left = hom_complex(B, A_delta)
    base = hom_complex(B, A)
    post = postcomposition(delta, B.module, base.module, base.module)
    check_maurer_cartan(post, base)
    _compare(left, base.d + post, "Hom(B, A_δ)")

    left_dual = hom_complex(A_delta, B)
    base_dual = hom_complex(A, B)
    pre = precomposition(delta, B.module, base_dual.module, base_dual.module)
    check_maurer_cartan(-pre, base_dual)
    _compare(left_dual, base_dual.d - pre, "Hom(A_δ, B)")

    return {
        "theorem": "universal-property",
        "degrees": sorted(left.module.degrees),
        "dual_degrees": sorted(left_dual.module.degrees),
    }
