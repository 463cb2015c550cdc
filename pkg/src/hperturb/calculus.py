"""Non-dg-isomorphisms, logarithmic derivatives, conjugation and transfer of diagrams.

Only degree-0 isomorphisms occur, so the Koszul signs in the general
formulas all collapse to +1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complex import ChainComplex, check_maurer_cartan, hom_differential
from .errors import CommutatorObstruction, MaurerCartanViolation, ModuleMismatch, NotInvertible
from .graded import GradedMap, identity, sign
from .nilpotent import neumann_inverse


@dataclass(frozen=True, eq=False)
class NonDgIso:
    """A degree-0 graded isomorphism stored together with its inverse."""

    alpha: GradedMap
    alpha_inv: GradedMap

    def __post_init__(self):
        a, b = self.alpha, self.alpha_inv
        if a.degree != 0 or b.degree != 0:
            raise NotInvertible("only degree-0 isomorphisms are supported")
        if a.source != b.target or a.target != b.source:
            raise ModuleMismatch("inverse does not run backwards")
        if a @ b != identity(a.target) or b @ a != identity(a.source):
            raise NotInvertible("alpha_inv is not inverse to alpha")

    def __eq__(self, other):
        if not isinstance(other, NonDgIso):
            return NotImplemented
        return self.alpha == other.alpha and self.alpha_inv == other.alpha_inv

    __hash__ = None

    @property
    def source(self):
        return self.alpha.source

    @property
    def target(self):
        return self.alpha.target

    def inverse(self) -> "NonDgIso":
        return NonDgIso(self.alpha_inv, self.alpha)

    def then(self, other: "NonDgIso") -> "NonDgIso":
        """``other`` after ``self``."""
        return NonDgIso(other.alpha @ self.alpha, self.alpha_inv @ other.alpha_inv)

    @classmethod
    def identity(cls, module) -> "NonDgIso":
        one = identity(module)
        return cls(one, one)

    @classmethod
    def unipotent(cls, nilpotent: GradedMap) -> "NonDgIso":
        """``1 + nilpotent`` with inverse from the Neumann series."""
        inv, _ = neumann_inverse(nilpotent)
        return cls(identity(nilpotent.source) + nilpotent, inv)


def _check(a: NonDgIso, A: ChainComplex, A2: ChainComplex):
    if a.source != A.module or a.target != A2.module:
        raise ModuleMismatch("isomorphism does not run between the given complexes")


def left_log_derivative(a: NonDgIso, A: ChainComplex, A2: ChainComplex) -> GradedMap:
    """``alpha^{-1} D alpha``, an endomap of ``A``; it always solves Maurer-Cartan."""
    _check(a, A, A2)
    result = a.alpha_inv @ hom_differential(a.alpha, A, A2)
    check_maurer_cartan(result, A)
    return result


def right_log_derivative(a: NonDgIso, A: ChainComplex, A2: ChainComplex) -> GradedMap:
    """``D alpha alpha^{-1}``, an endomap of ``A2`` with ``D(D_r) = D_r**2``."""
    _check(a, A, A2)
    result = hom_differential(a.alpha, A, A2) @ a.alpha_inv
    if hom_differential(result, A2, A2) != result @ result:
        raise MaurerCartanViolation("right logarithmic derivative fails D(x) = x²")
    return result


def conjugate(a: NonDgIso, f: GradedMap) -> GradedMap:
    """``alpha f alpha^{-1}``."""
    return a.alpha @ f @ a.alpha_inv


def twisted_bracket(left: GradedMap, x: GradedMap, right: GradedMap) -> GradedMap:
    """Graded commutator of ``x`` with a family of endomaps: ``left x - (-1)^{|left||x|} x right``."""
    return left @ x - sign(left.degree * x.degree) * (x @ right)


def transfer_functor(generators, objects):
    """Conjugate a diagram of generators along per-object non-dg-isomorphisms.

    ``generators`` maps a name to ``(source object, target object, map)`` and
    ``objects`` maps an object name to ``(alpha, F-complex, G-complex)``. The
    conjugated diagram is a dg-diagram exactly when every left logarithmic
    derivative commutes with the generators; otherwise ``CommutatorObstruction``
    names the first generator for which it does not.
    """
    log = {
        name: left_log_derivative(alpha, fa, ga) for name, (alpha, fa, ga) in objects.items()
    }
    out = {}
    for name, (src, tgt, x) in generators.items():
        obstruction = twisted_bracket(log[tgt], x, log[src])
        if not obstruction.is_zero():
            k = next(iter(obstruction.blocks))
            raise CommutatorObstruction(
                f"[D_ℓα, {name}] is nonzero in degree {k}",
                generator=name,
                degree=k,
                block=obstruction.blocks[k],
            )
        out[name] = objects[tgt][0].alpha @ x @ objects[src][0].alpha_inv
    return out
