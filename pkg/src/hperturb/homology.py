"""Homology via Smith normal form, mapping cones and equivalence checks."""

from __future__ import annotations

from dataclasses import dataclass

from . import matrix as mx
from .complex import ChainComplex, hom_differential
from .errors import EquivalenceViolation, ModuleMismatch
from .graded import GradedMap, GradedModule, block_map
from .ring import ZZ


def smith_normal_form(M, cols=None):
    """Return ``(U, S, V)`` with ``S = U M V`` diagonal, U and V unimodular and
    each diagonal entry dividing the next. ``cols`` is needed for 0-row input."""
    m, n = mx.shape(M, cols)
    A = [list(row) for row in M]
    U = [list(row) for row in mx.identity(m)]
    V = [list(row) for row in mx.identity(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            rest += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                _, i, j = min(rest)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    U, S, V = tuple(map(tuple, U)), tuple(map(tuple, A)), tuple(map(tuple, V))
    _self_check(M, U, S, V)
    return U, S, V


def _self_check(M, U, S, V):
    """Re-multiply and test unimodularity; runs on every decomposition."""
    if M and mx.matmul(mx.matmul(U, M, ZZ), V, ZZ) != S:
        raise AssertionError("Smith normal form: U M V != S")
    if abs(mx.determinant(U)) != 1 or abs(mx.determinant(V)) != 1:
        raise AssertionError("Smith normal form: transform is not unimodular")


def invariant_factors(M, cols=None):
    _, S, _ = smith_normal_form(M, cols)
    return tuple(S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i])


@dataclass(frozen=True)
class HomologyResult:
    """Per-degree Betti numbers and torsion coefficients (invariant factors > 1)."""

    groups: dict

    def nontrivial(self) -> dict:
        return {k: v for k, v in self.groups.items() if v[0] or v[1]}

    def is_acyclic(self) -> bool:
        return not self.nontrivial()

    def __eq__(self, other):
        if not isinstance(other, HomologyResult):
            return NotImplemented
        return self.nontrivial() == other.nontrivial()

    def betti(self, k):
        return self.groups.get(k, (0, ()))[0]

    def torsion(self, k):
        return self.groups.get(k, (0, ()))[1]

    def to_json(self) -> dict:
        return {
            str(k): {"betti": b, "torsion": list(t)} for k, (b, t) in sorted(self.groups.items())
        }


def homology(A: ChainComplex) -> HomologyResult:
    """``H_k = ker d_k / im d_{k+1}``; torsion only over Z."""
    ring = A.ring
    module = A.module
    ranks, factors = {}, {}
    for k in module.degrees:
        block = A.d.block(k)
        if ring.is_field:
            ranks[k] = mx.rank(block, ring, module.rank(k))
            factors[k] = ()
        else:
            facs = invariant_factors(block, module.rank(k))
            ranks[k] = len(facs)
            factors[k] = facs
    groups = {}
    for k in module.degrees:
        betti = module.rank(k) - ranks[k] - ranks.get(k + 1, 0)
        torsion = tuple(t for t in factors.get(k + 1, ()) if t > 1)
        groups[k] = (betti, torsion)
    return HomologyResult(groups)


def shift(module: GradedModule, n: int = 1) -> GradedModule:
    labels = None
    if module.labels is not None:
        labels = {k + n: tuple(f"s{x}" for x in names) for k, names in module.labels.items()}
    return GradedModule(module.ring, {k + n: r for k, r in module.ranks.items()}, labels)


def mapping_cone(f: GradedMap, A: ChainComplex, B: ChainComplex) -> ChainComplex:
    """Cone of a chain map: ``A[1] (+) B`` with ``d(a, b) = (-d a, f a + d b)``."""
    if f.source != A.module or f.target != B.module or f.degree != 0:
        raise ModuleMismatch("map does not run between the given complexes")
    if not hom_differential(f, A, B).is_zero():
        raise EquivalenceViolation("cone of a non-chain map")
    sa = shift(A.module)
    minus_d = GradedMap(sa, sa, -1, {k + 1: m for k, m in A.d.blocks.items()})
    f_shift = GradedMap(sa, B.module, -1, {k + 1: m for k, m in f.blocks.items()})
    d = block_map([sa, B.module], [sa, B.module], -1, {(0, 0): -minus_d, (1, 0): f_shift, (1, 1): B.d})
    return ChainComplex(d.source, d)


def verify_equivalence(p) -> dict:
    """Homology of both ends of a perturbed SDR agrees and ``f^`` has acyclic cone."""
    s = p.result
    left, right = homology(s.source), homology(s.target)
    if left != right:
        raise EquivalenceViolation(f"homology differs: {left.to_json()} vs {right.to_json()}")
    cone = homology(mapping_cone(s.f, s.source, s.target))
    if not cone.is_acyclic():
        raise EquivalenceViolation(f"mapping cone of f^ is not acyclic: {cone.to_json()}")
    return {"theorem": "homology", "homology": left.to_json()}
