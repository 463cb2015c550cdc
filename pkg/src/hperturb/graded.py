"""Graded modules, degree-homogeneous maps and the Koszul-signed tensor product.

A graded map of degree ``n`` stores, for each source degree ``k``, a matrix
whose rows index the target basis in degree ``k + n`` and whose columns index
the source basis in degree ``k``. Absent blocks are zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import matrix as mx
from .errors import ModuleMismatch, RingMismatch
from .ring import Ring


def sign(n: int) -> int:
    """(-1)**n for any integer n."""
    return -1 if n & 1 else 1


@dataclass(frozen=True, eq=False)
class GradedModule:
    """Finitely generated free graded module, bounded in degree."""

    ring: Ring
    ranks: Mapping[int, int]
    labels: Mapping[int, tuple] | None = field(default=None)

    def __post_init__(self):
        ranks = {}
        for k, r in sorted(self.ranks.items()):
            if r < 0:
                raise ValueError(f"negative rank in degree {k}")
            if r:
                ranks[int(k)] = int(r)
        object.__setattr__(self, "ranks", ranks)
        if self.labels is not None:
            labels = {}
            for k in ranks:
                names = tuple(self.labels.get(k, ()))
                if len(names) != ranks[k]:
                    raise ValueError(f"degree {k}: {len(names)} labels for rank {ranks[k]}")
                labels[k] = names
            extra = [k for k, names in self.labels.items() if names and k not in ranks]
            if extra:
                raise ValueError(f"labels given for empty degrees {extra}")
            object.__setattr__(self, "labels", labels)

    def __eq__(self, other):
        if not isinstance(other, GradedModule):
            return NotImplemented
        return self.ring == other.ring and self.ranks == other.ranks

    def __hash__(self):
        return hash((self.ring, tuple(self.ranks.items())))

    def __repr__(self):
        return f"GradedModule({self.ring}, {self.ranks})"

    def rank(self, k: int) -> int:
        return self.ranks.get(k, 0)

    @property
    def degrees(self):
        return list(self.ranks)

    @property
    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def bounds(self):
        """(lowest, highest) nonzero degree, or None for the zero module."""
        if not self.ranks:
            return None
        return min(self.ranks), max(self.ranks)

    def label(self, k: int, i: int) -> str:
        if self.labels is not None:
            return self.labels[k][i]
        return f"e{k}_{i}"

    def locate(self, name: str):
        """Degree and index of the basis element called ``name``."""
        for k, r in self.ranks.items():
            for i in range(r):
                if self.label(k, i) == name:
                    return k, i
        raise KeyError(name)

    def with_labels(self, labels):
        return GradedModule(self.ring, self.ranks, labels)


def point(ring: Ring, name: str = "x") -> GradedModule:
    """Rank one, concentrated in degree zero."""
    return GradedModule(ring, {0: 1}, {0: (name,)})


@dataclass(frozen=True, eq=False)
class GradedMap:
    source: GradedModule
    target: GradedModule
    degree: int
    blocks: Mapping[int, tuple] = field(default_factory=dict)

    def __post_init__(self):
        if self.source.ring != self.target.ring:
            raise RingMismatch(f"{self.source.ring} vs {self.target.ring}")
        ring = self.source.ring
        blocks = {}
        for k in sorted(self.blocks):
            rows, cols = self.target.rank(k + self.degree), self.source.rank(k)
            m = self.blocks[k]
            if len(m) != rows or any(len(row) != cols for row in m):
                got = (len(m), len(m[0]) if m else 0)
                raise ValueError(
                    f"block {k} has shape {got}, expected {(rows, cols)}"
                )
            if rows and cols:
                m = mx.normalize(m, ring)
                if not mx.is_zero(m):
                    blocks[int(k)] = m
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def _trusted(cls, source, target, degree, blocks):
        """Skip shape checks and entry coercion for blocks built by exact ops."""
        self = object.__new__(cls)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(
            self, "blocks", {k: m for k, m in sorted(blocks.items()) if m and m[0] and not mx.is_zero(m)}
        )
        return self

    @property
    def ring(self) -> Ring:
        return self.source.ring

    def block(self, k: int):
        m = self.blocks.get(k)
        if m is None:
            return mx.zeros(self.target.rank(k + self.degree), self.source.rank(k))
        return m

    def is_zero(self) -> bool:
        return not self.blocks

    def is_endo(self) -> bool:
        return self.source == self.target

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.degree == other.degree
            and self.blocks == other.blocks
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"GradedMap(degree={self.degree}, {self.source.ranks} -> "
            f"{self.target.ranks}, blocks={self.blocks})"
        )

    def _check_parallel(self, other):
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise ModuleMismatch("maps are not parallel")

    def __add__(self, other):
        self._check_parallel(other)
        blocks = dict(self.blocks)
        for k, m in other.blocks.items():
            blocks[k] = mx.add(blocks[k], m, self.ring) if k in blocks else m
        return GradedMap._trusted(self.source, self.target, self.degree, blocks)

    def __neg__(self):
        return (-1) * self

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        c = self.ring(c)
        return GradedMap._trusted(
            self.source,
            self.target,
            self.degree,
            {k: mx.scale(c, m, self.ring) for k, m in self.blocks.items()},
        )

    def __matmul__(self, other):
        return compose(self, other)

    def __pow__(self, n: int):
        if not self.is_endo() or self.degree != 0:
            raise ModuleMismatch("powers need a degree-0 endomorphism")
        result = identity(self.source)
        for _ in range(n):
            result = self @ result
        return result

    def apply(self, k: int, vector):
        """Image of a coordinate vector living in source degree ``k``."""
        m = self.block(k)
        return tuple(self.ring(sum(x * y for x, y in zip(row, vector))) for row in m)

    @classmethod
    def from_images(cls, source, target, degree, images):
        """Build from ``{source label: {target label: coefficient}}``.

        Basis elements not mentioned go to zero.
        """
        blocks = {
            k: [[0] * source.rank(k) for _ in range(target.rank(k + degree))]
            for k in source.degrees
        }
        for name, image in images.items():
            k, j = source.locate(name)
            for tname, coeff in image.items():
                tk, i = target.locate(tname)
                if tk != k + degree:
                    raise ValueError(f"{name} -> {tname} does not have degree {degree}")
                blocks[k][i][j] += coeff
        return cls(source, target, degree, {k: tuple(map(tuple, m)) for k, m in blocks.items()})


def zero(source: GradedModule, target: GradedModule, degree: int = 0) -> GradedMap:
    return GradedMap(source, target, degree, {})


def identity(module: GradedModule) -> GradedMap:
    return GradedMap(module, module, 0, {k: mx.identity(r) for k, r in module.ranks.items()})


def compose(g: GradedMap, f: GradedMap) -> GradedMap:
    """``g`` after ``f``; degrees add."""
    if f.target != g.source:
        if f.ring != g.ring:
            raise RingMismatch(f"{f.ring} vs {g.ring}")
        raise ModuleMismatch(f"cannot compose: {f.target!r} is not {g.source!r}")
    blocks = {}
    for k, m in f.blocks.items():
        other = g.blocks.get(k + f.degree)
        if other is not None:
            blocks[k] = mx.matmul(other, m, f.ring)
    return GradedMap._trusted(f.source, g.target, f.degree + g.degree, blocks)


def bracket(f: GradedMap, g: GradedMap) -> GradedMap:
    """Graded commutator ``f g - (-1)^{|f||g|} g f`` of two endomaps."""
    if not (f.is_endo() and g.is_endo() and f.source == g.source):
        raise ModuleMismatch("bracket needs endomaps of one module")
    return f @ g - sign(f.degree * g.degree) * (g @ f)


def tensor_offsets(A: GradedModule, B: GradedModule, n: int):
    """Summands ``A_k (x) B_{n-k}`` of degree ``n`` with their basis offsets."""
    out, offset = [], 0
    for k in A.degrees:
        rb = B.rank(n - k)
        if rb:
            out.append((k, n - k, offset))
            offset += A.rank(k) * rb
    return out


def tensor_module(A: GradedModule, B: GradedModule) -> GradedModule:
    """Basis in degree n ordered by (k, index in A_k, index in B_{n-k})."""
    if A.ring != B.ring:
        raise RingMismatch(f"{A.ring} vs {B.ring}")
    ranks, labels = {}, {}
    for ka in A.degrees:
        for kb in B.degrees:
            ranks[ka + kb] = ranks.get(ka + kb, 0) + A.rank(ka) * B.rank(kb)
    with_labels = A.labels is not None or B.labels is not None
    for n in ranks:
        names = []
        for k, l, _ in tensor_offsets(A, B, n):
            names.extend(
                f"{A.label(k, i)}⊗{B.label(l, j)}"
                for i in range(A.rank(k))
                for j in range(B.rank(l))
            )
        labels[n] = tuple(names)
    return GradedModule(A.ring, ranks, labels if with_labels else None)


def tensor_map(f: GradedMap, g: GradedMap) -> GradedMap:
    """``(f (x) g)(x (x) y) = (-1)^{|g||x|} f x (x) g y``."""
    if f.ring != g.ring:
        raise RingMismatch(f"{f.ring} vs {g.ring}")
    ring = f.ring
    source = tensor_module(f.source, g.source)
    target = tensor_module(f.target, g.target)
    degree = f.degree + g.degree
    blocks = {}
    for n, rows_total in ((n, target.rank(n + degree)) for n in source.degrees):
        if not rows_total:
            continue
        tgt_offsets = {(k, l): off for k, l, off in tensor_offsets(f.target, g.target, n + degree)}
        block = [[0] * source.rank(n) for _ in range(rows_total)]
        touched = False
        for k, l, off in tensor_offsets(f.source, g.source, n):
            toff = tgt_offsets.get((k + f.degree, l + g.degree))
            if toff is None:
                continue
            fm, gm = f.blocks.get(k), g.blocks.get(l)
            if fm is None or gm is None:
                continue
            s = sign(g.degree * k)
            piece = mx.kron(fm, gm, ring)
            for i, row in enumerate(piece):
                target_row = block[toff + i]
                for j, x in enumerate(row):
                    if x:
                        target_row[off + j] += s * x
            touched = True
        if touched:
            blocks[n] = tuple(map(tuple, block))
    return GradedMap(source, target, degree, blocks)


def direct_sum(*modules: GradedModule) -> GradedModule:
    """Direct sum; in each degree the summands' bases are concatenated in order."""
    ring = modules[0].ring
    if any(m.ring != ring for m in modules):
        raise RingMismatch("direct sum over different rings")
    ranks = {}
    for m in modules:
        for k, r in m.ranks.items():
            ranks[k] = ranks.get(k, 0) + r
    if all(m.labels is not None for m in modules):
        labels = {k: sum((m.labels.get(k, ()) for m in modules), ()) for k in ranks}
    else:
        labels = None
    return GradedModule(ring, ranks, labels)


def block_map(sources, targets, degree, parts) -> GradedMap:
    """Assemble a map between direct sums from ``{(i, j): map summand j -> summand i}``."""
    source, target = direct_sum(*sources), direct_sum(*targets)
    blocks = {}
    for k in source.degrees:
        rows = target.rank(k + degree)
        if not rows:
            continue
        block = [[0] * source.rank(k) for _ in range(rows)]
        for (i, j), part in parts.items():
            if part.source != sources[j] or part.target != targets[i] or part.degree != degree:
                raise ModuleMismatch(f"summand map ({i}, {j}) does not fit")
            m = part.blocks.get(k)
            if m is None:
                continue
            roff = sum(t.rank(k + degree) for t in targets[:i])
            coff = sum(s.rank(k) for s in sources[:j])
            for a, row in enumerate(m):
                for b, x in enumerate(row):
                    block[roff + a][coff + b] += x
        blocks[k] = tuple(map(tuple, block))
    return GradedMap(source, target, degree, blocks)
