"""Nilpotency certificates and finite Neumann series."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import matrix as mx
from .errors import ModuleMismatch, NotNilpotent
from .graded import GradedMap, identity


@dataclass(frozen=True)
class NilpotencyCertificate:
    """``operator**index[k]`` vanishes in degree ``k`` and no smaller power does."""

    operator: GradedMap
    index: Mapping[int, int]

    def verify(self) -> bool:
        ring = self.operator.ring
        for k, n in self.index.items():
            m = self.operator.block(k)
            power = mx.identity(len(m))
            for step in range(1, n + 1):
                power = mx.matmul(m, power, ring)
                if mx.is_zero(power) != (step == n):
                    return False
        return True


def nilpotency_index(x: GradedMap) -> NilpotencyCertificate:
    """Blockwise nilpotency index of a degree-0 endomap, or ``NotNilpotent``."""
    if x.degree != 0 or not x.is_endo():
        raise ModuleMismatch("nilpotency needs a degree-0 endomorphism")
    index = {}
    for k, r in x.source.ranks.items():
        m = x.block(k)
        power = m
        n = 1
        while not mx.is_zero(power):
            if n > r:
                raise NotNilpotent(k)
            power = mx.matmul(m, power, x.ring)
            n += 1
        index[k] = n
    return NilpotencyCertificate(x, index)


def neumann_inverse(x: GradedMap):
    """Inverse of ``1 + x`` as the finite sum of ``(-x)**k``, with its certificate."""
    cert = nilpotency_index(x)
    ring = x.ring
    blocks = {}
    for k, n in cert.index.items():
        m = x.block(k)
        size = len(m)
        term = mx.identity(size)
        total = term
        neg = mx.scale(-1, m, ring)
        for _ in range(n - 1):
            term = mx.matmul(neg, term, ring)
            total = mx.add(total, term, ring)
        blocks[k] = total
    inverse = GradedMap(x.source, x.source, 0, blocks)
    one = identity(x.source)
    if (one + x) @ inverse != one or inverse @ (one + x) != one:
        raise AssertionError("Neumann series failed to invert 1 + x")
    return inverse, cert
