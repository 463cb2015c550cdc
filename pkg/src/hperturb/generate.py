"""Deterministic random instances: complexes, SDRs, stacks and perturbations.

Everything is first built in canonical coordinates, where a complex is a sum
of one-cell pieces ``z`` and two-cell pieces ``x -> m y``. Each piece carries a
filtration level preserved by ``d``, ``f``, ``g`` and ``h``. A random
unimodular basis change then moves the data to actual coordinates; the
:class:`Frame` remembers it so that filtration-lowering maps, and hence
admissible perturbations, can still be produced afterwards.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .calculus import NonDgIso
from .complex import ChainComplex, Perturbation, check_maurer_cartan
from .errors import NotNilpotent, Violation
from .graded import GradedMap, GradedModule, block_map, identity
from .nilpotent import nilpotency_index
from .ring import Ring
from .sdr import Sdr, validate_sdr

RESAMPLE_CAP = 64
MAX_LEVEL = 3


class ResampleCapExceeded(Violation):
    pass


@dataclass(frozen=True, eq=False)
class Frame:
    """Basis change from canonical coordinates plus per-basis filtration levels."""

    iso: NonDgIso
    levels: dict

    @property
    def module(self) -> GradedModule:
        return self.iso.target


@dataclass(frozen=True, eq=False)
class FramedComplex:
    complex: ChainComplex
    frame: Frame


@dataclass(frozen=True, eq=False)
class FramedSdr:
    sdr: Sdr
    source_frame: Frame
    target_frame: Frame


def _matrix_map(module, degree, fill):
    """Degree-``degree`` endomap with entry (i, j) of block k given by ``fill(k, i, j)``."""
    blocks = {}
    for k, r in module.ranks.items():
        rows = module.rank(k + degree)
        if rows:
            blocks[k] = tuple(tuple(fill(k, i, j) for j in range(r)) for i in range(rows))
    return GradedMap(module, module, degree, blocks)


def _small(rng: random.Random, density: float, spread: int = 2) -> int:
    if rng.random() >= density:
        return 0
    return rng.choice([x for x in range(-spread, spread + 1) if x])


def random_unimodular(rng: random.Random, module: GradedModule, density: float = 0.5) -> NonDgIso:
    """Product of a unit lower and a unit upper triangular map, inverted exactly."""
    lower = _matrix_map(module, 0, lambda k, i, j: _small(rng, density) if i > j else 0)
    upper = _matrix_map(module, 0, lambda k, i, j: _small(rng, density) if i < j else 0)
    return NonDgIso.unipotent(lower).then(NonDgIso.unipotent(upper))


def _canonical_pieces(rng, ring, budget, degrees, torsion):
    """Pieces as (kind, degree, level, multiplier); total rank <= budget."""
    pieces, used = [], 0
    while used < budget:
        room = budget - used
        if room >= 2 and rng.random() < 0.6:
            m = rng.choice([1, 1, 2, 3]) if torsion else 1
            pieces.append(("pair", rng.choice(degrees), rng.randrange(MAX_LEVEL), m))
            used += 2
        else:
            pieces.append(("free", rng.choice(degrees), rng.randrange(MAX_LEVEL), 0))
            used += 1
        if rng.random() < 0.15:
            break
    return pieces


def _assemble(ring, pieces, prefix):
    """Canonical complex from pieces; returns (complex, levels, per-piece basis slots)."""
    ranks, labels, levels, slots = {}, {}, {}, []

    def add(k, level):
        i = ranks.get(k, 0)
        ranks[k] = i + 1
        labels.setdefault(k, []).append(f"{prefix}{k}_{i}")
        levels.setdefault(k, []).append(level)
        return (k, i)

    for kind, k, level, m in pieces:
        if kind == "pair":
            slots.append((add(k + 1, level), add(k, level), m))
        else:
            slots.append((add(k, level), None, 0))
    module = GradedModule(ring, ranks, {k: tuple(v) for k, v in labels.items()})
    blocks = {k: [[0] * r for _ in range(module.rank(k - 1))] for k, r in module.ranks.items()}
    for top, bottom, m in slots:
        if bottom is not None:
            blocks[top[0]][bottom[1]][top[1]] = m
    d = GradedMap(module, module, -1, {k: tuple(map(tuple, b)) for k, b in blocks.items()})
    return ChainComplex(module, d), {k: tuple(v) for k, v in levels.items()}, slots


def _transport(phi: NonDgIso, x: GradedMap, psi: NonDgIso | None = None) -> GradedMap:
    """``phi x psi^-1`` (``psi`` defaults to ``phi``)."""
    psi = phi if psi is None else psi
    return phi.alpha @ x @ psi.alpha_inv


def _degree_range(rng):
    lo = rng.choice([-1, 0, 0, 0, 1])
    return list(range(lo, lo + rng.choice([2, 3, 3, 4])))


def random_complex(
    rng: random.Random, ring: Ring, max_rank: int, torsion: bool = True
) -> FramedComplex:
    budget = rng.randint(1, max(1, max_rank))
    pieces = _canonical_pieces(rng, ring, budget, _degree_range(rng), torsion)
    canon, levels, _ = _assemble(ring, pieces, "c")
    phi = random_unimodular(rng, canon.module)
    complex_ = ChainComplex(canon.module, _transport(phi, canon.d))
    return FramedComplex(complex_, Frame(phi, levels))


def random_sdr(
    rng: random.Random,
    ring: Ring,
    max_rank: int,
    target: FramedComplex | None = None,
    torsion: bool = False,
) -> FramedSdr:
    """SDR onto ``target`` (random if omitted) from the target plus contractible pairs."""
    if target is None:
        target = random_complex(rng, ring, max(1, max_rank // 2), torsion=torsion)
    B, frame_b = target.complex, target.frame
    room = max_rank - B.module.total_rank
    degrees = sorted(set(B.module.degrees) | set(_degree_range(rng)))
    pairs = []
    for _ in range(max(0, room) // 2):
        if rng.random() < 0.8:
            pairs.append(("pair", rng.choice(degrees), rng.randrange(MAX_LEVEL), 1))
    contractible, piece_levels, slots = _assemble(ring, pairs, "p")

    b_canon = ChainComplex(B.module, frame_b.iso.alpha_inv @ B.d @ frame_b.iso.alpha)
    bm, pm = b_canon.module, contractible.module
    # canonical A = B (+) P, labelled afresh
    incl = block_map([bm], [bm, pm], 0, {(0, 0): identity(bm)})
    proj = block_map([bm, pm], [bm], 0, {(0, 0): identity(bm)})
    d_canon = block_map([bm, pm], [bm, pm], -1, {(0, 0): b_canon.d, (1, 1): contractible.d})
    h_pieces = GradedMap.from_images(
        pm, pm, 1,
        {pm.label(*bottom): {pm.label(*top): 1} for top, bottom, _ in slots},
    )
    h_canon = block_map([bm, pm], [bm, pm], 1, {(1, 1): h_pieces})
    module = d_canon.source
    labels = {k: tuple(f"a{k}_{i}" for i in range(r)) for k, r in module.ranks.items()}
    module = module.with_labels(labels)

    def relabel(m, source_is_a, target_is_a):
        return GradedMap(
            module if source_is_a else m.source,
            module if target_is_a else m.target,
            m.degree,
            m.blocks,
        )

    d_canon = relabel(d_canon, True, True)
    h_canon = relabel(h_canon, True, True)
    g_canon = relabel(incl, False, True)
    f_canon = relabel(proj, True, False)
    levels = {
        k: frame_b.levels.get(k, ()) + tuple(piece_levels.get(k, ()))
        for k in module.ranks
    }
    phi = random_unimodular(rng, module)
    A = ChainComplex(module, _transport(phi, d_canon))
    f = frame_b.iso.alpha @ f_canon @ phi.alpha_inv
    g = phi.alpha @ g_canon @ frame_b.iso.alpha_inv
    h = _transport(phi, h_canon)
    sdr = validate_sdr(A, B, f, g, h)
    return FramedSdr(sdr, Frame(phi, levels), frame_b)


def random_stack(
    rng: random.Random, ring: Ring, max_rank: int, stages: int = 2, torsion: bool = False
) -> list:
    """``stages`` composable framed SDRs, listed from the top (largest) down."""
    sizes = sorted(rng.randint(1, max(1, max_rank)) for _ in range(stages + 1))
    current = random_complex(rng, ring, sizes[0], torsion=torsion)
    out = []
    for size in sizes[1:]:
        step = random_sdr(rng, ring, size, target=current)
        out.append(step)
        current = FramedComplex(step.sdr.source, step.source_frame)
    return out[::-1]


def lowering_map(rng: random.Random, frame: Frame, density: float = 0.6) -> GradedMap:
    """Degree-0 map strictly lowering the filtration (hence nilpotent)."""
    levels = frame.levels
    canon = _matrix_map(
        frame.module, 0,
        lambda k, i, j: _small(rng, density) if levels[k][i] < levels[k][j] else 0,
    )
    return _transport(frame.iso, canon)


def _triangular_map(rng, module, density):
    return _matrix_map(module, 0, lambda k, i, j: _small(rng, density) if i < j else 0)


def delta_from(psi: NonDgIso, A: ChainComplex) -> GradedMap:
    """``psi^-1 d psi - d``, which solves Maurer-Cartan automatically."""
    return psi.alpha_inv @ A.d @ psi.alpha - A.d


def _admissible(delta: GradedMap, homotopies) -> bool:
    try:
        for h in homotopies:
            nilpotency_index(delta @ h)
    except NotNilpotent:
        return False
    return True


def random_perturbation(
    rng: random.Random,
    A: ChainComplex,
    frame: Frame | None = None,
    homotopies=(),
    density: float = 0.4,
) -> Perturbation:
    """Random ``delta = psi^-1 d psi - d`` with ``delta h`` nilpotent for every given ``h``.

    Unrestricted unipotent ``psi`` are tried first; after ``RESAMPLE_CAP``
    rejections ``psi`` is shrunk to a filtration-lowering unipotent map, which
    is always admissible when the homotopies preserve the frame's filtration.
    """
    homotopies = list(homotopies)
    for _ in range(RESAMPLE_CAP):
        psi = NonDgIso.unipotent(_triangular_map(rng, A.module, density))
        delta = delta_from(psi, A)
        if _admissible(delta, homotopies):
            return check_maurer_cartan(delta, A)
    if frame is not None:
        for _ in range(RESAMPLE_CAP):
            psi = NonDgIso.unipotent(lowering_map(rng, frame, density))
            delta = delta_from(psi, A)
            if _admissible(delta, homotopies):
                return check_maurer_cartan(delta, A)
    raise ResampleCapExceeded("no admissible perturbation found")


def filtered_perturbation(rng: random.Random, A: ChainComplex, frame: Frame, density=0.6):
    """Perturbation from a filtration-lowering ``psi``; admissible for every
    homotopy preserving the filtration."""
    psi = NonDgIso.unipotent(lowering_map(rng, frame, density))
    return check_maurer_cartan(delta_from(psi, A), A)
