"""Randomized property suites behind ``hperturb check``.

Each suite pairs a deterministic instance builder with a verifier. Trial
``i`` of suite ``s`` under seed ``n`` draws from ``random.Random(f"{n}:{s}:{i}")``,
so any failing trial can be rebuilt and serialized on its own.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import formats
from . import matrix as mx
from .bpl import (
    check_iteration,
    check_tensor_functoriality,
    check_vertical_functoriality,
    lemma_invariants,
    perturb_sdr,
    perturb_sdr_dual_order,
    transfer_composites,
    tensor_perturbation,
)
from .calculus import NonDgIso, conjugate, left_log_derivative, right_log_derivative
from .complex import (
    ChainComplex,
    Perturbation,
    check_universal_property,
    hom_differential,
)
from .errors import NotNilpotent, Violation
from .generate import (
    FramedComplex,
    delta_from,
    filtered_perturbation,
    random_complex,
    random_perturbation,
    random_sdr,
    random_stack,
    random_unimodular,
)
from .graded import GradedMap, bracket, identity, sign, tensor_map
from .homology import smith_normal_form, verify_equivalence
from .nilpotent import nilpotency_index
from .ring import ZZ, Ring
from .sdr import compose_sdr, identity_sdr, push_along, revalidate, tensor_sdr


@dataclass
class CheckReport:
    theorem: str
    trials: int
    failures: int
    seed: int
    max_rank: int
    counterexample: dict | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "trials": self.trials,
            "failures": self.failures,
            "seed": self.seed,
            "max_rank": self.max_rank,
        }


def random_map(rng: random.Random, source, target, degree, density=0.5, spread=3) -> GradedMap:
    blocks = {}
    for k, r in source.ranks.items():
        rows = target.rank(k + degree)
        if rows:
            blocks[k] = tuple(
                tuple(rng.randint(-spread, spread) if rng.random() < density else 0 for _ in range(r))
                for _ in range(rows)
            )
    return GradedMap(source, target, degree, blocks)


def _admissible(delta: GradedMap, h: GradedMap) -> bool:
    try:
        nilpotency_index(delta @ h)
    except NotNilpotent:
        return False
    return True


NONZERO_TRIES = 8


def _prefer_nonzero(draw, tries=NONZERO_TRIES):
    """Redraw a few times to avoid vacuous zero perturbations."""
    p = draw()
    for _ in range(tries - 1):
        if not p.delta.is_zero():
            break
        p = draw()
    return p


def _perturbation(rng, A, frame, homotopies):
    return _prefer_nonzero(lambda: random_perturbation(rng, A, frame, homotopies))


def _filtered(rng, A, frame):
    return _prefer_nonzero(lambda: filtered_perturbation(rng, A, frame))


# -- identities ---------------------------------------------------------------


def build_identities(rng, ring, max_rank):
    framed = random_complex(rng, ring, max_rank)
    A = framed.complex
    M = A.module
    degs = [rng.randint(-2, 2) for _ in range(3)]
    f, g, x = (random_map(rng, M, M, n) for n in degs)
    delta = random_map(rng, M, M, rng.randint(-2, 2))
    other = random_unimodular(rng, M)
    A2 = ChainComplex(M, other.alpha @ A.d @ other.alpha_inv)
    alpha = random_unimodular(rng, M)
    return {"complex": A, "other": A2, "f": f, "g": g, "x": x, "delta": delta, "alpha": alpha}


def verify_identities(inst):
    A, A2, f, g, x, delta, a = (inst[k] for k in ("complex", "other", "f", "g", "x", "delta", "alpha"))

    def D(m, src=A, tgt=A):
        return hom_differential(m, src, tgt)

    def require(ok, name):
        if not ok:
            raise Violation(f"identity failed: {name}")

    require((f @ g) @ x == f @ (g @ x), "associativity")
    require(identity(A.module) @ f == f == f @ identity(A.module), "unit")
    require(bracket(f, g) == -sign(f.degree * g.degree) * bracket(g, f), "antisymmetry")
    require(
        bracket(delta, f @ g) == bracket(delta, f) @ g + sign(delta.degree * f.degree) * (f @ bracket(delta, g)),
        "graded Leibniz",
    )
    require(
        bracket(delta, bracket(f, g))
        == bracket(bracket(delta, f), g) + sign(delta.degree * f.degree) * bracket(f, bracket(delta, g)),
        "graded Jacobi",
    )
    require(D(D(f)).is_zero(), "D∘D = 0")
    require(D(f @ g) == D(f) @ g + sign(f.degree) * (f @ D(g)), "D(fg) rule")
    require(D(bracket(f, g)) == bracket(D(f), g) + sign(f.degree) * bracket(f, D(g)), "D[f,g] rule")
    require(D(f @ x) - sign(f.degree) * (f @ D(x)) == D(f) @ x, "D(f_*) = (Df)_*")
    require(
        D(x @ f) - D(x) @ f == sign(x.degree) * (x @ D(f)) and D(x @ f) - sign(x.degree) * (x @ D(f)) == D(x) @ f,
        "D(f^*) = (Df)^*",
    )
    Da = D(a.alpha, A, A2)
    Dinv = D(a.alpha_inv, A2, A)
    require(Dinv == -(a.alpha_inv @ Da @ a.alpha_inv), "D(α⁻¹) rule")
    left = left_log_derivative(a, A, A2)
    right = right_log_derivative(a, A, A2)
    require(D(left) == -(left @ left), "D(D_ℓα) = -(D_ℓα)²")
    require(D(right, A2, A2) == right @ right, "D(D_rα) = (D_rα)²")
    require(right == conjugate(a, left), "D_rα = c_α D_ℓα")
    cf = conjugate(a, f)
    require(D(cf, A2, A2) - conjugate(a, D(f)) == bracket(right, cf), "D_r(c_α) = [D_rα, -]")
    require(conjugate(a.inverse(), D(cf, A2, A2)) - D(f) == bracket(left, f), "D_ℓ(c_α) = [D_ℓα, -]")
    require(conjugate(a, f @ g) == conjugate(a, f) @ conjugate(a, g), "c_α multiplicative")
    require(
        tensor_map(f, g) @ tensor_map(x, f) == sign(g.degree * x.degree) * tensor_map(f @ x, g @ f),
        "tensor interchange",
    )


# -- SDR axioms ------------------------------------------------------------------


def build_sdr(rng, ring, max_rank):
    stack = random_stack(rng, ring, max_rank, stages=3)
    return {"stack": [s.sdr for s in stack]}


def verify_sdr(inst):
    a, b, c = inst["stack"]
    for s in (a, b, c):
        revalidate(s)
    left = compose_sdr(compose_sdr(a, b), c)
    right = compose_sdr(a, compose_sdr(b, c))
    if left != right:
        raise Violation("compose_sdr is not associative")
    if compose_sdr(identity_sdr(a.source), a) != a or compose_sdr(a, identity_sdr(a.target)) != a:
        raise Violation("identity SDRs are not units")


# -- perturbation lemma ----------------------------------------------------------


def build_bpl(rng, ring, max_rank):
    framed = random_sdr(rng, ring, max_rank)
    s = framed.sdr
    delta = _perturbation(rng, s.source, framed.source_frame, [s.h])
    target = FramedComplex(s.target, framed.target_frame)
    delta_prime = _filtered(rng, s.target, target.frame)
    return {"sdr": s, "delta": delta, "target_delta": delta_prime}


def verify_bpl(inst):
    s, delta = inst["sdr"], inst["delta"]
    out = perturb_sdr(s, delta)
    revalidate(out.result)
    if out.result.f @ delta.delta @ s.g != s.f @ delta.delta @ out.result.g:
        raise Violation("f^ δ g ≠ f δ g^")
    failed = [name for name, ok in lemma_invariants(s, delta).items() if not ok]
    if failed:
        raise Violation(f"lemma invariants failed: {failed}")
    verify_composites(inst)
    pushed, _ = push_along(s, inst["target_delta"])
    revalidate(pushed)


def verify_composites(inst):
    s, delta = inst["sdr"], inst["delta"]
    comps = transfer_composites(s, delta)
    for name in ("alpha beta^-1", "alpha-bar^-1 beta-bar", "four-fold"):
        if comps[name] != comps[f"{name} (formula)"]:
            raise Violation(f"composite identity failed: {name}")
    dual, dual_prime, _ = perturb_sdr_dual_order(s, delta)
    out = perturb_sdr(s, delta)
    if dual != out.result or dual_prime != out.delta_prime:
        raise Violation("dual-order run gives a different SDR")


def fourfold_is_identity(inst) -> bool:
    comps = transfer_composites(inst["sdr"], inst["delta"])
    return comps["four-fold"] == identity(inst["sdr"].source.module)


# -- universal property -----------------------------------------------------


def build_universal(rng, ring, max_rank):
    size = max(1, max_rank // 2)
    for _ in range(NONZERO_TRIES):
        A = random_complex(rng, ring, size).complex
        if not A.d.is_zero():
            break

    def draw():
        # admissibility plays no role here, so any unimodular psi will do
        return Perturbation(A, delta_from(random_unimodular(rng, A.module), A))

    delta = _prefer_nonzero(draw)
    B = random_complex(rng, ring, max(1, max_rank - A.module.total_rank)).complex
    return {"complex": A, "delta": delta, "other": B}


def verify_universal(inst):
    check_universal_property(inst["other"], inst["delta"])


# -- vertical functoriality ------------------------------------------------


def build_vertical(rng, ring, max_rank):
    top_f, bottom_f = random_stack(rng, ring, max_rank, stages=2)
    top, bottom = top_f.sdr, bottom_f.sdr
    composite = compose_sdr(top, bottom)
    delta = _perturbation(rng, top.source, top_f.source_frame, [top.h, composite.h])
    try:
        mid = perturb_sdr(top, delta).delta_prime
        ok = _admissible(mid.delta, bottom.h)
    except NotNilpotent:
        ok = False
    if not ok:
        delta = _filtered(rng, top.source, top_f.source_frame)
    return {"top": top, "bottom": bottom, "delta": delta}


def verify_vertical(inst):
    check_vertical_functoriality(inst["top"], inst["bottom"], inst["delta"])


# -- iteration ----------------------------------------------------------------------


def build_iteration(rng, ring, max_rank):
    framed = random_sdr(rng, ring, max_rank)
    s = framed.sdr
    delta = _perturbation(rng, s.source, framed.source_frame, [s.h])
    epsilon = _perturbation(rng, s.source, framed.source_frame, [s.h])
    h1 = perturb_sdr(s, delta).result.h
    if not _admissible(epsilon.delta - delta.delta, h1):
        delta = _filtered(rng, s.source, framed.source_frame)
        epsilon = _filtered(rng, s.source, framed.source_frame)
    return {"sdr": s, "delta": delta, "epsilon": epsilon}


def verify_iteration(inst):
    check_iteration(inst["sdr"], inst["delta"], inst["epsilon"])


# -- tensor functoriality ------------------------------------------------------------


def build_tensor(rng, ring, max_rank):
    left = random_sdr(rng, ring, rng.randint(2, max(2, min(8, max_rank // 2))))
    right_rank = max(1, max_rank // left.sdr.source.module.total_rank)
    right = random_sdr(rng, ring, right_rank)
    dl = _perturbation(rng, left.sdr.source, left.source_frame, [left.sdr.h])
    dr = _perturbation(rng, right.sdr.source, right.source_frame, [right.sdr.h])
    total = tensor_sdr(left.sdr, right.sdr)
    if not _admissible(tensor_perturbation(dl, dr).delta, total.h):
        dl = _filtered(rng, left.sdr.source, left.source_frame)
        dr = _filtered(rng, right.sdr.source, right.source_frame)
    return {"left": left.sdr, "right": right.sdr, "left_delta": dl, "right_delta": dr}


def verify_tensor(inst):
    check_tensor_functoriality(inst["left"], inst["right"], inst["left_delta"], inst["right_delta"])


# -- homology ---------------------------------------------------------------------------


def build_homology(rng, ring, max_rank):
    target = random_complex(rng, ring, max(1, max_rank // 2), torsion=True)
    framed = random_sdr(rng, ring, max_rank, target=target)
    s = framed.sdr
    delta = _perturbation(rng, s.source, framed.source_frame, [s.h])
    return {"sdr": s, "delta": delta}


def snf_self_check(M, cols):
    U, S, V = smith_normal_form(M, cols)
    if mx.matmul(mx.matmul(U, M, ZZ), V, ZZ) != S and M:
        raise Violation("U M V ≠ S")
    if abs(mx.determinant(U)) != 1 or abs(mx.determinant(V)) != 1:
        raise Violation("SNF transform is not unimodular")
    diag = [S[i][i] for i in range(min(len(S), cols))]
    nonzero = [x for x in diag if x]
    if any(b % a for a, b in zip(nonzero, nonzero[1:])):
        raise Violation("invariant factors do not divide successively")


def verify_homology(inst):
    out = perturb_sdr(inst["sdr"], inst["delta"])
    for C in (out.result.source, out.result.target):
        if C.ring == ZZ:
            for k in C.module.degrees:
                snf_self_check(C.d.block(k), C.module.rank(k))
    verify_equivalence(out)


SUITES = {
    "identities": (build_identities, verify_identities),
    "universal": (build_universal, verify_universal),
    "sdr": (build_sdr, verify_sdr),
    "bpl": (build_bpl, verify_bpl),
    "vertical": (build_vertical, verify_vertical),
    "iteration": (build_iteration, verify_iteration),
    "tensor": (build_tensor, verify_tensor),
    "homology": (build_homology, verify_homology),
}


def trial_rng(seed, suite, i) -> random.Random:
    return random.Random(f"{seed}:{suite}:{i}")


def _run_trials(args):
    suite, seed, indices, ring_text, max_rank = args
    ring = Ring.parse(ring_text)
    build, verify = SUITES[suite]
    failed = []
    for i in indices:
        try:
            verify(build(trial_rng(seed, suite, i), ring, max_rank))
        except (Violation, AssertionError) as exc:
            failed.append((i, f"{type(exc).__name__}: {exc}"))
    return failed


def instance_to_json(inst) -> dict:
    out = {}
    for name, value in inst.items():
        if isinstance(value, list):
            out[name] = [formats.sdr_to_json(s) for s in value]
        elif isinstance(value, Perturbation):
            out[name] = formats.map_to_json(value.delta)
        elif isinstance(value, ChainComplex):
            out[name] = formats.complex_to_json(value)
        elif isinstance(value, NonDgIso):
            out[name] = formats.iso_to_json(value)
        elif isinstance(value, GradedMap):
            out[name] = formats.map_to_json(value)
        else:
            out[name] = formats.sdr_to_json(value)
    return out


def run_suite(suite, seed=0, trials=100, max_rank=12, ring: Ring = ZZ, jobs=1) -> CheckReport:
    if suite not in SUITES:
        raise KeyError(suite)
    indices = list(range(trials))
    if jobs > 1 and trials > 1:
        chunks = [indices[j::jobs] for j in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            results = pool.map(_run_trials, [(suite, seed, c, str(ring), max_rank) for c in chunks])
            failed = sorted(x for part in results for x in part)
    else:
        failed = _run_trials((suite, seed, indices, str(ring), max_rank))
    report = CheckReport(suite, trials, len(failed), seed, max_rank)
    if failed:
        i, message = failed[0]
        build, _ = SUITES[suite]
        inst = build(trial_rng(seed, suite, i), ring, max_rank)
        report.counterexample = {
            "suite": suite,
            "seed": seed,
            "trial": i,
            "error": message,
            "instance": instance_to_json(inst),
        }
    return report


DEFAULT_MAX_RANK = {"tensor": 24, "universal": 12}


def run_all(seed=0, trials=100, max_rank=None, ring: Ring = ZZ, jobs=1):
    reports = []
    for suite in SUITES:
        rank = max_rank if max_rank is not None else DEFAULT_MAX_RANK.get(suite, 12)
        reports.append(run_suite(suite, seed, trials, rank, ring, jobs))
    return reports
