"""The basic perturbation lemma and its functoriality.

Given an SDR ``(f, g, h): A -> B`` and a perturbation ``delta`` of ``A`` with
``delta h`` nilpotent, the perturbed SDR ``A_delta -> B_delta'`` is

    f^ = f (1 + delta h)^-1
    g^ = (1 + h delta)^-1 g
    h^ = h (1 + delta h)^-1 = (1 + h delta)^-1 h
    delta' = f^ delta g = f delta g^

All identities below are checked by exact matrix equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import SimpleNamespace

from .calculus import NonDgIso, left_log_derivative
from .complex import (
    ChainComplex,
    Perturbation,
    check_maurer_cartan,
    perturb_complex,
    relative_perturbation,
    tensor_complex,
)
from .errors import ComplexMismatch, FunctorialityViolation
from .graded import GradedMap, bracket, identity, tensor_map
from .nilpotent import NilpotencyCertificate, neumann_inverse, nilpotency_index
from .sdr import Sdr, compose_sdr, identity_sdr, tensor_sdr, validate_sdr

__all__ = [
    "NilpotencyCertificate",
    "PerturbedSdr",
    "neumann_inverse",
    "nilpotency_index",
    "perturb_sdr",
    "transfer_iso",
    "perturb_sdr_dual_order",
    "lemma_invariants",
    "transfer_composites",
    "tensor_perturbation",
    "check_vertical_functoriality",
    "check_iteration",
    "check_tensor_functoriality",
    "check_tensor_inner_case",
    "check_tensor_outer_case",
]


@dataclass(frozen=True, eq=False)
class PerturbedSdr:
    original: Sdr
    delta: Perturbation
    result: Sdr
    delta_prime: Perturbation
    transfer: NonDgIso
    certificate: NilpotencyCertificate


def _lemma_parts(s: Sdr, delta: Perturbation):
    if delta.complex != s.source:
        raise ComplexMismatch("perturbation does not live on the SDR source")
    f, g, h, d = s.f, s.g, s.h, delta.delta
    one = identity(s.source.module)
    alpha_inv, cert = neumann_inverse(d @ h)
    beta0_inv, _ = neumann_inverse(h @ d)
    return SimpleNamespace(
        f=f,
        g=g,
        h=h,
        d=d,
        one=one,
        alpha=one + d @ h,
        alpha_inv=alpha_inv,
        beta0_inv=beta0_inv,
        cert=cert,
    )


def transfer_iso(s: Sdr, delta: Perturbation) -> NonDgIso:
    """``alpha beta^-1 = 1 + delta h - h^ delta g f`` with its inverse ``beta alpha^-1``."""
    p = _lemma_parts(s, delta)
    h_hat = p.h @ p.alpha_inv
    correction = h_hat @ p.d @ p.g @ p.f
    theta = p.one + p.d @ p.h - correction
    theta_inv = (p.one + correction) @ p.alpha_inv
    return NonDgIso(theta, theta_inv)


def perturb_sdr(s: Sdr, delta: Perturbation) -> PerturbedSdr:
    p = _lemma_parts(s, delta)
    f, g, h, d = p.f, p.g, p.h, p.d

    localized = p.one - h @ p.alpha_inv @ d
    if localized != p.beta0_inv:
        raise AssertionError("(1 + hδ)^-1 ≠ 1 - h (1 + δh)^-1 δ")

    f_hat = f @ p.alpha_inv
    g_hat = p.beta0_inv @ g
    h_hat = h @ p.alpha_inv
    if h_hat != p.beta0_inv @ h:
        raise AssertionError("h (1 + δh)^-1 ≠ (1 + hδ)^-1 h")
    delta_prime = f_hat @ d @ g
    if delta_prime != f @ d @ g_hat:
        raise AssertionError("f^ δ g ≠ f δ g^")

    target_p = check_maurer_cartan(delta_prime, s.target)
    result = validate_sdr(perturb_complex(delta), perturb_complex(target_p), f_hat, g_hat, h_hat)
    return PerturbedSdr(s, delta, result, target_p, transfer_iso(s, delta), p.cert)


def perturb_sdr_dual_order(s: Sdr, delta: Perturbation) -> tuple:
    """Run the argument with the beta-step first and pull back along
    ``alpha-bar^-1 beta-bar = 1 + h delta - g f delta h^``.

    Separate code path kept for cross-checking ``perturb_sdr``; returns
    ``(sdr, delta', pulling map)``.
    """
    f, g, h, d = s.f, s.g, s.h, delta.delta
    one = identity(s.source.module)
    beta_bar_inv, _ = neumann_inverse(h @ d)
    h_hat = beta_bar_inv @ h
    alpha_bar = one + g @ f @ d @ h_hat
    alpha_bar_inv = one - g @ f @ d @ h_hat
    if alpha_bar @ alpha_bar_inv != one:
        raise AssertionError("1 + gfδh^ is not inverted by 1 - gfδh^")
    pull = alpha_bar_inv @ (one + h @ d)
    pull_inv = beta_bar_inv @ alpha_bar
    f_new = f @ pull
    g_new = pull_inv @ g
    h_new = pull_inv @ h @ pull
    delta_prime = f @ d @ g_new
    target_p = check_maurer_cartan(delta_prime, s.target)
    result = validate_sdr(perturb_complex(delta), perturb_complex(target_p), f_new, g_new, h_new)
    return result, target_p, NonDgIso(pull, pull_inv)


def lemma_invariants(s: Sdr, delta: Perturbation) -> dict:
    """Internal facts of the construction, each mapped to whether it holds."""
    p = _lemma_parts(s, delta)
    f, g, h, d, one = p.f, p.g, p.h, p.d, p.one
    h_hat = h @ p.alpha_inv
    beta = one + h_hat @ d @ g @ f
    beta_inv = one - h @ p.alpha_inv @ d @ g @ f
    delta_1 = p.alpha_inv @ d @ g @ f
    delta_2 = g @ f @ p.alpha_inv @ d @ g @ f
    delta_prime = f @ p.alpha_inv @ d @ g
    theta = transfer_iso(s, delta)
    hat_delta = left_log_derivative(theta, s.source, perturb_complex(delta))
    return {
        "alpha g = g": p.alpha @ g == g,
        "alpha h = h": p.alpha @ h == h,
        "beta = 1 + h delta_1": beta == one + h @ delta_1,
        "beta^-1 = 1 - h alpha^-1 delta g f": beta @ beta_inv == one and beta_inv @ beta == one,
        "f beta = f": f @ beta == f,
        "h beta = h": h @ beta == h,
        "beta h = h": beta @ h == h,
        "delta_2 = g delta' f": delta_2 == g @ delta_prime @ f,
        "delta_2 = g f delta_1 beta^-1": delta_2 == g @ f @ delta_1 @ beta_inv,
        "D_l theta = g delta' f": hat_delta == g @ delta_prime @ f,
        "theta = alpha beta^-1": theta.alpha == p.alpha @ beta_inv,
    }


def transfer_composites(s: Sdr, delta: Perturbation) -> dict:
    """Composites of the transfer maps next to their closed forms.

    Returns the maps ``alpha beta^-1``, ``alpha-bar^-1 beta-bar``, their
    product, and ``[d + delta, h] + g^ f^`` so callers can compare them.
    """
    out = perturb_sdr(s, delta)
    _, _, pull = perturb_sdr_dual_order(s, delta)
    h, d, f, g = s.h, delta.delta, s.f, s.g
    h_hat = out.result.h
    one = identity(s.source.module)
    d_total = s.source.d + d
    return {
        "alpha beta^-1": out.transfer.alpha,
        "alpha beta^-1 (formula)": one + d @ h - h_hat @ d @ g @ f,
        "alpha-bar^-1 beta-bar": pull.alpha,
        "alpha-bar^-1 beta-bar (formula)": one + h @ d - g @ f @ d @ h_hat,
        "four-fold": out.transfer.alpha @ pull.alpha,
        "four-fold (formula)": bracket(d_total, h) + out.result.g @ out.result.f,
    }


def tensor_perturbation(left: Perturbation, right: Perturbation) -> Perturbation:
    """``delta_l (x) 1 + 1 (x) delta_r`` on the tensor complex."""
    total = tensor_complex(left.complex, right.complex)
    delta = tensor_map(left.delta, identity(right.complex.module)) + tensor_map(
        identity(left.complex.module), right.delta
    )
    return check_maurer_cartan(delta, total)


def _compare_sdrs(one: Sdr, two: Sdr, what: str):
    bad = [
        name
        for name, x, y in (
            ("source", one.source, two.source),
            ("target", one.target, two.target),
            ("f", one.f, two.f),
            ("g", one.g, two.g),
            ("h", one.h, two.h),
        )
        if x != y
    ]
    if bad:
        raise FunctorialityViolation(f"{what}: routes differ in {', '.join(bad)}")


def check_vertical_functoriality(top: Sdr, bottom: Sdr, delta: Perturbation) -> dict:
    """Perturbing ``top`` then ``bottom`` agrees with perturbing the composite."""
    first = perturb_sdr(top, delta)
    second = perturb_sdr(bottom, first.delta_prime)
    stepwise = compose_sdr(first.result, second.result)
    direct = perturb_sdr(compose_sdr(top, bottom), delta)
    _compare_sdrs(stepwise, direct.result, "vertical composition")
    if second.delta_prime != direct.delta_prime:
        raise FunctorialityViolation("vertical composition: target perturbations differ")
    return {"theorem": "vertical", "result": direct.result, "delta_prime": direct.delta_prime}


def check_iteration(s: Sdr, delta: Perturbation, epsilon: Perturbation) -> dict:
    """Perturbing by ``delta`` and then by ``epsilon - delta`` agrees with ``epsilon``."""
    first = perturb_sdr(s, delta)
    step = relative_perturbation(delta, epsilon)
    second = perturb_sdr(first.result, step)
    direct = perturb_sdr(s, epsilon)
    _compare_sdrs(second.result, direct.result, "iteration")
    # the second step perturbs B_δ' further, so the totals must agree
    if first.delta_prime.delta + second.delta_prime.delta != direct.delta_prime.delta:
        raise FunctorialityViolation("iteration: target perturbations differ")
    one = identity(s.source.module)
    composite = (one + step.delta @ first.result.h) @ (one + delta.delta @ s.h)
    if composite != one + epsilon.delta @ s.h:
        raise FunctorialityViolation("(1 + (ε - δ) h_1)(1 + δ h) ≠ 1 + ε h")
    return {"theorem": "iteration", "result": direct.result, "delta_prime": direct.delta_prime}


def check_tensor_functoriality(
    left: Sdr, right: Sdr, d_left: Perturbation, d_right: Perturbation
) -> dict:
    """``(L (x) R)`` perturbed by ``dl (x) 1 + 1 (x) dr`` equals ``L_dl (x) R_dr``."""
    total = tensor_perturbation(d_left, d_right)
    together = perturb_sdr(tensor_sdr(left, right), total)
    pl, pr = perturb_sdr(left, d_left), perturb_sdr(right, d_right)
    separately = tensor_sdr(pl.result, pr.result)
    _compare_sdrs(together.result, separately, "tensor product")
    expected = tensor_perturbation(pl.delta_prime, pr.delta_prime)
    if together.delta_prime.delta != expected.delta:
        raise FunctorialityViolation("tensor product: target perturbations differ")
    return {"theorem": "tensor", "result": together.result, "delta_prime": together.delta_prime}


def check_tensor_inner_case(C: ChainComplex, F: Sdr, delta: Perturbation) -> dict:
    """``1_C (x) F`` perturbed by ``1 (x) delta`` is ``1_C (x) F_delta``."""
    base = tensor_sdr(identity_sdr(C), F)
    zero_c = Perturbation(C, GradedMap(C.module, C.module, -1))
    together = perturb_sdr(base, tensor_perturbation(zero_c, delta))
    expected = tensor_sdr(identity_sdr(C), perturb_sdr(F, delta).result)
    _compare_sdrs(together.result, expected, "1 ⊗ δ case")
    return {"theorem": "tensor-inner", "result": together.result}


def check_tensor_outer_case(delta: Perturbation, F: Sdr) -> dict:
    """``1_C (x) F`` perturbed by ``delta (x) 1`` is ``1_{C_delta} (x) F``; the
    map pushed along is ``1 (x) 1 + delta (x) h``."""
    C = delta.complex
    base = tensor_sdr(identity_sdr(C), F)
    zero_f = Perturbation(F.source, GradedMap(F.source.module, F.source.module, -1))
    total = tensor_perturbation(delta, zero_f)
    alpha = identity(base.source.module) + total.delta @ base.h
    if alpha != identity(base.source.module) + tensor_map(delta.delta, F.h):
        raise FunctorialityViolation("α ≠ 1 ⊗ 1 + δ ⊗ h")
    together = perturb_sdr(base, total)
    expected = tensor_sdr(identity_sdr(perturb_complex(delta)), F)
    _compare_sdrs(together.result, expected, "δ ⊗ 1 case")
    return {"theorem": "tensor-outer", "result": together.result}
