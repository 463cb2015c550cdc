
import pytest

from hperturb.complex import zero_perturbation
from hperturb.errors import ComplexMismatch, NaturalityViolation, SdrViolation
from hperturb.fixtures import interval_sdr, point_complex
from hperturb.generate import filtered_perturbation, random_sdr, random_stack
from hperturb.graded import GradedMap, identity, tensor_map
from hperturb.ring import GF, QQ, ZZ
from hperturb.sdr import (
    associator,
    compose_sdr,
    compose_squares_h,
    compose_squares_v,
    identity_sdr,
    identity_square,
    push_along,
    revalidate,
    symmetry,
    tensor_sdr,
    validate_sdr,
    validate_square,
)


def test_identity_sdr_is_valid(interval):
    revalidate(identity_sdr(interval.source))


@pytest.mark.parametrize("ring", [ZZ, QQ, GF(3)])
def test_interval_is_valid(ring):
    s = interval_sdr(ring)
    M = s.source.module
    assert s.h == GradedMap.from_images(M, M, 1, {"b": {"e": -1}})


def test_wrong_sign_is_reported():
    bad = interval_sdr(h_sign=1)
    with pytest.raises(SdrViolation) as info:
        validate_sdr(bad.source, bad.target, bad.f, bad.g, bad.h)
    assert info.value.names == ["Dh = 1 - gf"]
    _, witness = info.value.relations[0]
    assert not witness.is_zero()


def test_only_minus_e_works():
    base = interval_sdr()
    ok = []
    for c in range(-3, 4):
        s = interval_sdr(h_sign=c)
        try:
            validate_sdr(s.source, s.target, s.f, s.g, s.h)
            ok.append(c)
        except SdrViolation:
            pass
    assert ok == [-1] and base.h.block(0) == ((0, -1),)


def test_compose_with_identities(interval):
    assert compose_sdr(identity_sdr(interval.source), interval) == interval
    assert compose_sdr(interval, identity_sdr(interval.target)) == interval


def test_compose_mismatch(interval):
    with pytest.raises(ComplexMismatch):
        compose_sdr(interval, interval)


def test_stack_composite(rng):
    for _ in range(20):
        top, bottom = (x.sdr for x in random_stack(rng, ZZ, 10, stages=2))
        c = compose_sdr(top, bottom)
        revalidate(c)
        assert c.h == top.h + top.g @ bottom.h @ top.f


def test_tensor_identities(interval):
    A = interval.source
    t = tensor_sdr(identity_sdr(A), identity_sdr(A))
    assert t.h.is_zero() and t.f == identity(t.source.module)


def test_tensor_with_point_unit(interval):
    unit = identity_sdr(point_complex())
    t = tensor_sdr(interval, unit)
    revalidate(t)
    assert t.source.module.ranks == interval.source.module.ranks
    assert t.h.blocks == interval.h.blocks


def test_interval_squared(interval):
    t = tensor_sdr(interval, interval)
    revalidate(t)
    assert t.source.module.ranks == {0: 4, 1: 4, 2: 1}
    one = identity(interval.source.module)
    gf = interval.g @ interval.f
    assert t.h == tensor_map(interval.h, one) + tensor_map(gf, interval.h)


def test_tensor_associator_is_natural(rng):
    for _ in range(5):
        a, b, c = (random_sdr(rng, ZZ, 4).sdr for _ in range(3))
        left = tensor_sdr(tensor_sdr(a, b), c)
        right = tensor_sdr(a, tensor_sdr(b, c))
        u = associator(a.source.module, b.source.module, c.source.module)
        v = associator(a.target.module, b.target.module, c.target.module)
        validate_square(left, right, u, v)


def test_symmetry_commutes_with_f_and_g_but_not_h(interval):
    # h (x) 1 + gf (x) h is not symmetric, so the swap is only natural on f and g
    a, b = interval, interval
    ab, ba = tensor_sdr(a, b), tensor_sdr(b, a)
    u = symmetry(a.source.module, b.source.module)
    v = symmetry(a.target.module, b.target.module)
    assert v @ ab.f == ba.f @ u
    assert u @ ab.g == ba.g @ v
    assert u @ ab.h != ba.h @ u
    with pytest.raises(NaturalityViolation):
        validate_square(ab, ba, u, v)


def test_squares(rng, interval):
    validate_square(interval, interval, *(identity_square(interval).u, identity_square(interval).v))
    s = random_sdr(rng, ZZ, 6).sdr
    q = identity_square(s)
    assert compose_squares_h(q, q) == q
    two = random_stack(rng, ZZ, 8, stages=2)
    upper, lower = identity_square(two[0].sdr), identity_square(two[1].sdr)
    v = compose_squares_v(upper, lower)
    assert v.top == compose_sdr(two[0].sdr, two[1].sdr)


def test_interchange_law(rng):
    # a 2x2 grid of identity-like squares built from one stack, scaled by units
    top, bottom = (x.sdr for x in random_stack(rng, ZZ, 8, stages=2))
    def sq(s, c):
        return validate_square(s, s, c * identity(s.source.module), c * identity(s.target.module))
    a, b = sq(top, -1), sq(top, -1)
    c, d = sq(bottom, -1), sq(bottom, -1)
    rows_first = compose_squares_v(compose_squares_h(a, b), compose_squares_h(c, d))
    cols_first = compose_squares_h(compose_squares_v(a, c), compose_squares_v(b, d))
    assert rows_first == cols_first


def test_non_natural_square_rejected(interval):
    M = interval.source.module
    u = GradedMap.from_images(M, M, 0, {"a": {"b": 1}, "b": {"a": 1}, "e": {"e": -1}})
    with pytest.raises(NaturalityViolation):
        validate_square(interval, interval, u, identity(interval.target.module))


def test_push_along_zero(interval):
    pushed, delta = push_along(interval, zero_perturbation(interval.target))
    assert pushed == interval and delta.delta.is_zero()


def test_push_along_identity(rng):
    framed = random_sdr(rng, ZZ, 6)
    A = framed.sdr.source
    dp = filtered_perturbation(rng, A, framed.source_frame)
    pushed, delta = push_along(identity_sdr(A), dp)
    assert delta.delta == dp.delta and pushed.source == pushed.target


def test_push_along_random(rng):
    hits = 0
    for _ in range(20):
        framed = random_sdr(rng, ZZ, 10)
        s = framed.sdr
        dp = filtered_perturbation(rng, s.target, framed.target_frame)
        hits += not dp.delta.is_zero()
        pushed, delta = push_along(s, dp)
        revalidate(pushed)
        assert delta.delta == s.g @ dp.delta @ s.f
    assert hits


def test_push_along_wrong_complex(interval):
    with pytest.raises(ComplexMismatch):
        push_along(interval, zero_perturbation(interval.source))
