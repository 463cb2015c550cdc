import pytest
from hypothesis import given
from hypothesis import strategies as st

from hperturb.checks import random_map
from hperturb.errors import ModuleMismatch, RingMismatch
from hperturb.graded import (
    GradedMap,
    GradedModule,
    bracket,
    compose,
    identity,
    point,
    tensor_map,
    tensor_module,
    zero,
)
from hperturb.ring import QQ, ZZ
from hperturb.complex import tensor_complex


def test_zero_blocks_are_dropped():
    M = GradedModule(ZZ, {0: 2})
    f = GradedMap(M, M, 0, {0: ((0, 0), (0, 0))})
    assert f.blocks == {} and f.is_zero() and f == zero(M, M)


def test_shape_is_checked():
    M = GradedModule(ZZ, {0: 2})
    with pytest.raises(ValueError):
        GradedMap(M, M, 0, {0: ((1,),)})


def test_compose_identity(interval):
    f = interval.f
    assert compose(identity(f.target), f) == f == f @ identity(f.source)


def test_compose_d_d(interval):
    d = interval.source.d
    assert (d @ d).is_zero()


def test_compose_mismatch(interval):
    with pytest.raises(ModuleMismatch):
        compose(interval.f, interval.f)
    M = GradedModule(ZZ, {0: 1})
    N = GradedModule(QQ, {0: 1})
    with pytest.raises(RingMismatch):
        compose(identity(M), identity(N))


def test_delta_h_on_interval(interval, interval_delta):
    M = interval.source.module
    dh = interval_delta.delta @ interval.h
    assert dh == GradedMap.from_images(M, M, 0, {"b": {"a": 1}})


def test_brackets_on_interval(interval, interval_delta):
    M = interval.source.module
    one = identity(M)
    assert bracket(interval.source.d, interval.h) == one - interval.g @ interval.f
    assert bracket(interval_delta.delta, interval.h) == GradedMap.from_images(M, M, 0, {"b": {"a": 1}})


def test_bracket_with_itself(interval):
    # [f, f] = f f - (-1)^{|f|^2} f f vanishes for even f and doubles odd f
    p = interval.g @ interval.f
    assert p @ p != zero(p.source, p.target)
    assert bracket(p, p).is_zero()
    M = GradedModule(ZZ, {0: 1, 1: 1, 2: 1})
    x = GradedMap.from_images(M, M, 1, {"e0_0": {"e1_0": 1}, "e1_0": {"e2_0": 3}})
    assert bracket(x, x) == 2 * (x @ x) != zero(M, M, 2)


def test_tensor_module_ranks(interval):
    A = interval.source.module
    assert tensor_module(A, A).ranks == {0: 4, 1: 4, 2: 1}
    unit = tensor_module(point(ZZ), A)
    assert unit.ranks == A.ranks
    one = GradedModule(ZZ, {1: 1})
    assert tensor_module(one, one).ranks == {2: 1}


def test_tensor_identity(interval):
    A = interval.source.module
    assert tensor_map(identity(A), identity(A)) == identity(tensor_module(A, A))


def test_tensor_differential_squares_to_zero(interval):
    C = tensor_complex(interval.source, interval.source)
    assert (C.d @ C.d).is_zero()


def test_koszul_sign(interval):
    A = interval.source.module
    T = tensor_module(A, A)
    x = tensor_map(identity(A), interval.h)
    # e ⊗ b  ->  (-1)^{|h||e|} e ⊗ h(b) = -e ⊗ (-e) = e ⊗ e
    assert x.apply(1, [1 if name == "e⊗b" else 0 for name in T.labels[1]]) == (1,)


def test_tensor_interchange_sign(rng):
    M = GradedModule(ZZ, {0: 1, 1: 2, 2: 1})
    for _ in range(20):
        f, g, x, y = (random_map(rng, M, M, rng.randint(-1, 1)) for _ in range(4))
        lhs = tensor_map(f, g) @ tensor_map(x, y)
        assert lhs == (-1) ** (g.degree * x.degree) * tensor_map(f @ x, g @ y)


@given(st.integers(-3, 3), st.integers(-2, 2), st.integers(0, 10**6))
def test_bracket_antisymmetry(p, q, seed):
    import random

    rng = random.Random(seed)
    M = GradedModule(ZZ, {-1: 1, 0: 2, 1: 2, 2: 1})
    f, g = random_map(rng, M, M, p), random_map(rng, M, M, q)
    assert bracket(f, g) == -((-1) ** (p * q)) * bracket(g, f)


def test_labels_and_locate():
    M = GradedModule(ZZ, {0: 2, 3: 1})
    assert M.label(3, 0) == "e3_0"
    assert M.locate("e0_1") == (0, 1)
    assert M.total_rank == 3
    assert M.with_labels({0: ("p", "q"), 3: ("r",)}) == M
