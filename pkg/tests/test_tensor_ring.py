import itertools

import pytest
from hypothesis import given, strategies as st

from spzcl.ring_core import Monomial, RingContext, enumerate_basis, generator
from spzcl.tensor_ring import (
    TensorContext,
    bad_zero_divisor_product,
    factor_order,
    format_tensor_class,
    format_tensor_monomial,
    mul_zd_power,
    tensor_capacity,
    tensor_mul,
    total_multiplication,
    unit,
    zd_power,
    zd_product,
    zero_divisor,
)


def naive_power(r, i, m, tctx):
    acc = unit(tctx)
    z = zero_divisor(r, i, tctx)
    for _ in range(m):
        acc = tensor_mul(acc, z, tctx)
    return acc


contexts = st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(2, 4)).map(
    lambda t: TensorContext(RingContext(t[0], t[1]), t[2])
)


def test_pack_roundtrip():
    tctx = TensorContext(RingContext(2, 3), 3)
    basis = enumerate_basis(tctx.ring)
    for factors in itertools.islice(itertools.product(basis, repeat=3), 0, None, 7):
        key = tctx.pack(factors)
        assert tctx.unpack(key) == factors
        assert tctx.degree(key) == sum(m.degree for m in factors)
    with pytest.raises(ValueError):
        tctx.pack([Monomial()] * 2)
    with pytest.raises(ValueError):
        tctx.pack([Monomial(9, 0), Monomial(), Monomial()])


def test_unit_is_identity():
    tctx = TensorContext(RingContext(2, 2), 3)
    z = zero_divisor(2, 1, tctx)
    assert tensor_mul(unit(tctx), z, tctx) == z
    assert format_tensor_class(unit(tctx), tctx) == "1 (x) 1 (x) 1"


@pytest.mark.parametrize("n,g,k", [(1, 1, 2), (1, 2, 3), (2, 1, 2), (2, 2, 3), (3, 1, 2), (3, 2, 2)])
def test_lucas_power_matches_repeated_product(n, g, k):
    tctx = TensorContext(RingContext(n, g), k)
    for r in range(2, k + 1):
        for i in range(1, g + 1):
            for m in range(0, 13):
                assert zd_power(r, i, m, tctx) == naive_power(r, i, m, tctx), (r, i, m)


def test_power_vanishes_past_4n():
    tctx = TensorContext(RingContext(2, 1), 2)
    assert zd_power(2, 1, 8, tctx) == frozenset()
    assert zd_power(2, 1, 7, tctx) != frozenset()


@given(contexts, st.data())
def test_zero_divisors_lie_in_kernel(tctx, data):
    expts = {
        (r, i): data.draw(st.integers(0, 3))
        for r in range(2, tctx.k + 1)
        for i in range(1, tctx.g + 1)
    }
    prod = zd_product(expts, tctx)
    if any(expts.values()):
        assert total_multiplication(prod, tctx) == frozenset()
    else:
        assert prod == unit(tctx)


@given(contexts, st.data())
def test_product_is_symmetric_in_slots(tctx, data):
    if tctx.k < 3:
        return
    expts = {
        (r, i): data.draw(st.integers(0, 2))
        for r in range(2, tctx.k + 1)
        for i in range(1, tctx.g + 1)
    }
    swapped = {((5 - r) if r in (2, 3) else r, i): a for (r, i), a in expts.items()}
    lhs = zd_product(expts, tctx)
    rhs = zd_product(swapped, tctx)

    def swap(key):
        s = tctx.slots(key)
        s[1], s[2] = s[2], s[1]
        return sum(v << (j * tctx.width) for j, v in enumerate(s))

    assert frozenset(swap(key) for key in lhs) == rhs


@given(contexts, st.data())
def test_fast_power_agrees_with_general_product(tctx, data):
    basis = enumerate_basis(tctx.ring)
    p = frozenset(tctx.pack([data.draw(st.sampled_from(basis)) for _ in range(tctx.k)]) for _ in range(3))
    r = data.draw(st.integers(2, tctx.k))
    i = data.draw(st.integers(1, tctx.g))
    m = data.draw(st.integers(0, 6))
    assert mul_zd_power(p, r, i, m, tctx) == tensor_mul(p, naive_power(r, i, m, tctx), tctx)


def test_factor_order():
    expts = {(3, 2): 1, (2, 1): 4, (2, 2): 1, (3, 1): 0, (4, 1): 2}
    assert factor_order(expts) == [(2, 1), (4, 1), (2, 2), (3, 2)]


def test_simple_witness_survives():
    tctx = TensorContext(RingContext(1, 1), 2)
    prod = zd_product({(2, 1): 3}, tctx)
    survivor = tctx.pack([Monomial(2, 0), Monomial(1, 0)])
    assert survivor in prod
    assert format_tensor_monomial(survivor, tctx) == "x1^2 (x) x1"
    assert zd_product({(2, 1): 4}, tctx) == frozenset()


def test_folklore_product_for_n1_g2():
    tctx = TensorContext(RingContext(1, 2), 2)
    assert zd_product({(2, 1): 2, (2, 2): 1}, tctx)
    assert not any(zd_product({(2, 1): a, (2, 2): b}, tctx) for a in range(5) for b in range(5) if a + b == 4)


def test_capacity_is_additive():
    tctx = TensorContext(RingContext(3, 2), 2)
    key = tctx.pack([Monomial(4, 0), Monomial(3, 1)])
    assert tensor_capacity(key, tctx) == 1


@pytest.mark.parametrize("n,g", [(1, 1), (1, 2), (2, 2), (2, 4), (3, 5), (4, 6)])
def test_squared_zero_divisor_product(n, g):
    # each square is y (x) 1 + 1 (x) y, so the product is (y (x) 1 + 1 (x) y)^j
    for j in range(1, g + 1):
        prod = bad_zero_divisor_product(n, g, j)
        expected = any(a <= n and j - a <= n for a in range(j + 1) if a & ~j == 0)
        assert bool(prod) == expected, (n, g, j)
        tctx = TensorContext(RingContext(n, g), 2)
        assert all(tctx.unpack(key)[0].idx == 0 == tctx.unpack(key)[1].idx for key in prod)


def test_bad_inputs():
    tctx = TensorContext(RingContext(1, 2), 2)
    with pytest.raises(ValueError):
        zero_divisor(1, 1, tctx)
    with pytest.raises(ValueError):
        zero_divisor(2, 3, tctx)
    with pytest.raises(ValueError):
        zd_product({(2, 1): -1}, tctx)
    with pytest.raises(ValueError):
        zd_power(2, 1, -1, tctx)
    with pytest.raises(ValueError):
        TensorContext(RingContext(1, 1), 1)
    with pytest.raises(ValueError):
        bad_zero_divisor_product(1, 2, 3)
