import pytest

from spzcl.closed_forms import zcl_closed
from spzcl.combinatorics import gap_p2n
from spzcl.ring_core import Monomial, RingContext
from spzcl.search_oracle import (
    ExponentTuple,
    max_ell,
    reduced_tuples,
    reduction_soundness,
    search_zcl,
    unrestricted_tuples,
    verify_grid,
)
from spzcl.tensor_ring import TensorContext


def test_small_values():
    assert search_zcl(1, 1, 2).value == 3
    assert search_zcl(1, 2, 2).value == 3
    assert search_zcl(2, 1, 2).value == 7
    assert search_zcl(1, 2, 3).value == 6


def test_witness_for_p2():
    res = search_zcl(1, 1, 2)
    tctx = TensorContext(RingContext(1, 1), 2)
    assert res.witness.tuple.exponents() == {(2, 1): 3}
    assert res.witness.survivor_factors(tctx) == (Monomial(2, 0), Monomial(1, 0))
    assert res.witness.verify(tctx)


def test_witness_for_klein_bottle():
    res = search_zcl(1, 2, 2)
    w = res.witness
    assert w.total_degree == 3
    assert w.tuple.exponents() == {(2, 1): 2, (2, 2): 1}
    assert w.verify(TensorContext(RingContext(1, 2), 2))


@pytest.mark.parametrize("n,g,k", [(1, 1, 2), (1, 3, 3), (2, 2, 3), (3, 2, 2), (2, 3, 4)])
def test_every_witness_verifies(n, g, k):
    res = search_zcl(n, g, k)
    assert res.exact and res.value == zcl_closed(n, g, k)[0]
    assert res.witness.verify(TensorContext(RingContext(n, g), k))
    assert res.witness.tuple.is_reduced()


def test_reduced_tuples_shape():
    for t in reduced_tuples(2, 3, 3, 9):
        assert t.total_degree == 9
        assert t.is_reduced()
        assert all(a <= 7 for a in t.a1)
    keys = [t.sort_key() for t in reduced_tuples(2, 3, 3, 9)]
    assert keys == sorted(keys)
    assert len(unrestricted_tuples(1, 2, 2, 3)) == 4


def test_not_reduced():
    assert not ExponentTuple((1, 2), ((0,), (0,))).is_reduced()
    assert not ExponentTuple((2, 1), ((0, 1), (0, 0))).is_reduced()
    assert ExponentTuple((2, 1), ((1, 0), (1, 1))).is_reduced()


@pytest.mark.parametrize("n,g,k", [(1, 2, 2), (2, 2, 2), (1, 2, 3), (2, 1, 3), (1, 3, 4)])
def test_pruning_does_not_change_answers(n, g, k):
    a = search_zcl(n, g, k, prune=True)
    b = search_zcl(n, g, k, prune=False)
    assert a.value == b.value
    assert a.witness.tuple == b.witness.tuple
    assert a.terms_expanded <= b.terms_expanded


def test_reduction_soundness():
    cells = reduction_soundness(range(1, 3), range(1, 3), range(2, 4))
    assert len(cells) == 8
    assert all(c.status == "agree" for c in cells)


def test_parallel_search_is_deterministic():
    serial = search_zcl(2, 3, 3, workers=1)
    parallel = search_zcl(2, 3, 3, workers=2)
    assert serial.value == parallel.value
    assert serial.witness == parallel.witness


def test_budget_exhaustion():
    res = search_zcl(3, 3, 3, budget=5)
    assert not res.exact
    assert res.value is None and res.witness is None
    rep = verify_grid([3], [3], [3], budget=5)
    assert rep.ok and len(rep.exhausted) == 1


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("k", [2, 3, 4])
def test_max_ell_recovers_projective_gap(n, k):
    res = max_ell(n, k)
    assert res.exact
    assert 2 * n - res.ell == gap_p2n(n, k)


def test_grid_report():
    rep = verify_grid(range(1, 3), range(1, 3), [2, 3])
    assert rep.ok
    assert rep.stats()["agree"] == 8
    assert [(c.n, c.g, c.k) for c in rep.cells] == sorted((c.n, c.g, c.k) for c in rep.cells)
    par = verify_grid(range(1, 3), range(1, 3), [2, 3], workers=2)
    assert [c.as_dict() for c in par.cells] == [c.as_dict() for c in rep.cells]


def test_invalid():
    with pytest.raises(ValueError):
        search_zcl(1, 1, 1)
    with pytest.raises(ValueError):
        max_ell(0, 2)
