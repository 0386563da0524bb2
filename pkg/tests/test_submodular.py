from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zonocalc import submodular as sm


def test_cardinality_functions():
    concave = sm.SetFunction.from_callable(4, lambda s: Fraction(min(len(s), 2)))
    assert sm.is_submodular_local(concave).submodular
    convex = sm.SetFunction.from_callable(3, lambda s: Fraction(len(s) ** 2))
    rep = sm.is_submodular_global(convex)
    assert not rep.submodular and rep.worst.amount > 0


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_local_and_global_agree(m, seed):
    f = sm.random_table(np.random.default_rng(seed), m)
    assert sm.is_submodular_local(f).submodular == sm.is_submodular_global(f).submodular


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_random_submodular_is_submodular(m, seed):
    f = sm.random_submodular(np.random.default_rng(seed), m)
    assert sm.is_submodular_global(f).submodular


def test_log_volume_of_zonotope_sums_is_multiplicatively_submodular():
    from zonocalc.zonotope import Zonotope, volume

    a = Zonotope.cube(3)
    bs = [Zonotope(3, ((1, 2, 0),)), Zonotope(3, ((0, 1, 1),)), Zonotope(3, ((2, 0, 1), (1, 1, 1)))]

    def f(s):
        z = a
        for i in s:
            z = z + bs[i]
        return volume(z)

    table = sm.SetFunction.from_callable(3, f)
    assert sm.is_submodular_global(table, multiplicative=True).submodular


def test_elementary_compression_preserves_degrees():
    h = sm.MultiHypergraph(({0, 1}, {1, 2}, {2, 3}))
    g = sm.elementary_compression(h, 0, 1)
    assert all(h.degree(i) == g.degree(i) for i in range(4))
    assert g.weight() == h.weight()
    with pytest.raises(ValueError):
        sm.elementary_compression(sm.MultiHypergraph(({0}, {0, 1})), 0, 1)


@given(st.integers(2, 5), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_greedy_ends_at_minimal_hypergraph(m, count, seed):
    rng = np.random.default_rng(seed)
    h = sm.random_hypergraph(rng, m, count)
    final, steps = sm.greedy_compress(h, rng)
    assert final.is_chain()
    assert final.multiset() == sm.minimal_hypergraph(h).multiset()


@given(st.integers(2, 5), st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_compression_sum_never_increases(m, count, seed):
    rng = np.random.default_rng(seed)
    f = sm.random_submodular(rng, m)
    h = sm.random_hypergraph(rng, m, count)
    _, steps = sm.greedy_compress(h, rng)
    r = sm.compression_sum_check(f, h, steps)
    assert r.verdict in ("holds", "equality")


def test_compression_can_fail_for_supermodular():
    f = sm.SetFunction.from_callable(2, lambda s: Fraction(len(s) ** 2))
    h = sm.MultiHypergraph(({0}, {1}))
    r = sm.compression_sum_check(f, h, [(0, 1)])
    assert r.verdict == "violated"


def test_table_validation():
    with pytest.raises(ValueError):
        sm.SetFunction(2, (1, 2, 3))
    with pytest.raises(ValueError):
        sm.SetFunction(sm.MAX_GROUND + 1, ())
