import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from conftest import gaussian_cseq
from oracles import rank_bruteforce

from twistlab.seq import (
    CSeq,
    conjugate_exponent,
    decreasing_rearrangement,
    holder_split,
    lp_norm,
    polar_decomposition,
    rank_sequence,
)

# magnitudes bounded away from underflow so |c| * |x| stays representable
finite = st.one_of(st.just(0.0), st.floats(1e-6, 1e3), st.floats(-1e3, -1e-6))
cplx = st.builds(complex, finite, finite)


def test_zeros_are_not_stored():
    x = CSeq.from_dense([0, 2, 0, -1])
    assert x.idx.tolist() == [2, 4]
    assert x.support_size == 2
    assert x[1] == 0 and x[4] == -1


def test_invariants_enforced():
    with pytest.raises(ValueError):
        CSeq(np.array([0]), np.array([1.0]), 3)
    with pytest.raises(ValueError):
        CSeq(np.array([4]), np.array([1.0]), 3)
    with pytest.raises(ValueError):
        CSeq(np.array([2, 1]), np.array([1.0, 1.0]), 3)
    with pytest.raises(ValueError):
        CSeq.from_entries([(1, 1.0), (1, 2.0)], 3)


def test_values_are_immutable():
    x = CSeq.from_dense([1, 2])
    with pytest.raises(ValueError):
        x.vals[0] = 5


def test_lp_norm_examples():
    assert lp_norm(CSeq.from_dense([3, 4]), 2) == 5.0
    assert lp_norm(CSeq.zeros(5), 2) == 0.0
    assert lp_norm(CSeq.from_dense([1, 1]), 0.5) == pytest.approx(4.0, rel=1e-15)
    assert lp_norm(CSeq.from_dense([3, -7j]), math.inf) == 7.0


def test_lp_norm_rejects_nonfinite():
    with pytest.raises(ValueError):
        lp_norm(np.array([1.0, np.nan]), 2)
    with pytest.raises(ValueError):
        CSeq.from_dense([1.0, np.inf])


@given(st.lists(cplx, min_size=1, max_size=30), cplx, st.sampled_from([0.5, 1.0, 2.0, 3.0, math.inf]))
@settings(max_examples=300, deadline=None)
def test_lp_norm_homogeneous(vals, c, p):
    x = CSeq.from_dense(vals)
    lhs = lp_norm(x * c, p)
    rhs = abs(c) * lp_norm(x, p)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


def test_decreasing_rearrangement_examples():
    assert decreasing_rearrangement(CSeq.from_dense([0.5, 0.9, 0.5])).tolist() == [0.9, 0.5, 0.5]
    assert decreasing_rearrangement(CSeq.unit(7, 10)).tolist() == [1.0]
    assert decreasing_rearrangement(CSeq.from_dense([2j, -2])).tolist() == [2.0, 2.0]


def test_rank_sequence_examples():
    vals = [0.5, 0.9, 0.5]
    expected = rank_bruteforce(vals)
    assert expected == {1: 2, 2: 1, 3: 3}
    assert rank_sequence(CSeq.from_dense(vals)) == expected
    assert rank_sequence(CSeq.indicator(6, value=3 - 1j)) == {n: n for n in range(1, 7)}
    assert rank_sequence(CSeq.unit(7, 9)) == {7: 1}
    assert rank_sequence(CSeq.zeros(4)) == {}


def test_rank_sequence_matches_definition_with_ties(rng):
    for _ in range(200):
        vals = rng.integers(-3, 4, size=12).astype(float)  # many ties and zeros
        assert rank_sequence(CSeq.from_dense(vals)) == rank_bruteforce(vals.tolist())


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=25), st.randoms(use_true_random=False))
@settings(max_examples=200, deadline=None)
def test_rank_multiset_under_permutation(vals, rnd):
    x = CSeq.from_dense(np.array(vals, dtype=float))
    sigma = list(range(1, x.dim + 1))
    rnd.shuffle(sigma)
    y = x.compose(np.array(sigma))
    k = x.support_size
    assert sorted(rank_sequence(y).values()) == list(range(1, k + 1))
    assert sorted(rank_sequence(x).values()) == list(range(1, k + 1))


def test_compose_definition():
    x = CSeq.from_dense([10, 20, 30])
    y = x.compose(np.array([3, 1, 2]))  # y(n) = x(sigma(n))
    assert y.to_dense().tolist() == [30, 10, 20]


def test_polar_decomposition_examples():
    u, m = polar_decomposition(CSeq.from_dense([-2]))
    assert u[1] == -1 and m[1] == 2
    u, m = polar_decomposition(CSeq.from_dense([3j]))
    assert u[1] == 1j and m[1] == 3
    u, m = polar_decomposition(CSeq.from_dense([1 + 1j]))
    assert u[1] == pytest.approx((1 + 1j) / math.sqrt(2), rel=1e-15)
    assert m[1] == pytest.approx(math.sqrt(2), rel=1e-15)


def test_polar_unit_off_support():
    u, m = polar_decomposition(CSeq.from_dense([0, 2j, 0]))
    assert u.to_dense().tolist() == [1, 1j, 1]
    assert m.support_size == 1


def test_polar_recomposition(rng):
    for _ in range(200):
        x = gaussian_cseq(rng, 20, support=11)
        u, m = polar_decomposition(x)
        assert np.all(np.abs(np.abs(u.vals) - 1) < 1e-15)
        assert np.allclose(u.multiply(m).to_dense(), x.to_dense(), rtol=1e-15, atol=0)


def test_holder_split_examples():
    a, b = holder_split(CSeq.from_dense([1, 1]), 2, 1)
    assert a.to_dense().tolist() == [1, 1] and b.to_dense().tolist() == [1, 1]
    assert lp_norm(CSeq.from_dense([1, 1]), 1) == pytest.approx(lp_norm(a, 2) * lp_norm(b, 2), rel=1e-15)
    a, b = holder_split(CSeq.from_dense([4]), 2, 1)
    assert a[1] == 2 and b[1] == 2
    a, b = holder_split(CSeq.zeros(3), 2, 1)
    assert a.support_size == 0 and b.support_size == 0


def test_holder_split_rejects_bad_input():
    with pytest.raises(ValueError):
        holder_split(CSeq.from_dense([-1.0]), 2, 1)
    with pytest.raises(ValueError):
        holder_split(CSeq.from_dense([1j]), 2, 1)
    with pytest.raises(ValueError):
        holder_split(CSeq.from_dense([1.0]), 2, 2)
    with pytest.raises(ValueError):
        holder_split(CSeq.from_dense([1.0]), 1, 2)


@pytest.mark.parametrize("p,q", [(2, 1), (4, 2), (1, 0.5)])
def test_holder_norm_identity(rng, p, q):
    s = conjugate_exponent(p, q)
    for _ in range(1000):
        x = CSeq.from_dense(rng.exponential(size=16) * (rng.random(16) < 0.7))
        a, b = holder_split(x, p, q)
        assert np.array_equal(a.idx, x.idx)
        assert np.allclose(a.vals * b.vals, x.vals, rtol=1e-15, atol=0)
        lhs = lp_norm(x, q)
        assert lhs == pytest.approx(lp_norm(a, s) * lp_norm(b, p), rel=1e-12)


def test_json_round_trip(rng):
    x = gaussian_cseq(rng, 30, support=7)
    y = CSeq.from_json(x.to_json())
    assert y == x
    z = CSeq.from_json({"dim": 4, "real": [0, 1.5, 0, -2]})
    assert z.idx.tolist() == [2, 4] and z.vals.tolist() == [1.5, -2]


def test_json_errors():
    with pytest.raises(ValueError):
        CSeq.from_json({"entries": []})
    with pytest.raises(ValueError):
        CSeq.from_json({"dim": 3, "entries": [[1, 1, 0], [1, 2, 0]]})
    with pytest.raises(ValueError):
        CSeq.from_json({"dim": 3})
