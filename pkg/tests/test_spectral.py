import json
import math

import numpy as np
import pytest
from conftest import gaussian_cseq, unitary
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import singular_values_3x3

from twistlab.presets import preset
from twistlab.seq import CSeq, lp_norm
from twistlab.spectral import (
    SVDConvergenceError,
    liftability_criterion,
    lorentz_log_norm,
    macaev_norm,
    matrix_from_json,
    matrix_to_json,
    parse_matrix,
    rank_one,
    schatten_norm,
    schmidt_expansion,
    singular_values,
    spectrum_csv,
    svd,
)


def cmat(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


# singular values


def test_diag_and_zero():
    assert singular_values(np.diag([3.0, 4.0])).tolist() == [4.0, 3.0]
    assert singular_values(np.zeros((3, 3))).tolist() == [0.0, 0.0, 0.0]


def test_diagonal_gives_sorted_moduli(rng):
    d = cmat(rng, 1, 9)[0]
    assert np.allclose(singular_values(np.diag(d)), np.sort(np.abs(d))[::-1], rtol=1e-15, atol=0)


def test_three_by_three_against_cubic_oracle(rng):
    for _ in range(100):
        M = cmat(rng, 3, 3)
        want = singular_values_3x3(M.tolist())
        assert np.allclose(singular_values(M), want, rtol=1e-8, atol=0)


@pytest.mark.parametrize("shape", [(5, 3), (3, 5), (1, 4), (4, 1), (6, 6)])
def test_svd_reconstructs_and_is_orthonormal(rng, shape):
    M = cmat(rng, *shape)
    U, s, Vh = svd(M)
    k = min(shape)
    assert s.shape == (k,)
    assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
    assert np.allclose(U @ np.diag(s) @ Vh, M, atol=1e-12)
    assert np.allclose(U.conj().T @ U, np.eye(k), atol=1e-12)
    assert np.allclose(Vh @ Vh.conj().T, np.eye(k), atol=1e-12)


def test_rank_deficient(rng):
    M = cmat(rng, 5, 2) @ cmat(rng, 2, 5)
    s = singular_values(M)
    assert s.size == 5
    assert np.all(s[2:] <= 1e-12 * s[0])


def test_parallel_columns_converge():
    # the second column is a multiple of the first; round-off must not stall the sweeps
    s = singular_values(np.array([[1, 1 + 1j], [0, 0]]))
    assert s[0] == pytest.approx(math.sqrt(3), rel=1e-15) and s[1] <= 1e-15


def test_unitary_invariance(rng):
    for _ in range(30):
        M = cmat(rng, 6, 6)
        U, V = unitary(rng, 6), unitary(rng, 6)
        assert np.allclose(singular_values(U @ M @ V), singular_values(M), rtol=1e-9, atol=1e-12)


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        singular_values(np.array([[1.0, np.nan], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        singular_values(np.ones(3))


def test_convergence_failure_raises(rng):
    with pytest.raises(SVDConvergenceError):
        svd(cmat(rng, 8, 8), max_sweeps=1)
    assert issubclass(SVDConvergenceError, ArithmeticError)


# norms


def test_schatten_examples():
    D = np.diag([3.0, 4.0])
    assert schatten_norm(D, 1) == 7.0
    assert schatten_norm(D, 2) == 5.0
    assert schatten_norm(D, math.inf) == 4.0
    assert macaev_norm(np.eye(4)) == pytest.approx(25 / 12, rel=1e-15)


def test_schatten_two_is_frobenius(rng):
    for _ in range(50):
        M = cmat(rng, 5, 7)
        frob = math.sqrt(float((np.abs(M) ** 2).sum()))
        assert schatten_norm(M, 2) == pytest.approx(frob, rel=1e-10)


def test_schatten_monotone(rng):
    ps = [0.5, 1.0, 1.5, 2.0, 3.0, 8.0, math.inf]
    for _ in range(100):
        M = cmat(rng, 4, 4)
        vals = [schatten_norm(M, p) for p in ps]
        assert all(b <= a * (1 + 1e-12) for a, b in zip(vals, vals[1:]))


def test_lorentz_examples():
    for N in (1, 10, 1000):
        assert lorentz_log_norm(preset("invlog", N)) == pytest.approx(1.0, abs=1e-15)
    assert lorentz_log_norm(CSeq.unit(1, 5)) == pytest.approx(math.log(2), rel=1e-15)
    for N in (5, 50, 500):
        assert lorentz_log_norm(CSeq.indicator(N)) == pytest.approx(math.log(N + 1), rel=1e-15)
    assert lorentz_log_norm(CSeq.zeros(3)) == 0.0


def test_lorentz_permutation_invariant_and_monotone(rng):
    for _ in range(50):
        d = gaussian_cseq(rng, 20)
        perm = rng.permutation(20) + 1
        assert lorentz_log_norm(d.compose(perm)) == lorentz_log_norm(d)
        shrink = rng.uniform(0, 1, 20)
        assert lorentz_log_norm(d.multiply(shrink)) <= lorentz_log_norm(d)


# criterion


def test_criterion_examples():
    r = liftability_criterion(preset("invn", 1000), 1.0)
    # max_n log n / (n+1) is attained at n = 4
    assert r.bounded and r.witness == 4
    assert r.max_term == pytest.approx(max(math.log(n) / (n + 1) for n in range(2, 1001)), rel=1e-15)
    r = liftability_criterion(CSeq.indicator(10), 2.0)
    assert not r.bounded and math.log(r.witness) > 2
    r = liftability_criterion(preset("invlog", 10_000), 1.01)
    assert r.bounded and r.max_term < 1.0


def test_criterion_trend_labels():
    assert liftability_criterion(CSeq.indicator(1000), 1.0).trend == "growing"
    assert liftability_criterion(preset("invsqrt", 1000), 1.0).trend == "decaying"
    r = liftability_criterion(CSeq.unit(1, 3), 1.0)
    assert r.bounded and r.witness is None and r.trend == "n/a"
    with pytest.raises(ValueError):
        liftability_criterion(CSeq.indicator(3), 0.0)


@pytest.mark.parametrize("name", ["invsqrt", "invn", "geometric:0.5"])
def test_summable_presets_have_vanishing_tail(name):
    # sum d_n^p < inf forces d*_n log n -> 0
    r10 = liftability_criterion(preset(name, 10_000), 10.0)
    assert r10.tail_max < r10.head_max
    assert r10.tail_max < liftability_criterion(preset(name, 1000), 10.0).tail_max


# rank one and Schmidt


def test_rank_one_matrix_unit():
    E = rank_one(CSeq.unit(1, 3), CSeq.unit(2, 3))
    want = np.zeros((3, 3))
    want[0, 1] = 1
    assert np.array_equal(E, want)
    assert schatten_norm(E, math.inf) == pytest.approx(1.0, rel=1e-15)


def test_rank_one_operator_norm(rng):
    for _ in range(30):
        y, x = gaussian_cseq(rng, 5), gaussian_cseq(rng, 7)
        assert schatten_norm(rank_one(y, x), math.inf) == pytest.approx(lp_norm(y, 2) * lp_norm(x, 2), rel=1e-12)


def test_rank_one_acts_as_inner_product(rng):
    y, x, v = cmat(rng, 1, 4)[0], cmat(rng, 1, 4)[0], cmat(rng, 1, 4)[0]
    assert np.allclose(rank_one(y, x) @ v, np.vdot(x, v) * y, rtol=1e-13)


def test_left_multiplication_moves_inside(rng):
    for _ in range(100):
        f = cmat(rng, 5, 5)
        y, x = cmat(rng, 1, 5)[0], cmat(rng, 1, 5)[0]
        assert np.allclose(f @ rank_one(y, x), rank_one(f @ y, x), rtol=0, atol=1e-10)


def test_schmidt_reconstruction(rng):
    for shape in [(5, 5), (4, 6), (6, 3)]:
        M = cmat(rng, *shape)
        terms = schmidt_expansion(M)
        R = sum(s * rank_one(y, x) for s, x, y in terms)
        assert np.allclose(R, M, rtol=0, atol=1e-8)
        X = np.array([x for _, x, _ in terms])
        Y = np.array([y for _, _, y in terms])
        assert np.allclose(X.conj() @ X.T, np.eye(len(terms)), atol=1e-10)
        assert np.allclose(Y.conj() @ Y.T, np.eye(len(terms)), atol=1e-10)


def test_schmidt_drops_null_directions(rng):
    M = np.outer(cmat(rng, 1, 4)[0], cmat(rng, 1, 4)[0])
    assert len(schmidt_expansion(M)) == 1
    assert schmidt_expansion(np.zeros((3, 3))) == []


# file formats


def test_matrix_json_round_trip(rng):
    M = cmat(rng, 3, 4)
    back = matrix_from_json(json.dumps(matrix_to_json(M)))
    assert np.array_equal(back, M)
    with pytest.raises(ValueError):
        matrix_from_json({"rows": 2, "cols": 2, "re": [1, 2, 3]})


def test_parse_matrix(tmp_path):
    assert np.array_equal(parse_matrix("diag:3,4"), np.diag([3, 4]))
    assert np.array_equal(parse_matrix("eye:3"), np.eye(3))
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"rows": 1, "cols": 2, "re": [1, 2], "im": [0, 1]}))
    assert np.array_equal(parse_matrix(str(path)), np.array([[1, 2 + 1j]]))


def test_spectrum_csv():
    text = spectrum_csv([4.0, 3.0])
    assert text == "n,s_n\n1,4.0\n2,3.0\n"


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=4, max_size=4),
    st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=4, max_size=4),
)
def test_two_by_two_invariants(re, im):
    M = (np.array(re) + 1j * np.array(im)).reshape(2, 2)
    s = singular_values(M)
    scale = max(1.0, float(np.abs(M).max()))
    # s1^2 + s2^2 = ||M||_F^2 and s1 s2 = |det M|
    assert s[0] ** 2 + s[1] ** 2 == pytest.approx(float((np.abs(M) ** 2).sum()), rel=1e-12, abs=1e-24)
    assert s[0] * s[1] == pytest.approx(abs(np.linalg.det(M)), rel=1e-9, abs=1e-12 * scale**2)
