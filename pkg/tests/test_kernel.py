import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from philyap.densecore import MatmulCounter, NumericalError, relative_error
from philyap.kernel import exp_apply, exp_taylor_ps, phi_lyap, phi_multi, phi_scaled
from philyap.oracle import phi_reference
from philyap.params import DEGREES, kernel_cost, ps_cost

from conftest import sym

A2 = np.array([[-1.0, 2.0], [0.0, -3.0]])
Q2 = np.array([[2.0, 1.0], [1.0, 1.0]])

# (1,1), (1,2), (2,2) entries of phi_l(L_A2)[Q2], from a 50-digit evaluation
FROZEN = {
    1: (1.3462309721010914, 0.32458863925174397, 0.16625354130388894),
    2: (0.80354793743960083, 0.23833171174507326, 0.13895774311601851),
    5: (0.015463797536854966, 0.0057435455229621934, 0.0039863067448332476),
}
# phi_3 for 40 * [[0.5, 1], [-1, 0.25]], which needs s = 6
FROZEN_SCALED = (666597049.27115614, -64811261.470592284, 635940669.37024201)


def _entries(X):
    return np.array([X[0, 0], X[0, 1], X[1, 1]])


@pytest.mark.parametrize("l", sorted(FROZEN))
def test_frozen_small_case(l):
    got = phi_lyap(A2, Q2, l).top
    np.testing.assert_allclose(_entries(got), FROZEN[l], rtol=5e-15)


def test_frozen_scaled_case():
    A = 40.0 * np.array([[0.5, 1.0], [-1.0, 0.25]])
    res = phi_lyap(A, Q2, 3)
    assert res.params.s == 6
    np.testing.assert_allclose(_entries(res.top), FROZEN_SCALED, rtol=1e-14)
    assert res.products_used == res.predicted_products == kernel_cost(res.params.m, 3, 6)


def test_zero_matrix_gives_taylor_coefficient(rng):
    Q = sym(rng.standard_normal((6, 6)))
    for l in (1, 3, 7):
        assert np.allclose(phi_lyap(np.zeros((6, 6)), Q, l).top, Q / math.factorial(l),
                           rtol=0, atol=1e-16)


def test_scalar_matrix_closed_form():
    c = -0.7
    Q = np.array([[1.0, 0.5], [0.5, 2.0]])
    z = 2 * c
    phi2 = (math.exp(z) - 1 - z) / z**2
    np.testing.assert_allclose(phi_lyap(c * np.eye(2), Q, 2).top, phi2 * Q, rtol=1e-14)


@pytest.mark.parametrize("d", DEGREES)
def test_paterson_stockmeyer_accuracy_and_cost(d, rng):
    A = 0.1 * rng.standard_normal((5, 5))
    c = MatmulCounter()
    P = exp_taylor_ps(A, d, c)
    want = sum(np.linalg.matrix_power(A, k) / math.factorial(k) for k in range(d + 1))
    np.testing.assert_allclose(P, want, rtol=1e-14, atol=1e-16)
    assert c.count == ps_cost(d)


def test_ps_rejects_other_degrees():
    with pytest.raises(ValueError):
        exp_taylor_ps(np.eye(2), 7)


def test_multi_matches_single(rng):
    A = gallery_like(rng)
    Q = sym(rng.standard_normal((5, 5)))
    multi = phi_multi(A, Q, 4)
    assert sorted(multi.values) == [1, 2, 3, 4]
    for j in (1, 2, 3, 4):
        assert relative_error(phi_lyap(A, Q, j).top, multi[j]) < 1e-13


def gallery_like(rng):
    return 3.0 * rng.standard_normal((5, 5))


def test_multi_costs_are_predicted(rng):
    for scale in (0.01, 5.0):
        A = scale * rng.standard_normal((4, 4))
        Q = sym(rng.standard_normal((4, 4)))
        for with_exp in (False, True):
            r = phi_multi(A, Q, 3, with_exp=with_exp)
            assert r.products_used == r.predicted_products


def test_exponential_output(rng):
    A = 2.0 * rng.standard_normal((4, 4))
    Q = sym(rng.standard_normal((4, 4)))
    r = phi_multi(A, Q, 2, with_exp=True)
    from scipy.linalg import expm
    np.testing.assert_allclose(r.expm, expm(A), rtol=1e-12)
    r0 = phi_multi(A, Q, 0)
    assert relative_error(exp_apply(expm(A), Q), r0[0]) < 1e-12


def test_nonsymmetric_q_costs_double(rng):
    A = 0.01 * rng.standard_normal((4, 4))
    Q = rng.standard_normal((4, 4))
    with pytest.warns(UserWarning):
        r = phi_lyap(A, Q, 2)
    assert r.products_used == kernel_cost(r.params.m, 2, r.params.s, symmetric=False)
    assert relative_error(phi_reference(A, Q, 2), r.top) < 1e-13


def test_scaled_time(rng):
    A = rng.standard_normal((3, 3))
    Q = sym(rng.standard_normal((3, 3)))
    r = phi_scaled(A, Q, 2, 0.5)
    assert relative_error(phi_lyap(0.5 * A, Q, 2).top, r[2]) < 1e-14
    with pytest.raises(ValueError):
        phi_scaled(A, Q, 2, 0.0)


def test_errors():
    with pytest.raises(ValueError):
        phi_lyap(np.eye(2), np.eye(2), 0)
    with pytest.raises(ValueError, match="shape"):
        phi_lyap(np.eye(2), np.eye(3), 1)
    with pytest.raises(NumericalError, match="overflow"):
        phi_lyap(np.array([[400.0, 0.0], [0.0, 400.0]]), np.eye(2), 1)


def test_symmetric_q_gives_exactly_symmetric_output(rng):
    A = 4.0 * rng.standard_normal((6, 6))
    Q = sym(rng.standard_normal((6, 6)))
    for l in (1, 5):
        X = phi_lyap(A, Q, l).top
        assert np.array_equal(X, X.T)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.integers(1, 8), st.floats(-3, 2), st.integers(0, 2**31 - 1))
def test_kernel_agrees_with_oracle(n, l, log_scale, seed):
    g = np.random.default_rng(seed)
    A = 10.0**log_scale * g.standard_normal((n, n))
    Q = sym(g.uniform(-1, 1, (n, n)))
    assert relative_error(phi_reference(A, Q, l), phi_lyap(A, Q, l).top) < 1e-10
