import math

import numpy as np
import pytest

from philyap.bench import convergence_slope
from philyap.densecore import NumericalError, relative_error
from philyap.integrators import (DREProblem, MDEProblem, SCHEMES, dre_rhs, exp_euler_step,
                                 integrate)
from philyap.oracle import dle_reference

R1, R2 = math.sqrt(2) - 1, -math.sqrt(2) - 1


def scalar_dre_exact(t, x0=1.0):
    # x' = -2x + 1 - x^2, roots R1 > R2
    w = (x0 - R1) / (x0 - R2) * math.exp(-(R1 - R2) * t)
    return (R1 - R2 * w) / (1 - w)


def tiny_dre():
    return DREProblem(-np.eye(2), np.eye(2), np.eye(2), np.eye(2))


def test_riccati_equilibrium():
    p = tiny_dre()
    assert np.allclose(dre_rhs(p, 0.0, R1 * np.eye(2)), 0.0, atol=1e-15)


@pytest.mark.parametrize("name, order", [("exp_euler", 1), ("exprb2", 2), ("exprb3", 3)])
def test_orders_on_scalar_riccati(name, order):
    p = tiny_dre()
    T = 1.0
    exact = scalar_dre_exact(T) * np.eye(2)
    steps = [8, 16, 32, 64]
    errs = [relative_error(exact, integrate(p, name, T / n, T, record=False).final)
            for n in steps]
    assert abs(convergence_slope(steps, errs) - order) < 0.25


def test_exp_euler_exact_for_constant_forcing(rng):
    A = rng.standard_normal((4, 4))
    Q = rng.standard_normal((4, 4))
    Q = Q + Q.T
    p = MDEProblem(A, lambda t, X: Q, np.zeros((4, 4)))
    X1 = exp_euler_step(p, 0.0, p.X0, 0.3)
    assert relative_error(dle_reference(A, Q, 1, 0.3), X1) < 1e-10


def test_integrate_records_and_shortens_last_step():
    p = tiny_dre()
    res = integrate(p, "exprb2", 0.3, 1.0)
    assert res.steps_taken == 4
    assert res.times[-1] == 1.0 and len(res.states) == 5
    assert res.times[-2] == pytest.approx(0.9)
    assert res.phi_calls == 4
    assert integrate(p, "exprb3", 0.5, 1.0).phi_calls == 4


def test_integrate_errors():
    p = tiny_dre()
    with pytest.raises(ValueError, match="zero steps"):
        integrate(p, "exprb2", 0.1, 0.0)
    with pytest.raises(ValueError):
        integrate(p, "rk4", 0.1, 1.0)
    with pytest.raises(TypeError):
        integrate(p.as_mde(), "exprb2", 0.1, 1.0)
    with pytest.raises(ValueError):
        DREProblem(np.eye(2), np.eye(2), np.eye(2), np.eye(3))


def test_blow_up_reports_step():
    p = MDEProblem(np.eye(2), lambda t, X: np.zeros((2, 2)), 1e308 * np.eye(2))
    with np.errstate(over="ignore"), pytest.raises(NumericalError, match="blow-up at step 1"):
        integrate(p, "exp_euler", 0.5, 1.0)


def test_schemes_registry():
    assert {s.order for s in SCHEMES.values()} == {1, 2, 3}
