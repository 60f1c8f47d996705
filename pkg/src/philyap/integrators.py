"""Matrix-valued exponential integrators for

    X'(t) = A X + X A^T + N(t, X),

built on the operator phi-function kernel. Three schemes are provided:
exponential Euler for a general nonlinearity, and the exponential Rosenbrock
schemes ``exprb2`` / ``exprb3`` for the differential Riccati equation

    X' = A X + X A^T + C C^T - X B B^T X.

For the Riccati right-hand side the Frechet derivative at a symmetric ``X``
is ``V -> (A - X B B^T) V + V (A - X B B^T)^T``, again a Lyapunov operator,
so the Rosenbrock schemes only ever need Lyapunov phi-functions.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .densecore import NumericalError, as_matrix
from .kernel import exp_apply, phi_lyap, phi_multi
from .lyapop import LyapunovOperator, apply, is_symmetric

__all__ = [
    "MDEProblem",
    "DREProblem",
    "IntegrationResult",
    "ExponentialScheme",
    "ExpEuler",
    "Exprb2",
    "Exprb3",
    "SCHEMES",
    "dre_rhs",
    "exp_euler_step",
    "exprb2_step",
    "exprb3_step",
    "integrate",
    "MAX_STEPS",
]

MAX_STEPS = 2**20


@dataclass
class MDEProblem:
    """``X' = A X + X A^T + N(t, X)``, ``X(t0) = X0``."""

    A: np.ndarray
    nonlinearity: Callable[[float, np.ndarray], np.ndarray]
    X0: np.ndarray
    t0: float = 0.0

    def __post_init__(self):
        self.A = as_matrix(self.A, square=True, name="A")
        self.X0 = as_matrix(self.X0, square=True, name="X0")
        if self.X0.shape != self.A.shape:
            raise ValueError("X0 and A must have the same shape")

    def N(self, t, X):
        out = np.asarray(self.nonlinearity(t, X), dtype=float)
        if out.shape != X.shape:
            raise ValueError(f"nonlinearity returned shape {out.shape}, expected {X.shape}")
        return out

    def rhs(self, t, X):
        return apply(LyapunovOperator(self.A), X) + self.N(t, X)


@dataclass
class DREProblem:
    """``X' = A X + X A^T + C C^T - X B B^T X``, ``X(t0) = X0``.

    `B` is ``N x p`` and `C` is ``N x q``.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    X0: np.ndarray
    t0: float = 0.0
    _G: np.ndarray = field(init=False, repr=False)
    _K: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.A = as_matrix(self.A, square=True, name="A")
        n = self.A.shape[0]
        self.B = as_matrix(np.reshape(self.B, (n, -1)), name="B")
        self.C = as_matrix(np.reshape(self.C, (n, -1)), name="C")
        self.X0 = as_matrix(self.X0, square=True, name="X0")
        if self.X0.shape != self.A.shape:
            raise ValueError("X0 and A must have the same shape")
        G = self.B @ self.B.T
        K = self.C @ self.C.T
        self._G = 0.5 * (G + G.T)
        self._K = 0.5 * (K + K.T)

    @property
    def BBt(self):
        return self._G

    @property
    def CCt(self):
        return self._K

    def quadratic(self, X):
        """``X B B^T X``."""
        if is_symmetric(X):
            W = X @ self.B
            return W @ W.T
        return X @ self._G @ X

    def N(self, t, X):
        return self._K - self.quadratic(X)

    def rhs(self, t, X):
        return dre_rhs(self, t, X)

    def jacobian_matrix(self, X):
        """Matrix ``A - X B B^T`` of the frozen Jacobian operator."""
        return self.A - X @ self._G

    def as_mde(self) -> MDEProblem:
        return MDEProblem(self.A, self.N, self.X0, self.t0)


def dre_rhs(p: DREProblem, t: float, X) -> np.ndarray:
    """``A X + X A^T + C C^T - X B B^T X``."""
    X = np.asarray(X, dtype=float)
    if X.shape != p.A.shape:
        raise ValueError(f"shape mismatch: {X.shape} vs {p.A.shape}")
    return apply(LyapunovOperator(p.A), X) + p.CCt - p.quadratic(X)


def _as_mde(problem):
    return problem.as_mde() if isinstance(problem, DREProblem) else problem


def exp_euler_step(problem, t: float, X, h: float) -> np.ndarray:
    """``X+ = e^{hL_A}[X] + h phi_1(hL_A)[N(t, X)]``.

    One kernel call; the exponential factor it returns is reused for the
    first term.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    problem = _as_mde(problem)
    res = phi_multi(h * problem.A, problem.N(t, X), 1, with_exp=True)
    return exp_apply(res.expm, X) + h * res[1]


def exprb2_step(problem: DREProblem, t: float, X, h: float) -> np.ndarray:
    """Exponential Rosenbrock-Euler: ``X+ = X + h phi_1(hL_{A_n})[F(X)]`` with
    ``A_n = A - X B B^T``."""
    if not h > 0:
        raise ValueError("h must be positive")
    An = problem.jacobian_matrix(X)
    F = dre_rhs(problem, t, X)
    return X + h * phi_multi(h * An, F, 1)[1]


def exprb3_step(problem: DREProblem, t: float, X, h: float) -> np.ndarray:
    """Third-order exponential Rosenbrock step.

    ``U = X + h phi_1(hJ)[F(X)]``, defect
    ``D = F(U) - F(X) - J[U - X]`` and ``X+ = U + 2h phi_3(hJ)[D]``, where
    ``J`` is the frozen Jacobian operator. ``D`` depends on the first stage,
    so this takes two kernel calls.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    An = problem.jacobian_matrix(X)
    F = dre_rhs(problem, t, X)
    U = X + h * phi_multi(h * An, F, 1)[1]
    D = dre_rhs(problem, t + h, U) - F - apply(LyapunovOperator(An), U - X)
    if not np.any(D):
        return U
    return U + 2.0 * h * phi_lyap(h * An, D, 3)[3]


class ExponentialScheme:
    """One-step exponential integrator.

    Instances of the exponential Runge-Kutta family
    ``X+ = e^{hL}[X] + h sum_i b_i(hL)[N_i]`` whose coefficients are
    combinations of phi-functions; subclasses supply :meth:`step`.
    """

    name = ""
    order = 0
    phi_calls_per_step = 1
    problem_type: type | tuple = MDEProblem

    def step(self, problem, t, X, h):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}()"


class ExpEuler(ExponentialScheme):
    name = "exp_euler"
    order = 1
    problem_type = (MDEProblem, DREProblem)

    def step(self, problem, t, X, h):
        return exp_euler_step(problem, t, X, h)


class Exprb2(ExponentialScheme):
    name = "exprb2"
    order = 2
    problem_type = DREProblem

    def step(self, problem, t, X, h):
        return exprb2_step(problem, t, X, h)


class Exprb3(ExponentialScheme):
    name = "exprb3"
    order = 3
    phi_calls_per_step = 2
    problem_type = DREProblem

    def step(self, problem, t, X, h):
        return exprb3_step(problem, t, X, h)


SCHEMES = {cls.name: cls() for cls in (ExpEuler, Exprb2, Exprb3)}


@dataclass
class IntegrationResult:
    times: list
    states: list
    steps_taken: int
    phi_calls: int

    @property
    def final(self):
        return self.states[-1]


def integrate(problem, scheme, h: float, t_end: float, *, record: bool = True) -> IntegrationResult:
    """Fixed-step integration from ``problem.t0`` to `t_end`.

    The last step is shortened if `h` does not divide the interval. With
    ``record=False`` only the initial and final states are kept.

    Raises
    ------
    ValueError
        If the interval is empty or needs more than ``MAX_STEPS`` steps.
    NumericalError
        ``"blow-up at step k"`` when a state becomes non-finite.
    """
    if isinstance(scheme, str):
        try:
            scheme = SCHEMES[scheme]
        except KeyError:
            raise ValueError(f"unknown scheme {scheme!r}") from None
    if not h > 0:
        raise ValueError("h must be positive")
    span = t_end - problem.t0
    if not span > 0:
        raise ValueError("zero steps requested: t_end must exceed t0")
    n_steps = max(1, math.ceil(span / h - 1e-9))
    if n_steps > MAX_STEPS:
        raise ValueError(f"{n_steps} steps exceeds the limit of {MAX_STEPS}")
    if not isinstance(problem, scheme.problem_type):
        raise TypeError(f"{scheme.name} cannot integrate a {type(problem).__name__}")

    t = problem.t0
    X = problem.X0
    times, states = [t], [X]
    for k in range(1, n_steps + 1):
        hk = h if k < n_steps else t_end - t
        X = scheme.step(problem, t, X, hk)
        t = problem.t0 + k * h if k < n_steps else t_end
        if not np.all(np.isfinite(X)):
            raise NumericalError(f"blow-up at step {k}")
        if record or k == n_steps:
            times.append(t)
            states.append(X)
    return IntegrationResult(times, states, n_steps, n_steps * scheme.phi_calls_per_step)
