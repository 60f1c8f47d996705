"""Brute-force references for ``phi_l(L_A)[Q]`` in vectorized form.

Under column-major vectorization ``vec(A X + X A^T) = (A (+) A) vec(X)`` with
the Kronecker sum ``A (+) A = A (x) I + I (x) A``, so the operator functions
become ordinary matrix functions of an ``N^2 x N^2`` matrix. Nothing here
uses the kernel's code paths: the exponential is a plain long Taylor sum with
aggressive scaling, and the ODE reference is an off-the-shelf Runge-Kutta
integration.

These routines scale like ``N^4`` in memory and ``N^6`` in time; do not run
several ``N = 64`` references at once.
"""

import math

import mpmath
import numpy as np
from scipy.integrate import solve_ivp

from .densecore import NumericalError, as_matrix

__all__ = [
    "MAX_ORACLE_N",
    "vec",
    "unvec",
    "kron_sum",
    "augmented_expm",
    "phi_reference",
    "phi_reference_all",
    "dle_reference",
    "scalar_phi",
    "phi_reference_spectral",
]

MAX_ORACLE_N = 64
TAYLOR_TERMS = 60


def vec(X):
    """Column-stacking vectorization."""
    return np.asarray(X, dtype=float).reshape(-1, order="F")


def unvec(x, n):
    return np.asarray(x, dtype=float).reshape((n, n), order="F")


def _guard(A, limit=MAX_ORACLE_N):
    A = as_matrix(A, square=True, name="A")
    if A.shape[0] > limit:
        raise ValueError("oracle scale exceeded")
    return A


def kron_sum(A):
    """Dense Kronecker sum ``A (x) I + I (x) A``."""
    A = _guard(A)
    eye = np.eye(A.shape[0])
    return np.kron(A, eye) + np.kron(eye, A)


def augmented_expm(M, terms=TAYLOR_TERMS):
    """exp(M) by a `terms`-term Taylor sum after scaling ``||M||_1 < 1/4``,
    followed by repeated squaring."""
    M = np.asarray(M, dtype=float)
    norm = np.max(np.sum(np.abs(M), axis=0))
    s = 0
    while norm / 2.0**s >= 0.25:
        s += 1
    Ms = M / 2.0**s
    n = M.shape[0]
    E = np.eye(n)
    term = np.eye(n)
    for k in range(1, terms + 1):
        term = term @ Ms / k
        E = E + term
    for _ in range(s):
        E = E @ E
    if not np.all(np.isfinite(E)):
        raise NumericalError("oracle exponential overflow")
    return E


def phi_reference_all(A, Q, l_max: int):
    """References for ``phi_j(L_A)[Q]``, ``j = 0..l_max``, from one exponential.

    The augmented matrix ``[[L, b e_1^T], [0, J]]``, with ``J`` the
    ``l_max x l_max`` nilpotent shift, has ``phi_j(L) b`` as column ``j`` of
    the top-right block of its exponential.
    """
    A = _guard(A)
    Q = as_matrix(Q, square=True, name="Q")
    if Q.shape != A.shape:
        raise ValueError("shape mismatch")
    n = A.shape[0]
    L = kron_sum(A)
    nn = n * n
    if l_max == 0:
        E = augmented_expm(L)
        return {0: unvec(E @ vec(Q), n)}
    b = vec(Q)
    # phi_j(L) b is linear in b; a unit coupling column keeps the scaling honest
    beta = np.max(np.abs(b))
    if beta == 0.0:
        return {j: np.zeros_like(Q) for j in range(l_max + 1)}
    W = np.zeros((nn + l_max, nn + l_max))
    W[:nn, :nn] = L
    W[:nn, nn] = b / beta
    for i in range(l_max - 1):
        W[nn + i, nn + i + 1] = 1.0
    E = augmented_expm(W)
    out = {j: beta * unvec(E[:nn, nn + j - 1], n) for j in range(1, l_max + 1)}
    out[0] = unvec(E[:nn, :nn] @ b, n)
    return out


def phi_reference(A, Q, l: int):
    """Reference ``phi_l(L_A)[Q]`` via the Kronecker sum."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    return phi_reference_all(A, Q, l)[l]


def dle_reference(A, Q, l: int, t: float, *, atol=None, rtol=1e-13):
    """Solution at time `t` of ``X' = A X + X A^T + s^{l-1}/(l-1)! Q``,
    ``X(0) = 0``, integrated in vectorized form by Dormand-Prince RK45.

    Equals ``t^l phi_l(t L_A)[Q]``. The default `atol` is tied to the size
    of the forcing, ``1e-6 rtol max|Q| t^l / l!``; a fixed absolute
    tolerance is too loose for large `l` on stiff operators, where the
    solution is many orders below ``max|Q|``.
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    if not t > 0:
        raise ValueError("t must be positive")
    A = _guard(A)
    Q = as_matrix(Q, square=True, name="Q")
    n = A.shape[0]
    L = kron_sum(A)
    b = vec(Q)
    c = 1.0 / math.factorial(l - 1)
    if atol is None:
        scale = np.max(np.abs(b)) * t**l / math.factorial(l)
        atol = 1e-6 * rtol * scale if scale > 0 else 1e-300

    def rhs(tau, x):
        return L @ x + (c * tau ** (l - 1)) * b

    sol = solve_ivp(rhs, (0.0, t), np.zeros(n * n), method="RK45",
                    atol=atol, rtol=rtol)
    if not sol.success:
        raise NumericalError(f"stiff beyond oracle: {sol.message}")
    return unvec(sol.y[:, -1], n)


def scalar_phi(z, l: int, dps: int = 50) -> float:
    """``phi_l(z)`` for real `z` evaluated in extended precision."""
    with mpmath.workdps(dps):
        z = mpmath.mpf(z)
        if abs(z) < 0.5:
            acc = mpmath.mpf(0)
            term = mpmath.mpf(1) / mpmath.factorial(l)
            for k in range(80):
                acc += term
                term = term * z / (k + l + 1)
            return float(acc)
        poly = sum(z**j / mpmath.factorial(j) for j in range(l))
        return float((mpmath.exp(z) - poly) / z**l)


def phi_reference_spectral(A, Q, l: int):
    """Reference for symmetric `A` through its eigendecomposition.

    With ``A = V diag(lam) V^T`` the vectorized operator is diagonalized by
    ``V (x) V``, so ``phi_l(L_A)[Q] = V (F * (V^T Q V)) V^T`` where
    ``F_ij = phi_l(lam_i + lam_j)`` is evaluated in extended precision.
    Usable beyond the Kronecker size limit.
    """
    A = as_matrix(A, square=True, name="A")
    Q = as_matrix(Q, square=True, name="Q")
    if not np.array_equal(A, A.T):
        raise ValueError("spectral reference needs symmetric A")
    lam, V = np.linalg.eigh(A)
    sums = lam[:, None] + lam[None, :]
    cache = {}
    F = np.empty_like(sums)
    for idx, z in np.ndenumerate(sums):
        if z not in cache:
            cache[z] = scalar_phi(z, l)
        F[idx] = cache[z]
    return V @ (F * (V.T @ Q @ V)) @ V.T
