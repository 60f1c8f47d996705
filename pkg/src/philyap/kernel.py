"""Evaluation of ``phi_l(L_A)[Q]`` by scaling, truncated Taylor series and
modified squaring.

The operator is scaled by ``2^-s``, the truncated series ``T_l`` is formed by
Horner's rule and the lower indices by the downward recursion. The scaling is
then undone with the doubling relation

    T_k(2L)[Q] = 2^-k (E T_k(L)[Q] E^T + sum_{j=1}^{k} T_j(L)[Q] / (k-j)!),

where ``E`` is the matrix exponential at the current scale, so the operator
exponential never has to be formed. ``E`` starts as the Paterson-Stockmeyer
evaluation of the degree ``m + l`` Taylor polynomial of ``2^-s A`` and is
squared once per level.

Product counting: ``E X E^T`` is two products, ``E E`` one, and an operator
application one or two (see :mod:`philyap.lyapop`).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .densecore import MatmulCounter, NumericalError, as_matrix
from .lyapop import (LyapunovOperator, check_symmetric, is_symmetric,
                     phi_stack_down, taylor_apply)
from .params import DEGREES, PhiParams, kernel_cost, ps_cost, select_params

__all__ = ["PhiResult", "exp_taylor_ps", "exp_apply", "phi_lyap", "phi_multi", "phi_scaled"]


@dataclass
class PhiResult:
    """Computed ``phi_j(L_A)[Q]`` keyed by ``j``.

    ``expm`` holds ``exp(A)`` at full scale when it was requested.
    ``products_used`` is the measured number of matrix products and
    ``predicted_products`` the cost model's figure for the same call.
    """

    values: dict[int, np.ndarray]
    params: PhiParams
    products_used: int
    predicted_products: int
    expm: np.ndarray | None = field(default=None, repr=False)

    def __getitem__(self, j):
        return self.values[j]

    @property
    def top(self):
        return self.values[max(self.values)]


def exp_taylor_ps(A_tilde, d: int, counter: MatmulCounter | None = None):
    """Degree-`d` Taylor polynomial of ``exp`` at `A_tilde` by Paterson-Stockmeyer.

    Uses ``ceil(sqrt(d)) + d // ceil(sqrt(d)) - 2`` products. Only the
    degrees in ``DEGREES`` are accepted; they are exact multiples of the
    block size, which is what the product count relies on.
    """
    if d not in DEGREES:
        raise ValueError(f"degree {d} not in {DEGREES}")
    A_tilde = as_matrix(A_tilde, square=True, name="A_tilde")
    mm = counter.mm if counter is not None else np.matmul
    n = A_tilde.shape[0]
    q = math.isqrt(d - 1) + 1
    r = d // q
    coef = [1.0 / math.factorial(k) for k in range(d + 1)]

    powers = [np.eye(n), A_tilde]
    for _ in range(2, q + 1):
        powers.append(mm(powers[-1], A_tilde))

    def block(i):
        B = coef[i * q] * powers[0]
        for j in range(1, q):
            B = B + coef[i * q + j] * powers[j]
        return B

    # top block is the scalar c_d, so the first Horner step is free
    Y = coef[d] * powers[q] + block(r - 1)
    for i in range(r - 2, -1, -1):
        Y = mm(Y, powers[q]) + block(i)
    return Y


def _sandwich(E, X, counter):
    R = counter.mm(counter.mm(E, X), E.T)
    if is_symmetric(X):
        R = 0.5 * (R + R.T)
    return R


def exp_apply(E, X, counter: MatmulCounter | None = None):
    """``E X E^T``, i.e. the operator exponential applied to `X` when
    ``E = exp(A)``. Exactly symmetric output for exactly symmetric `X`."""
    return _sandwich(E, np.asarray(X, dtype=float),
                     counter if counter is not None else MatmulCounter())


def _double(E, T, k, counter):
    """Value of ``T_k`` at twice the current scale."""
    acc = _sandwich(E, T[k], counter)
    for j in range(1, k + 1):
        acc = acc + T[j] / math.factorial(k - j)
    return acc / 2.0**k


def _check_finite(X, what):
    if not np.all(np.isfinite(X)):
        raise NumericalError(what)


def _prepare(A, Q):
    A = as_matrix(A, square=True, name="A")
    Q = as_matrix(Q, square=True, name="Q")
    if A.shape != Q.shape:
        raise ValueError(f"shape mismatch: A is {A.shape}, Q is {Q.shape}")
    check_symmetric(Q)
    return A, Q


def _multi_cost(p: PhiParams, l, sym, with_exp, top_only):
    per = 1 if sym else 2
    d, m, s = p.total_degree, p.m, p.s
    if l == 0:
        return ps_cost(d) + s + 2
    if top_only:
        cost = kernel_cost(m, l, s, symmetric=sym)
    elif s == 0:
        cost = per * (m + l - 1)
    else:
        cost = ps_cost(d) + per * (m + l - 1) + (s - 1) * (2 * l + 1) + 2 * l
    if with_exp:
        cost += ps_cost(d) if s == 0 else 1
    return cost


def _run(A, Q, l, *, top_only, with_exp):
    # overflow is detected explicitly and raised as NumericalError
    with np.errstate(over="ignore", invalid="ignore"):
        return _evaluate(A, Q, l, top_only=top_only, with_exp=with_exp)


def _evaluate(A, Q, l, *, top_only, with_exp):
    A, Q = _prepare(A, Q)
    params = select_params(A, l)
    m, s, d = params.m, params.s, params.total_degree
    counter = MatmulCounter()
    sym = is_symmetric(Q)
    A_t = np.ldexp(A, -s)

    def full_exp(E):
        for _ in range(s):
            E = counter.mm(E, E)
            _check_finite(E, "overflow during squaring")
        return E

    if l == 0:
        E = full_exp(exp_taylor_ps(A_t, d, counter))
        X = _sandwich(E, Q, counter)
        _check_finite(X, "overflow during squaring")
        return PhiResult({0: X}, params, counter.count,
                         _multi_cost(params, 0, sym, False, True),
                         E if with_exp else None)

    if not np.any(Q):
        zeros = {k: np.zeros_like(Q) for k in ([l] if top_only else range(1, l + 1))}
        E = None
        if with_exp:
            E = full_exp(exp_taylor_ps(A_t, d, counter))
        return PhiResult(zeros, params, counter.count, counter.count, E)

    L = LyapunovOperator(A_t)
    T_l = taylor_apply(L, Q, l, m, counter)
    _check_finite(T_l, "overflow in Taylor evaluation")
    predicted = _multi_cost(params, l, sym, with_exp, top_only)

    if s == 0:
        if top_only:
            values = {l: T_l}
        else:
            values = dict(sorted(phi_stack_down(L, Q, l, T_l, m, counter).values.items()))
        E = exp_taylor_ps(A_t, d, counter) if with_exp else None
        return PhiResult(values, params, counter.count, predicted, E)

    T = phi_stack_down(L, Q, l, T_l, m, counter).values
    E = exp_taylor_ps(A_t, d, counter)
    for _ in range(1, s):
        T = {k: _double(E, T, k, counter) for k in range(1, l + 1)}
        E = counter.mm(E, E)
        _check_finite(E, "overflow during squaring")
        _check_finite(T[l], "overflow during squaring")

    ks = [l] if top_only else range(1, l + 1)
    values = {k: _double(E, T, k, counter) for k in ks}
    for X in values.values():
        _check_finite(X, "overflow during squaring")
    if with_exp:
        E = counter.mm(E, E)
        _check_finite(E, "overflow during squaring")
    return PhiResult(values, params, counter.count, predicted, E if with_exp else None)


def phi_lyap(A, Q, l: int) -> PhiResult:
    """Compute ``phi_l(L_A)[Q]`` for ``l >= 1``.

    Only index `l` is formed at full scale. For symmetric `Q` the number of
    products is ``m`` when no scaling is needed and
    ``ps_cost(m+l) + m + l + 1 + (s-1)(2l+1)`` otherwise.

    Raises
    ------
    NumericalError
        If an intermediate overflows.
    """
    if l < 1:
        raise ValueError("l must be at least 1; use phi_multi(..., 0) for the exponential")
    return _run(A, Q, l, top_only=True, with_exp=False)


def phi_multi(A, Q, l_max: int, *, with_exp: bool = False) -> PhiResult:
    """Compute ``phi_k(L_A)[Q]`` for all ``k = 1..l_max`` in one pass.

    Parameters are selected for index `l_max`. ``l_max = 0`` returns
    ``exp(A) Q exp(A)^T`` under key 0. With `with_exp` the full-scale
    ``exp(A)`` is attached to the result (one extra product when scaled).
    """
    if l_max < 0:
        raise ValueError("l_max must be nonnegative")
    return _run(A, Q, l_max, top_only=False, with_exp=with_exp)


def phi_scaled(A, Q, l: int, t: float, *, with_exp: bool = False) -> PhiResult:
    """``phi_multi`` for the time-scaled operator ``L_{tA}``."""
    if not t > 0:
        raise ValueError("t must be positive")
    return phi_multi(t * np.asarray(A, dtype=float), Q, l, with_exp=with_exp)
