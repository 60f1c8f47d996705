"""The Lyapunov operator ``L_A[X] = A X + X A^T`` and its truncated Taylor
polynomials.

Cost convention: applying the operator to a matrix that is exactly symmetric
takes one product, since ``X A^T = (A X)^T``; otherwise two. Symmetric inputs
therefore produce exactly symmetric outputs.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .densecore import MatmulCounter, as_matrix

__all__ = [
    "LyapunovOperator",
    "PhiStack",
    "is_symmetric",
    "check_symmetric",
    "apply",
    "apply_power",
    "taylor_apply",
    "phi_stack_down",
]

ASYMMETRY_WARN = 1e-12


def is_symmetric(X) -> bool:
    """Exact (bitwise) symmetry."""
    return X.shape[0] == X.shape[1] and np.array_equal(X, X.T)


def check_symmetric(Q, name="Q"):
    """Warn when `Q` is noticeably asymmetric; the algorithms accept any `Q`."""
    scale = np.max(np.abs(Q))
    if scale > 0 and np.max(np.abs(Q - Q.T)) > ASYMMETRY_WARN * scale:
        warnings.warn(f"{name} is not symmetric; proceeding anyway", stacklevel=3)


@dataclass(frozen=True)
class LyapunovOperator:
    """``X -> A X + X A^T`` for a square coefficient matrix ``A``."""

    A: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", as_matrix(self.A, square=True, name="A"))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def __call__(self, X, counter=None):
        return apply(self, X, counter)

    def scaled(self, c: float) -> "LyapunovOperator":
        return LyapunovOperator(c * self.A)


def _check_shape(L, X):
    if X.ndim != 2 or X.shape != L.A.shape:
        raise ValueError(f"shape mismatch: operator is {L.A.shape}, argument is {X.shape}")


def apply(L: LyapunovOperator, X, counter: MatmulCounter | None = None):
    """Return ``A X + X A^T``."""
    X = np.asarray(X, dtype=float)
    _check_shape(L, X)
    mm = counter.mm if counter is not None else np.matmul
    AX = mm(L.A, X)
    if is_symmetric(X):
        return AX + AX.T
    return AX + mm(X, L.A.T)


def apply_power(L: LyapunovOperator, X, k: int, counter=None):
    """k-fold composition ``L^k[X]``; ``k = 0`` returns `X` unchanged."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    X = np.asarray(X, dtype=float)
    _check_shape(L, X)
    for _ in range(k):
        X = apply(L, X, counter)
    return X


def _inv_factorials(n):
    # reciprocals 1/0!, ..., 1/n! built up in floating point
    out = np.empty(n + 1)
    out[0] = 1.0
    for k in range(1, n + 1):
        out[k] = out[k - 1] / k
    return out


def taylor_apply(L: LyapunovOperator, Q, l: int, m: int, counter=None):
    """Truncated series ``sum_{k=0}^{m} L^k[Q] / (k+l)!`` by Horner's rule.

    Uses `m` operator applications. A zero `Q` returns zero without any
    products.
    """
    if l < 0 or m < 1:
        raise ValueError("need l >= 0 and m >= 1")
    Q = np.asarray(Q, dtype=float)
    _check_shape(L, Q)
    coef = _inv_factorials(m + l)
    if not np.any(Q):
        return np.zeros_like(Q)
    T = coef[m + l] * Q
    for k in range(m - 1, -1, -1):
        T = apply(L, T, counter) + coef[k + l] * Q
    return T


@dataclass
class PhiStack:
    """Truncated-series values ``T_j`` for ``j = l, l-1, ..., 1``.

    ``values[j]`` is the degree ``m + l - j`` truncation of ``phi_j(L)[Q]``.
    """

    l: int
    m: int
    values: dict[int, np.ndarray] = field(default_factory=dict)

    def __getitem__(self, j):
        return self.values[j]

    def __len__(self):
        return len(self.values)


def phi_stack_down(L: LyapunovOperator, Q, l: int, T_l, m: int, counter=None) -> PhiStack:
    """Fill in ``T_{l-1}, ..., T_1`` from ``T_l`` by ``T_j = L[T_{j+1}] + Q/j!``.

    The returned stack always contains ``T_l`` itself; ``l = 1`` adds
    nothing below it.
    """
    if l < 1:
        raise ValueError("no lower indices")
    Q = np.asarray(Q, dtype=float)
    _check_shape(L, Q)
    stack = PhiStack(l=l, m=m, values={l: np.asarray(T_l, dtype=float)})
    if not np.any(Q):
        for j in range(l - 1, 0, -1):
            stack.values[j] = np.zeros_like(Q)
        return stack
    T = stack.values[l]
    for j in range(l - 1, 0, -1):
        T = apply(L, T, counter) + Q / math.factorial(j)
        stack.values[j] = T
    return stack
