"""Dense matrix helpers: validation, norms, product counting and the
block 1-norm estimator for matrix powers.

Matrices are plain ``numpy.ndarray`` objects of dtype float64. Everything in
this module is a pure function of its inputs.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "NumericalError",
    "NormEstimate",
    "MatmulCounter",
    "as_matrix",
    "one_norm",
    "frobenius_norm",
    "relative_error",
    "estimate_power_norm",
    "EXACT_NORM_THRESHOLD",
    "DEFAULT_SEED",
]

EXACT_NORM_THRESHOLD = 64
DEFAULT_SEED = 42


class NumericalError(FloatingPointError):
    """Raised when a computation produces non-finite values."""


def as_matrix(M, *, square=False, name="matrix"):
    """Return `M` as a finite 2-D float64 array.

    Raises
    ------
    ValueError
        If `M` is not 2-D, has an empty dimension, is not square when
        `square` is set, or holds NaN/Inf.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite entries")
    return M


class MatmulCounter:
    """Call-local counter of matrix-matrix products.

    Every dense product performed by the kernel goes through :meth:`mm`, so
    ``count`` is the measured cost of a computation.
    """

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def mm(self, X, Y):
        self.count += 1
        return X @ Y

    def __repr__(self):
        return f"MatmulCounter(count={self.count})"


def one_norm(M) -> float:
    """Maximum absolute column sum."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(M), axis=0)))


def frobenius_norm(M) -> float:
    return float(np.sqrt(np.sum(np.square(np.asarray(M, dtype=float)))))


def relative_error(Y, Yhat) -> float:
    """Relative 1-norm error ``||Y - Yhat||_1 / ||Y||_1`` of `Yhat` against
    the reference `Y`."""
    Y = np.asarray(Y, dtype=float)
    Yhat = np.asarray(Yhat, dtype=float)
    if Y.shape != Yhat.shape:
        raise ValueError(f"shape mismatch: {Y.shape} vs {Yhat.shape}")
    ref = one_norm(Y)
    if ref == 0.0:
        raise ValueError("zero reference")
    return one_norm(Y - Yhat) / ref


@dataclass(frozen=True)
class NormEstimate:
    """Result of :func:`estimate_power_norm`.

    ``value`` is always a lower bound on the true norm. ``exact`` is set when
    the power was formed explicitly.
    """

    value: float
    exact: bool
    products_used: int


def _apply_power(A, X, k, transpose=False):
    B = A.T if transpose else A
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(k):
            X = B @ X
    if not np.all(np.isfinite(X)):
        raise NumericalError("norm overflow")
    return X


def _sign(Y):
    S = np.sign(Y)
    S[S == 0] = 1.0
    return S


def _parallel_columns(S, S_old):
    """Mask of columns of S parallel to some column of S or S_old."""
    n = S.shape[0]
    mask = np.zeros(S.shape[1], dtype=bool)
    for j in range(S.shape[1]):
        if S_old is not None and np.any(np.abs(S_old.T @ S[:, j]) == n):
            mask[j] = True
        elif j > 0 and np.any(np.abs(S[:, :j].T @ S[:, j]) == n):
            mask[j] = True
    return mask


def estimate_power_norm(A, k: int, *, t: int = 2, itmax: int = 5,
                        seed: int = DEFAULT_SEED,
                        exact_threshold: int = EXACT_NORM_THRESHOLD) -> NormEstimate:
    """Estimate ``||A^k||_1`` without forming ``A^k``.

    Below `exact_threshold` the power is formed and its norm returned exactly.
    Otherwise the block 1-norm estimator of Higham and Tisseur is run with
    `t` probe columns and at most `itmax` iterations, applying ``A`` (and
    ``A^T``) `k` times to each probe block. The probe signs come from a
    generator seeded with `seed`, so repeated calls agree.

    Raises
    ------
    NumericalError
        ``"norm overflow"`` if applying the power overflows; callers should
        pre-scale `A`.
    """
    A = as_matrix(A, square=True, name="A")
    if k < 1:
        raise ValueError("k must be a positive integer")
    n = A.shape[0]

    if n < exact_threshold:
        P = A
        with np.errstate(over="ignore", invalid="ignore"):
            for _ in range(k - 1):
                P = P @ A
        if not np.all(np.isfinite(P)):
            raise NumericalError("norm overflow")
        return NormEstimate(one_norm(P), True, k - 1)

    rng = np.random.default_rng(seed)
    t = min(t, n)
    products = 0

    X = np.ones((n, t))
    if t > 1:
        X[:, 1:] = rng.choice([-1.0, 1.0], size=(n, t - 1))
        for j in range(1, t):
            while np.any(np.abs(X[:, :j].T @ X[:, j]) == n):
                X[:, j] = rng.choice([-1.0, 1.0], size=n)
    X /= n

    est_old = 0.0
    S_old = None
    ind_hist: set[int] = set()
    ind_best = 0
    current_ind = None
    est = 0.0
    for it in range(1, itmax + 1):
        Y = _apply_power(A, X, k)
        products += k
        col_norms = np.sum(np.abs(Y), axis=0)
        j = int(np.argmax(col_norms))
        est = float(col_norms[j])
        if it >= 2 and est <= est_old:
            est = est_old
            break
        est_old = est
        if current_ind is not None:
            ind_best = current_ind[j]
        if it == itmax:
            break
        S = _sign(Y)
        if S_old is not None and np.all(_parallel_columns(S, S_old)):
            break
        if t > 1:
            mask = _parallel_columns(S, S_old)
            for col in np.flatnonzero(mask):
                S[:, col] = rng.choice([-1.0, 1.0], size=n)
        S_old = S
        Z = _apply_power(A, S, k, transpose=True)
        products += k
        h = np.max(np.abs(Z), axis=1)
        if it >= 2 and np.max(h) == h[ind_best]:
            break
        order = np.argsort(-h, kind="stable")
        fresh = [int(i) for i in order if int(i) not in ind_hist]
        if not fresh:
            break
        chosen = fresh[:t]
        current_ind = chosen
        X = np.zeros((n, len(chosen)))
        X[chosen, np.arange(len(chosen))] = 1.0
        ind_hist.update(chosen)

    return NormEstimate(est, False, products)
