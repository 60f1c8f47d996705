"""Deterministic test problems: scaled 1-D Laplacians, the 2-D
advection-diffusion matrix with its indicator load vectors, and a suite of
small structured matrices covering normal, nonnormal and defective cases.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GalleryCase",
    "random_symmetric",
    "laplacian_1d",
    "fdm_grid",
    "fdm_advection_diffusion",
    "load_vector_indicator",
    "structured_suite",
    "gallery_case",
    "CASE_NAMES",
]


@dataclass(frozen=True)
class GalleryCase:
    name: str
    A: np.ndarray
    Q: np.ndarray
    notes: str = ""

    @property
    def n(self):
        return self.A.shape[0]


def random_symmetric(n: int, seed) -> np.ndarray:
    """``(M + M^T)/2`` for ``M`` uniform on (-1, 1); exactly symmetric."""
    M = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(n, n))
    return 0.5 * (M + M.T)


def laplacian_1d(n: int, c: float = 1.0) -> np.ndarray:
    """``c * tridiag(1, -2, 1)`` of order `n`."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return c * (np.diag(np.full(n, -2.0)) + np.diag(np.ones(n - 1), 1)
                + np.diag(np.ones(n - 1), -1))


def fdm_grid(n0: int):
    """Node coordinates ``(x, y)`` of the interior ``n0 x n0`` grid on the
    unit square in lexicographic order (x varies fastest)."""
    h = 1.0 / (n0 + 1)
    i = np.arange(1, n0 + 1)
    x = np.tile(i * h, n0)
    y = np.repeat(i * h, n0)
    return x, y


def fdm_advection_diffusion(n0: int, *, parts: bool = False):
    """Finite differences for ``u_xx + u_yy - 10x u_x - 100y u_y`` on (0,1)^2
    with homogeneous Dirichlet conditions.

    5-point Laplacian plus centered first differences, mesh width
    ``1/(n0+1)``, lexicographic ordering. With `parts` the pair
    ``(diffusion, advection)`` is returned instead of their sum.
    """
    if n0 < 1:
        raise ValueError("n0 must be positive")
    h = 1.0 / (n0 + 1)
    N = n0 * n0
    x, y = fdm_grid(n0)
    D = np.zeros((N, N))
    V = np.zeros((N, N))
    for k in range(N):
        i, j = k % n0, k // n0
        D[k, k] = -4.0 / h**2
        for di, dj, coef in ((1, 0, -10.0 * x[k]), (-1, 0, 10.0 * x[k]),
                             (0, 1, -100.0 * y[k]), (0, -1, 100.0 * y[k])):
            ii, jj = i + di, j + dj
            if 0 <= ii < n0 and 0 <= jj < n0:
                kk = jj * n0 + ii
                D[k, kk] = 1.0 / h**2
                V[k, kk] = coef / (2.0 * h)
    if parts:
        return D, V
    return D + V


def load_vector_indicator(n0: int, axis: str, lo: float, hi: float) -> np.ndarray:
    """Column vector with ones at the grid nodes whose `axis` coordinate
    lies in ``(lo, hi]``."""
    if not 0.0 <= lo < hi <= 1.0:
        raise ValueError("need 0 <= lo < hi <= 1")
    x, y = fdm_grid(n0)
    coord = {"x": x, "y": y}[axis]
    return ((coord > lo) & (coord <= hi)).astype(float).reshape(-1, 1)


def _diag_spread(n, rng):
    mags = np.logspace(-3, 3, n)
    signs = np.where((mags < 1.0) & (np.arange(n) % 2 == 1), 1.0, -1.0)
    return np.diag(signs * mags)


def _jordan(n, rng):
    return 0.5 * np.eye(n) + np.diag(np.ones(n - 1), 1)


def _nilpotent(n, rng):
    return np.triu(rng.uniform(-1.0, 1.0, size=(n, n)), 1)


def _random_dense(n, rng):
    return rng.standard_normal((n, n)) / math.sqrt(n)


def _random_symmetric(n, rng):
    M = rng.standard_normal((n, n))
    return (M + M.T) / math.sqrt(2 * n)


def _random_skew(n, rng):
    M = rng.standard_normal((n, n))
    return (M - M.T) / math.sqrt(2 * n)


def _nonnormal_triangular(n, rng):
    return -np.diag(np.linspace(1.0, 4.0, n)) + 5.0 * np.triu(rng.uniform(-1.0, 1.0, (n, n)), 1)


def _defective_pairs(n, rng):
    A = np.zeros((n, n))
    lams = (-1.0, 0.5, -3.0, 0.0, -0.25)
    for b, k in enumerate(range(0, n - 1, 2)):
        lam = lams[b % len(lams)]
        A[k:k + 2, k:k + 2] = [[lam, 2.0], [0.0, lam]]
    if n % 2:
        A[-1, -1] = -2.0
    return A


def _laplacian(n, rng):
    return laplacian_1d(n, float((n + 1) ** 2))


def _advection_diffusion(n, rng):
    return fdm_advection_diffusion(math.isqrt(n - 1) + 1)


def _random_tiny(n, rng):
    return 1e-3 * rng.standard_normal((n, n))


def _random_large(n, rng):
    return -20.0 * np.eye(n) + 10.0 * rng.standard_normal((n, n)) / math.sqrt(n)


_BUILDERS = {
    "zero": (lambda n, rng: np.zeros((n, n)), "A = 0"),
    "identity": (lambda n, rng: np.eye(n), "A = I"),
    "diag_spread": (_diag_spread, "diagonal, |entries| from 1e-3 to 1e3"),
    "jordan": (_jordan, "single Jordan block, eigenvalue 0.5"),
    "nilpotent": (_nilpotent, "strictly upper triangular random"),
    "random_dense": (_random_dense, "Gaussian, scaled by 1/sqrt(n)"),
    "random_symmetric": (_random_symmetric, "symmetric Gaussian"),
    "random_skew": (_random_skew, "skew-symmetric Gaussian"),
    "nonnormal_triangular": (_nonnormal_triangular, "upper triangular, large off-diagonal"),
    "defective_pairs": (_defective_pairs, "2x2 defective blocks on the diagonal"),
    "laplacian": (_laplacian, "(n+1)^2 tridiag(1,-2,1)"),
    "advection_diffusion": (_advection_diffusion, "2-D advection-diffusion, n0 = ceil(sqrt(n))"),
    "random_tiny": (_random_tiny, "Gaussian scaled by 1e-3"),
    "random_stiff": (_random_large, "-20 I plus Gaussian of norm ~10"),
}

CASE_NAMES = tuple(_BUILDERS)


def gallery_case(name: str, n: int, seed: int = 42) -> GalleryCase:
    """One named case; identical ``(name, n, seed)`` give identical arrays."""
    if n < 2:
        raise ValueError("n must be at least 2")
    try:
        build, notes = _BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown gallery case {name!r}") from None
    idx = CASE_NAMES.index(name)
    A = build(n, np.random.default_rng([seed, idx, 0]))
    Q = random_symmetric(A.shape[0], [seed, idx, 1])
    return GalleryCase(name, A, Q, notes)


def structured_suite(n: int, seed: int = 42) -> list[GalleryCase]:
    """All gallery cases at size `n` (the advection-diffusion case has size
    ``ceil(sqrt(n))^2``)."""
    return [gallery_case(name, n, seed) for name in CASE_NAMES]
