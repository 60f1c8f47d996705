"""Choice of the Taylor degree and scaling exponent.

The thresholds ``theta_d`` bound the relative backward error of a degree-``d``
truncated exponential; they are derived offline by :func:`derive_theta` and
frozen into ``data/theta_table.txt``. At run time :func:`select_params` only
needs 1-norms of a few powers of ``A``.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import mpmath
import numpy as np

from .densecore import (DEFAULT_SEED, EXACT_NORM_THRESHOLD, as_matrix,
                        estimate_power_norm, one_norm)

__all__ = [
    "DEGREES",
    "P_MAX",
    "UNIT_ROUNDOFF",
    "ThetaTable",
    "PhiParams",
    "PowerNormLadder",
    "derive_theta",
    "theta_table",
    "ps_cost",
    "kernel_cost",
    "d_bound",
    "alpha_p",
    "forward_truncation_error",
    "select_params",
]

UNIT_ROUNDOFF = 2.0**-53
DEGREES = (6, 9, 12, 16, 20, 25)
P_MAX = 5
SERIES_TERMS = 250


# --------------------------------------------------------------------------
# theta derivation (offline)

def _backward_error_coeffs(d, terms, dps):
    """|c_k| for k = 0..terms of h_d(x) = log(e^{-x} T_d(x)), T_d the degree-d
    Taylor polynomial of exp."""
    with mpmath.workdps(dps):
        fact = [mpmath.mpf(1)]
        for k in range(1, terms + 1):
            fact.append(fact[-1] * k)
        # f = e^{-x} T_d(x) = 1 - e^{-x} * sum_{k>d} x^k/k!
        f = [mpmath.mpf(0)] * (terms + 1)
        f[0] = mpmath.mpf(1)
        for n in range(d + 1, terms + 1):
            acc = mpmath.mpf(0)
            for k in range(d + 1, n + 1):
                acc += (-1) ** (n - k) / (fact[k] * fact[n - k])
            f[n] = -acc
        # log of a power series with f[0] = 1: n g_n = n f_n - sum k g_k f_{n-k}
        g = [mpmath.mpf(0)] * (terms + 1)
        for n in range(1, terms + 1):
            acc = n * f[n]
            for k in range(d + 1, n):
                acc -= k * g[k] * f[n - k]
            g[n] = acc / n
        return [abs(c) for c in g]


def derive_theta(d: int, tol: float = UNIT_ROUNDOFF, *, terms: int = SERIES_TERMS,
                 dps: int = 60, rtol: float = 1e-6) -> float:
    """Largest ``theta`` with ``sum_{k>=d} |c_{k+1}| theta^k <= tol``.

    The coefficients ``c_k`` are those of the power series of
    ``log(e^{-x} T_d(x))`` (which starts at ``x^{d+1}``), computed with
    `dps` decimal digits and truncated after `terms` terms. The crossing is
    located by bisection to relative accuracy `rtol`.

    Raises
    ------
    ArithmeticError
        If no bracket is found or the bisection fails to converge.
    """
    if d < 2:
        raise ValueError("degree must be at least 2")
    if not tol > 0:
        raise ValueError("tol must be positive")
    coeffs = _backward_error_coeffs(d, terms, dps)
    with mpmath.workdps(dps):
        tail = coeffs[d + 1:]
        tol_mp = mpmath.mpf(tol)

        def hbar(x):
            x = mpmath.mpf(x)
            return sum(c * x ** (k + d) for k, c in enumerate(tail))

        lo, hi = 0.0, 1e-3
        while hbar(hi) <= tol_mp:
            lo, hi = hi, 2 * hi
            if hi > 1e3:
                raise ArithmeticError("no bracket for theta")
        for _ in range(200):
            if hi - lo <= rtol * hi:
                return float(lo)
            mid = 0.5 * (lo + hi)
            if hbar(mid) <= tol_mp:
                lo = mid
            else:
                hi = mid
    raise ArithmeticError("theta bisection did not converge")


@dataclass(frozen=True)
class ThetaTable:
    """Map from total degree to threshold, for a fixed tolerance."""

    entries: dict
    tolerance: float = UNIT_ROUNDOFF

    def __getitem__(self, d):
        return self.entries[d]

    def __contains__(self, d):
        return d in self.entries

    @classmethod
    def parse(cls, text, tolerance=UNIT_ROUNDOFF):
        entries = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            d, theta = line.split()
            entries[int(d)] = float(theta)
        return cls(entries, tolerance)

    def dump(self):
        lines = [f"# degree theta (tol = 2^-53)"]
        lines += [f"{d} {self.entries[d]:.6e}" for d in sorted(self.entries)]
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=1)
def theta_table() -> ThetaTable:
    text = resources.files("philyap").joinpath("data/theta_table.txt").read_text()
    return ThetaTable.parse(text)


# --------------------------------------------------------------------------
# cost model

def ps_cost(d: int) -> int:
    """Matrix products used by Paterson-Stockmeyer for a degree-d polynomial."""
    q = math.isqrt(d - 1) + 1 if d > 1 else 1
    return q + d // q - 2


def kernel_cost(m: int, l: int, s: int, *, symmetric: bool = True) -> int:
    """Products needed to evaluate ``phi_l`` with degree `m` and scaling `s`.

    For symmetric `Q` this is the closed form ``m`` (``s = 0``) or
    ``ps_cost(m+l) + m + l + 1 + (s-1)(2l+1)``. A nonsymmetric `Q` doubles
    the cost of every operator application.
    """
    per_apply = 1 if symmetric else 2
    if s == 0:
        return per_apply * m
    return (ps_cost(m + l) + per_apply * (m + l - 1) + 2
            + (s - 1) * (2 * l + 1))


# --------------------------------------------------------------------------
# norm surrogates

class PowerNormLadder:
    """Cached 1-norms ``||A^j||_1`` for one matrix.

    Exact for small matrices, otherwise estimated; ``||A^0|| = 1`` and
    ``||A^1||`` is always exact.
    """

    def __init__(self, A, *, seed=DEFAULT_SEED, exact_threshold=EXACT_NORM_THRESHOLD):
        self.A = as_matrix(A, square=True, name="A")
        self.seed = seed
        self.exact_threshold = exact_threshold
        self._norms = {0: 1.0, 1: one_norm(self.A)}

    def __getitem__(self, j):
        if j not in self._norms:
            est = estimate_power_norm(self.A, j, seed=self.seed,
                                      exact_threshold=self.exact_threshold)
            self._norms[j] = est.value
        return self._norms[j]


def _ladder(A, ladder):
    return ladder if ladder is not None else PowerNormLadder(A)


def _max_pair_product(ladder, k):
    return max(ladder[j] * ladder[k - j] for j in range(k + 1))


def d_bound(A, k: int, *, ladder: PowerNormLadder | None = None) -> float:
    """``2 max_j (||A^j|| ||A^{k-j}||)^{1/k}``, an upper bound on
    ``||L_A^k||^{1/k}`` in the 1-norm."""
    if k < 1:
        raise ValueError("k must be positive")
    ladder = _ladder(A, ladder)
    return 2.0 * _max_pair_product(ladder, k) ** (1.0 / k)


def alpha_p(A, p: int, *, ladder: PowerNormLadder | None = None,
            convention: str = "bound") -> float:
    """Surrogate for ``max(||L^p||^{1/p}, ||L^{p+1}||^{1/(p+1)})``.

    ``convention="bound"`` uses :func:`d_bound` for both powers, which is a
    genuine upper bound. ``convention="listing"`` takes roots of
    ``2 max_j ||A^j|| ||A^{p-j}||`` instead; it is smaller by a factor up to
    ``2^{1-1/p}`` and can undershoot the operator norm (e.g. ``A = cI``).
    For ``p = 1`` the first term is ``2 ||A||_1`` under both conventions.
    """
    if p < 1:
        raise ValueError("p must be positive")
    ladder = _ladder(A, ladder)
    if convention == "bound":
        return max(d_bound(A, p, ladder=ladder), d_bound(A, p + 1, ladder=ladder))
    if convention == "listing":
        def rooted(k):
            if k == 1:
                return 2.0 * ladder[1]
            return (2.0 * _max_pair_product(ladder, k)) ** (1.0 / k)
        return max(rooted(p), rooted(p + 1))
    raise ValueError(f"unknown convention {convention!r}")


@dataclass(frozen=True)
class PhiParams:
    """Selected degree and scaling with diagnostics."""

    m: int
    s: int
    l: int
    alpha_star: float
    theta: float
    p: int
    total_degree: int
    predicted_products: int


def forward_truncation_error(alpha: float, l: int, m: int, terms: int = 40) -> float:
    """Bound on the relative error of the degree-`m` truncation of ``phi_l``,
    ``l! sum_{k>m} alpha^k / (k+l)!``, for an operator with
    ``||L^k||^{1/k} <= alpha``."""
    if alpha == 0.0:
        return 0.0
    total = 0.0
    term = math.factorial(l) * math.exp((m + 1) * math.log(alpha)
                                        - math.lgamma(m + l + 2))
    for k in range(m + 1, m + 1 + terms):
        total += term
        term *= alpha / (k + l + 1)
    return total


def select_params(A, l: int, *, ladder: PowerNormLadder | None = None,
                  table: ThetaTable | None = None,
                  convention: str = "bound",
                  forward_check: bool = True) -> PhiParams:
    """Pick the smallest total degree ``m + l`` from ``DEGREES`` whose threshold
    covers the norm surrogate; fall back to degree 25 with scaling.

    ``alpha*`` at degree ``d`` is the minimum of ``alpha_p`` over
    ``p(p-1) <= d``. Degrees that would leave ``m < 1`` are skipped.

    The thresholds only control the backward error of the exponential. For
    large `l` and a small operator the first admissible degree can leave
    ``m`` so small that the truncation of ``phi_l`` itself is inaccurate
    (``l = 8`` gives ``m = 1`` at degree 9). With `forward_check` a degree is
    accepted without scaling only if :func:`forward_truncation_error` is also
    below the unit roundoff; ``forward_check=False`` reproduces the bare rule.
    """
    if l < 0:
        raise ValueError("l must be nonnegative")
    if l >= DEGREES[-1]:
        raise ValueError("degree set exhausted")
    A = as_matrix(A, square=True, name="A")
    table = table if table is not None else theta_table()
    ladder = _ladder(A, ladder)
    alphas = {p: alpha_p(A, p, ladder=ladder, convention=convention)
              for p in range(1, P_MAX + 1)}

    def best(d):
        ps = [p for p in alphas if p * (p - 1) <= d]
        p = min(ps, key=lambda q: (alphas[q], q))
        return alphas[p], p

    for d in DEGREES:
        m = d - l
        if m < 1:
            continue
        a_star, p = best(d)
        if a_star <= table[d] and (
                not forward_check
                or forward_truncation_error(a_star, l, m) <= table.tolerance):
            return PhiParams(m, 0, l, a_star, table[d], p, d, kernel_cost(m, l, 0))

    d = DEGREES[-1]
    m = d - l
    a_star, p = best(d)
    s = max(math.ceil(np.log2(a_star / table[d])), 0)
    return PhiParams(m, s, l, a_star, table[d], p, d, kernel_cost(m, l, s))
