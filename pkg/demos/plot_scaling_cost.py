"""
Scaling, squaring and what it costs
===================================

A stiff operator needs many halvings before its truncated Taylor series is
accurate. We take the scaled 1-D Laplacian ``2500 tridiag(1, -2, 1)`` of
order 100, whose Kronecker sum is far too large for the brute-force
reference, and compare with the eigendecomposition-based reference instead.

The product counter is checked against the closed-form cost
``m`` (no scaling) or ``pi(m+l) + m + l + 1 + (s-1)(2l+1)``, where ``pi(d)``
is the Paterson-Stockmeyer cost of a degree-d polynomial.
"""

import time

from philyap import laplacian_1d, phi_lyap, ps_cost, random_symmetric, relative_error
from philyap.oracle import phi_reference_spectral

A = laplacian_1d(100, 2500.0)
Q = random_symmetric(100, 42)

print(" l   m   s  products  closed form  error      time")
for l in range(1, 9):
    t0 = time.perf_counter()
    res = phi_lyap(A, Q, l)
    dt = time.perf_counter() - t0
    m, s = res.params.m, res.params.s
    closed = m if s == 0 else ps_cost(m + l) + m + l + 1 + (s - 1) * (2 * l + 1)
    err = relative_error(phi_reference_spectral(A, Q, l), res.top)
    print(f"{l:2d}  {m:2d}  {s:2d}  {res.products_used:8d}  {closed:11d}  {err:.2e}  {dt:.4f}s")

###############################################################################
# Halving the operator norm removes one squaring level

for c in (2500.0, 1250.0, 625.0):
    print(c, phi_lyap(laplacian_1d(100, c), Q, 2).params.s)
