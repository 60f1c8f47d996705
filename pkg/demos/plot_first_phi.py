"""
A first phi-function of the Lyapunov operator
==============================================

The operator ``L_A[X] = A X + X A^T`` acts on matrices. Its phi-functions
show up whenever a matrix differential equation is integrated with an
exponential method. Here we evaluate one directly and check it against the
vectorized reference, which treats the operator as the ``N^2 x N^2``
Kronecker sum.
"""

import math

import numpy as np

from philyap import gallery_case, phi_lyap, phi_multi, relative_error
from philyap.oracle import phi_reference

###############################################################################
# A small nonnormal test matrix and a symmetric right-hand side

case = gallery_case("nonnormal_triangular", 6, seed=42)
A, Q = case.A, case.Q
print(case.name, "-", case.notes)
print("||A||_1 =", np.abs(A).sum(axis=0).max())

###############################################################################
# One index at a time. The result carries the chosen truncation degree m,
# the number of halvings s and the measured number of matrix products.

for l in (1, 3, 6):
    res = phi_lyap(A, Q, l)
    err = relative_error(phi_reference(A, Q, l), res.top)
    print(f"l={l}  m={res.params.m:2d}  s={res.params.s}  "
          f"products={res.products_used:3d}  error={err:.2e}")

###############################################################################
# All indices in one pass, plus exp(A). The recursion
# phi_{j-1}(L)[Q] = L[phi_j(L)[Q]] + Q/(j-1)! links neighbouring indices.

multi = phi_multi(A, Q, 4, with_exp=True)
lhs = multi[2]
rhs = A @ multi[3] + multi[3] @ A.T + Q / math.factorial(2)
print("recursion residual:", relative_error(lhs, rhs))

###############################################################################
# For A = 0 everything collapses to the Taylor coefficient Q / l!

print(np.allclose(phi_lyap(np.zeros((6, 6)), Q, 3).top, Q / 6))
