"""
Exponential integrators for a Riccati equation
==============================================

``X' = A X + X A^T + C C^T - X B B^T X`` with ``X(0) = I`` on a small
advection-diffusion grid. Exponential Euler treats the quadratic term
explicitly. The Rosenbrock schemes freeze the Jacobian ``A - X B B^T``,
which is again a Lyapunov operator, so every stage is a phi-function call.

The grid here is 6 x 6 to keep the run short; the acceptance suite uses
10 x 10.
"""

import numpy as np

from philyap import integrate, relative_error
from philyap.bench import convergence_slope, dre_problem

problem = dre_problem(n0=6)
t_end = 0.05
reference = integrate(problem, "exprb3", t_end / 4096, t_end, record=False).final

steps = [8, 16, 32, 64, 128]
for scheme in ("exp_euler", "exprb2", "exprb3"):
    errs = [relative_error(reference, integrate(problem, scheme, t_end / n, t_end,
                                                record=False).final) for n in steps]
    print(f"{scheme:9s}", " ".join(f"{e:.1e}" for e in errs),
          f" slope {convergence_slope(steps, errs):.2f}")

###############################################################################
# The solution stays symmetric positive semidefinite

X = integrate(problem, "exprb3", t_end / 64, t_end, record=False).final
print("symmetric:", np.array_equal(X, X.T), " min eigenvalue:", np.linalg.eigvalsh(X).min())
