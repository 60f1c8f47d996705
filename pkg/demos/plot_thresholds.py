"""
Where the truncation thresholds come from
=========================================

The degree-d truncation is accepted while the scaled operator norm stays
below a threshold theta_d. The threshold is the largest x for which the
backward-error series ``log(e^{-x} T_d(x))`` stays below the unit
roundoff. It is derived here in extended precision and compared with the
table the package ships.
"""

import numpy as np

from philyap import derive_theta, select_params, theta_table

table = theta_table()
for d in (6, 9, 12, 16, 20, 25):
    print(f"d={d:2d}  derived {derive_theta(d):.6e}  shipped {table[d]:.6e}")

###############################################################################
# A looser tolerance buys a larger threshold

for tol in (2.0**-53, 2.0**-24, 1e-4):
    print(f"tol={tol:.1e}  theta_16={derive_theta(16, tol):.4f}")

###############################################################################
# Parameter choice as the operator grows: cheap low degrees first, then
# degree 25 with an increasing number of halvings

for c in (1e-4, 1e-2, 0.1, 1.0, 10.0, 1e3):
    p = select_params(c * np.eye(4), 2)
    print(f"c={c:g}  m+l={p.total_degree:2d}  s={p.s:2d}  alpha*={p.alpha_star:.3g}")
