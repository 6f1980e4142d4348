"""The 2x2 example where the maximal-angle bound is an equality.

A = diag(1, -1) has the isolated eigenvalue 1 at distance d = 2 from the
rest of its spectrum. The perturbation

    V = [[-x^2, x sqrt(1-x^2)], [x sqrt(1-x^2), x^2]]

has norm x and moves the eigenvalues to +-sqrt(1-x^2). The eigenvector for
the upper eigenvalue turns by exactly (1/2) arcsin x, which is the largest
angle allowed by the bound (1/2) arcsin(2||V||/d).
"""

import numpy as np

from spectral_angles import sharp_example

print(f"{'x':>5} {'theta':>12} {'arcsin(x)/2':>12} {'|diff|':>9} {'tan':>9} {'(1-c)/x':>9}")
for x in np.linspace(0.1, 0.9, 9):
    ex = sharp_example(x)
    q = ex.quantities
    print(
        f"{x:5.2f} {ex.theta:12.9f} {0.5 * np.arcsin(x):12.9f} {abs(ex.theta - 0.5 * np.arcsin(x)):9.1e} "
        f"{q['tan_theta']:9.6f} {q['tan_closed_form']:9.6f}"
    )

ex = sharp_example(0.6)
print("\nx = 0.6: spectrum of A + V", np.round(ex.quantities["spectrum"], 12))
print("perturbed spectral projection\n", np.round(np.array(ex.quantities["projection"]), 6))
print("largest residual against the closed forms:", f"{ex.max_residual:.1e}")
