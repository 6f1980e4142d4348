"""Solving Y B0 - B1 Y = T by spectral division and by a time integral.

When the spectra of B0 and B1 are at distance d, the solution is
Y = int e^{itB1} T e^{-itB0} f(t) dt for any integrable f whose Fourier
transform equals 1/lambda off (-d, d). The default kernel interpolates
1/lambda linearly inside (-d, d); its L1 norm is within 0.4% of the
optimal pi/(2d), which gives ||Y|| <= (pi/2) ||T|| / d.
"""

import numpy as np

from spectral_angles import SylvesterProblem, default_kernel, solve_integral, solve_spectral
from spectral_angles.linalg import op_norm
from spectral_angles.sylvester import bound_ratio, forward_transform, residual

rng = np.random.default_rng(0)
B0 = np.diag([-1.0, 0.0, 3.0])
B1 = np.diag([1.0, 2.0])
T = rng.standard_normal((2, 3))
p = SylvesterProblem.create(B0, B1, T)

Y = solve_spectral(p)
Yi = solve_integral(p)
print("d =", p.d)
print("spectral residual", f"{residual(p, Y):.1e}", " ||Y|| d / ||T|| =", f"{bound_ratio(p, Y):.4f}")
print("integral vs spectral", f"{op_norm(Yi - Y) / op_norm(Y):.1e}")

k = default_kernel(1.0)
lam = np.array([1.0, 2.0, -4.0, 10.0])
print("L1 norm of kernel", f"{k.l1_norm:.5f}", "vs pi/2 =", f"{np.pi / 2:.5f}")
print("transform - 1/lambda", np.abs(forward_transform(k, lam) - 1 / lam))
