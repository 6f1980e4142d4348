"""A tour of the angle operator between two subspaces.

For orthogonal projections P and Q the closeness C = PQP + P'Q'P' and the
separation S = PQ'P + P'QP' add up to the identity, and Theta = arccos sqrt(C)
collects every canonical angle between Ran P and Ran Q at once. Reflecting P
in Ran Q (R = KPK with K = Q - Q') doubles the angles:
sin 2Theta(P, Q) = sin Theta(P, R).
"""

import numpy as np

from spectral_angles import closeness, direct_rotation, kpk_projection, operator_angle, separation, sin2_theta, sin_theta
from spectral_angles.angles import direct_rotation_residuals
from spectral_angles.linalg import op_norm

rng = np.random.default_rng(1)
n = 6


def subspace(k):
    z = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    q, _ = np.linalg.qr(z)
    return q @ q.conj().T


P = subspace(2)
Q = P.copy()
# tilt Q a little towards a random direction
h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
h = (h + h.conj().T) / 2
w, v = np.linalg.eigh(h)
U = (v * np.exp(0.15j * w)) @ v.conj().T
Q = U @ P @ U.conj().T

theta = operator_angle(P, Q)
print("eigenvalues of Theta (radians):", np.round(theta.eigenvalues, 6))
print("||C + S - I||         ", f"{op_norm(closeness(P, Q) + separation(P, Q) - np.eye(n)):.1e}")
print("||P - Q|| - sin||Theta||", f"{op_norm(P - Q) - np.sin(theta.norm):.1e}")

R = kpk_projection(P, Q)
print("||sin2Theta(P,Q) - sinTheta(P,KPK)||", f"{op_norm(sin2_theta(P, Q) - sin_theta(P, R)):.1e}")

D = direct_rotation(P, Q)
print("direct rotation residuals:", {k: f"{v:.1e}" for k, v in direct_rotation_residuals(P, Q, D).items()})
