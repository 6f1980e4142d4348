"""Seeded random test instances with a prescribed spectral gap."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSplit
from .linalg import SpectralDecomposition, herm, hermitian_eig, op_norm
from .spectral import Interval, SpectralSet, haar_unitary, set_distance


@dataclass(frozen=True)
class RandomInstance:
    """Unperturbed ``A``, perturbation ``V`` and the isolated part ``sigma`` of ``spec(A)``.

    ``sigma_eigenvalues`` and ``Sigma_eigenvalues`` are the two components of
    the spectrum of ``A``; ``d`` is their distance.
    """

    A: np.ndarray
    V: np.ndarray
    sigma: SpectralSet
    d: float
    seed: int
    sigma_eigenvalues: np.ndarray
    Sigma_eigenvalues: np.ndarray

    @property
    def dim(self):
        return self.A.shape[0]

    @property
    def vnorm(self):
        return op_norm(self.V)


def random_hermitian(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return herm(g)


def _layout(n_small, n_big, d, rng):
    """Place two labelled groups of eigenvalues on the line at distance exactly ``d``.

    The components are interleaved in up to two blocks each, so in general
    neither component lies outside the convex hull of the other.
    """
    max_blocks = 2
    k0 = int(rng.integers(1, min(n_small, max_blocks) + 1))
    k1_choices = [k for k in (k0 - 1, k0, k0 + 1) if 1 <= k <= min(n_big, max_blocks)]
    k1 = int(rng.choice(k1_choices))
    if k0 > k1:
        first = 0
    elif k1 > k0:
        first = 1
    else:
        first = int(rng.integers(0, 2))
    labels = [(first + i) % 2 for i in range(k0 + k1)]

    def partition(total, parts):
        cuts = np.sort(rng.choice(np.arange(1, total), size=parts - 1, replace=False)) if parts > 1 else []
        edges = [0, *cuts, total]
        return [int(edges[i + 1] - edges[i]) for i in range(parts)]

    sizes = {0: partition(n_small, k0), 1: partition(n_big, k1)}
    values, tags, blocks = [], [], []
    x = 0.0
    for b, lab in enumerate(labels):
        if b > 0:
            x += d if b == 1 else d * (1.0 + 0.5 * rng.random())
        size = sizes[lab].pop(0)
        start = x
        for j in range(size):
            if j > 0:
                x += d * rng.random()
            values.append(x)
            tags.append(lab)
        blocks.append((lab, start, x))
    values = np.array(values)
    shift = 0.5 * (values.min() + values.max())
    values -= shift
    blocks = [(lab, lo - shift, hi - shift) for lab, lo, hi in blocks]
    return values, np.array(tags), blocks


def generate_instance(dim, split, d, vnorm, seed, spectrum=None):
    """Random Hermitian ``A`` with ``spec(A) = sigma ∪ Sigma`` and ``dist = d``.

    Parameters
    ----------
    dim : int
        Matrix size, equal to ``split[0] + split[1]``.
    split : tuple of int
        Number of eigenvalues in ``sigma`` and ``Sigma``.
    d : float
        Distance between the two components.
    vnorm : float
        Operator norm of the random Hermitian perturbation ``V``.
    seed : int
        Everything is a deterministic function of the arguments.
    spectrum : tuple of array_like, optional
        Force the eigenvalues of ``sigma`` and ``Sigma`` instead of
        drawing them. `d` is then recomputed from them.
    """
    n0, n1 = (int(s) for s in split)
    if n0 < 1 or n1 < 1 or n0 + n1 != dim:
        raise InvalidSplit(f"split {split} does not partition dimension {dim} into two non-empty parts")
    if not d > 0:
        raise InvalidSplit("gap d must be positive")
    if vnorm < 0:
        raise InvalidSplit("perturbation norm must be non-negative")
    rng = np.random.default_rng(seed)

    if spectrum is None:
        values, tags, blocks = _layout(n0, n1, float(d), rng)
        sigma = SpectralSet(
            tuple(_padded(lo, hi, d) for lab, lo, hi in blocks if lab == 0)
        )
    else:
        lo_vals = np.asarray(spectrum[0], dtype=float).ravel()
        hi_vals = np.asarray(spectrum[1], dtype=float).ravel()
        if len(lo_vals) != n0 or len(hi_vals) != n1:
            raise InvalidSplit("forced spectrum does not match split")
        values = np.concatenate([lo_vals, hi_vals])
        tags = np.array([0] * n0 + [1] * n1)
        sigma = SpectralSet.points(lo_vals)

    basis = np.array(hermitian_eig(random_hermitian(dim, rng)).eigenvectors)
    perm = rng.permutation(dim)
    basis = basis[:, perm]
    A = herm((basis * values) @ basis.conj().T)

    if vnorm == 0:
        V = np.zeros((dim, dim), dtype=np.complex128)
    else:
        G = random_hermitian(dim, rng)
        V = herm(G * (vnorm / op_norm(G)))

    s_vals = np.sort(values[tags == 0])
    S_vals = np.sort(values[tags == 1])
    return RandomInstance(A, V, sigma, set_distance(s_vals, S_vals), int(seed), s_vals, S_vals)


def _padded(lo, hi, d):
    return Interval(lo - d / 4.0, hi + d / 4.0)


def degenerate_variant(inst, multiplicity=2, seed=None):
    """Modify ``V`` so that ``A + V`` has an eigenvalue of the given multiplicity.

    A run of `multiplicity` adjacent eigenvalues of ``A + V`` is collapsed
    to its mean. The norm of ``V`` changes slightly; the returned instance
    carries the modified ``V``.
    """
    rng = np.random.default_rng(seed)
    dec = hermitian_eig(inst.A + inst.V)
    n = dec.dim
    multiplicity = min(multiplicity, n)
    start = int(rng.integers(0, n - multiplicity + 1))
    lam = np.array(dec.eigenvalues)
    block = slice(start, start + multiplicity)
    lam[block] = lam[block].mean()
    vecs = dec.eigenvectors
    B = herm((vecs * lam) @ vecs.conj().T)
    return RandomInstance(
        inst.A, herm(B - inst.A), inst.sigma, inst.d, inst.seed, inst.sigma_eigenvalues, inst.Sigma_eigenvalues
    )


def decomposition_from(values, vectors):
    """Build a :class:`SpectralDecomposition` from known eigenpairs."""
    order = np.argsort(values, kind="stable")
    return SpectralDecomposition(np.asarray(values)[order].copy(), np.array(vectors)[:, order])


@dataclass(frozen=True)
class NormalInstance:
    """Normal ``A`` with complex spectrum split at distance ``d`` and a perturbation ``V``.

    ``A + V`` is normal too, with eigenvectors ``basis_perturbed``; the first
    ``len(sigma_eigenvalues)`` of them continue the ``sigma`` eigenvectors of
    ``A``, so they span a reducing subspace of ``A + V``.
    """

    A: np.ndarray
    V: np.ndarray
    sigma: SpectralSet
    d: float
    seed: int
    sigma_eigenvalues: np.ndarray
    Sigma_eigenvalues: np.ndarray
    basis_perturbed: np.ndarray

    @property
    def dim(self):
        return self.A.shape[0]

    @property
    def vnorm(self):
        return op_norm(self.V)

    def reducing_projection(self, columns):
        b = self.basis_perturbed[:, list(columns)]
        return herm(b @ b.conj().T)


def _complex_layout(n0, n1, rng):
    lo = rng.standard_normal(n0) + 1j * rng.standard_normal(n0)
    lo *= 0.5
    shift = rng.standard_normal() + 1j * rng.standard_normal()
    shift *= 3.0 / abs(shift)
    hi = shift + rng.standard_normal(n1) + 1j * rng.standard_normal(n1)
    return lo, hi


def generate_normal_instance(dim, split, d, vnorm, seed):
    """Random normal ``A`` and normal ``A + V`` with ``||V||`` close to `vnorm`.

    ``A = U diag(z) U^*``. The perturbed matrix rotates ``U`` by
    ``exp(i s H)`` and moves each eigenvalue by ``s`` times a random complex
    offset; the scale ``s`` is tuned by a few secant steps so that
    ``||V|| = vnorm`` to about ``1e-6`` relative. ``V`` is in general not
    Hermitian.
    """
    n0, n1 = (int(s) for s in split)
    if n0 < 1 or n1 < 1 or n0 + n1 != dim:
        raise InvalidSplit(f"split {split} does not partition dimension {dim} into two non-empty parts")
    if not d > 0 or vnorm < 0:
        raise InvalidSplit("need d > 0 and vnorm >= 0")
    rng = np.random.default_rng(seed)
    for _ in range(100):
        lo, hi = _complex_layout(n0, n1, rng)
        gap = set_distance(lo, hi)
        if gap > 1e-3:
            break
    scale = d / gap
    lo, hi = lo * scale, hi * scale
    z = np.concatenate([lo, hi])

    U = haar_unitary(dim, rng)
    A = (U * z) @ U.conj().T
    H = random_hermitian(dim, rng)
    Hdec = hermitian_eig(H / op_norm(H))
    offsets = (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) / np.sqrt(2.0)

    def perturbed(s):
        rot = (Hdec.eigenvectors * np.exp(1j * s * Hdec.eigenvalues)) @ Hdec.eigenvectors.conj().T
        W = rot @ U
        return W, (W * (z + s * offsets)) @ W.conj().T

    if vnorm == 0:
        W, B = U, A
    else:
        s = vnorm / (2.0 * op_norm(A) + 1.0)
        for _ in range(8):
            W, B = perturbed(s)
            got = op_norm(B - A)
            if abs(got - vnorm) <= 1e-6 * vnorm:
                break
            s *= vnorm / got
    sigma = SpectralSet.disks_around(lo, 0.0)
    return NormalInstance(A, B - A, sigma, float(set_distance(lo, hi)), int(seed), lo, hi, W)
