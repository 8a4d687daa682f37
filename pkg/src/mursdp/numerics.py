"""
Dense linear algebra on small complex Hermitian matrices.

Matrices are plain numpy arrays. The helpers here validate Hermiticity,
diagonalize by cyclic Jacobi rotations and build the real symmetric
embedding used by the SDP core.
"""

import numpy as np


class ValidationError(ValueError):
    """Input data violates a structural invariant (shape, positivity, normalization)."""


class NumericalError(RuntimeError):
    """A numerical routine failed to reach its tolerance."""


HERMITIAN_ATOL = 1e-12


def as_hermitian(M, atol=HERMITIAN_ATOL):
    """Return ``(M + M^H) / 2`` after checking that ``M`` is Hermitian.

    The asymmetry is measured relative to the largest entry magnitude, so
    benign round-off from I/O is absorbed while genuinely non-Hermitian
    input is rejected.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {M.shape}")
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    asym = float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0
    if asym > atol * scale:
        raise ValidationError(f"matrix is not Hermitian (asymmetry {asym:.3e})")
    return 0.5 * (M + M.conj().T)


def _jacobi_sweeps(A, U, tol, max_sweeps):
    n = A.shape[0]
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return 0
    for sweep in range(1, max_sweeps + 1):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * scale:
            return sweep - 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                a = A[p, q]
                mag = abs(a)
                if mag <= 1e-300 or mag <= 1e-18 * scale:
                    A[p, q] = A[q, p] = 0.0
                    continue
                alpha = A[p, p].real
                beta = A[q, q].real
                theta = (beta - alpha) / (2.0 * mag)
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                phase = a / mag
                # columns: phase fix on q, then a real plane rotation
                V = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ V
                A[idx, :] = V.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                U[:, idx] = U[:, idx] @ V
    raise NumericalError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def eig_hermitian(M, tol=1e-14, max_sweeps=100):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    M : array_like, shape (d, d)
        Hermitian matrix (validated with :func:`as_hermitian`).
    tol : float
        Relative off-diagonal Frobenius norm at which the sweeps stop.

    Returns
    -------
    w : ndarray, shape (d,)
        Eigenvalues in ascending order.
    V : ndarray, shape (d, d)
        Unitary matrix whose columns are the matching eigenvectors.
    """
    A = as_hermitian(M).copy()
    d = A.shape[0]
    U = np.eye(d, dtype=complex)
    _jacobi_sweeps(A, U, tol, max_sweeps)
    w = np.real(np.diag(A))
    order = np.argsort(w, kind="stable")
    return w[order], U[:, order]


def eigvals_hermitian(M):
    return eig_hermitian(M)[0]


def lambda_max(M):
    """Largest eigenvalue of a Hermitian matrix."""
    return float(eig_hermitian(M)[0][-1])


def is_psd(M, tol=1e-9):
    """True iff the smallest eigenvalue of ``M`` is at least ``-tol``."""
    return bool(eig_hermitian(M)[0][0] >= -tol)


def real_embedding(M):
    """Real symmetric ``2d x 2d`` matrix ``[[Re M, -Im M], [Im M, Re M]]``."""
    M = as_hermitian(M)
    re, im = M.real, M.imag
    return np.block([[re, -im], [im, re]])


def embed(M):
    """Real embedding without the Hermiticity check (for trusted internal data)."""
    M = np.asarray(M, dtype=complex)
    re, im = M.real, M.imag
    return np.block([[re, -im], [im, re]])


def unembed(X):
    """Project a real symmetric ``2d x 2d`` matrix back to a complex ``d x d`` one.

    This averages over the two copies, so it is exact on embeddings and maps
    PSD matrices to PSD matrices.
    """
    X = np.asarray(X, dtype=float)
    d = X.shape[0] // 2
    a, b = X[:d, :d], X[:d, d:]
    c, e = X[d:, :d], X[d:, d:]
    return 0.5 * (a + e) + 0.5j * (c - b)


def psd_sqrt_inv(S):
    """Inverse square root of a positive definite Hermitian matrix."""
    w, V = eig_hermitian(S)
    if w[0] <= 0:
        raise NumericalError("matrix is not positive definite")
    return (V / np.sqrt(w)) @ V.conj().T


def random_hermitian(d, rng):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (G + G.conj().T)


def random_unitary(d, rng):
    """Haar-distributed unitary via QR with phase correction."""
    G = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(G)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph
