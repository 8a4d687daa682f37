"""
POVMs, projective reference observables, joint measurements and states.

All operators are complex numpy arrays; an observable with ``m`` outcomes
on ``C^d`` stores its effects as an array of shape ``(m, d, d)``, a joint
measurement with outcome shape ``(m1, ..., mn)`` as ``(m1, ..., mn, d, d)``.
"""

import itertools

import numpy as np

from .numerics import ValidationError, as_hermitian, eig_hermitian, psd_sqrt_inv, random_unitary

POVM_ATOL = 1e-9


def _check_effects(effects, what):
    effects = np.asarray(effects, dtype=complex)
    d = effects.shape[-1]
    flat = effects.reshape(-1, d, d)
    herm = np.array([as_hermitian(E, atol=1e-10) for E in flat])
    for k, E in enumerate(herm):
        w = np.linalg.eigvalsh(E)
        if w[0] < -POVM_ATOL:
            raise ValidationError(f"{what} element {k} is not positive (min eigenvalue {w[0]:.3e})")
    total = herm.sum(axis=0)
    if np.max(np.abs(total - np.eye(d))) > POVM_ATOL:
        raise ValidationError(f"{what} elements do not sum to the identity")
    return herm.reshape(effects.shape)


class Observable:
    """A POVM with finitely many outcomes.

    Parameters
    ----------
    elements : array_like, shape (m, d, d)
        Positive effects summing to the identity.
    values : array_like, optional
        Real outcome labels (e.g. eigenvalues), one per outcome.
    name : str, optional
    """

    def __init__(self, elements, values=None, name=None):
        elements = np.asarray(elements, dtype=complex)
        if elements.ndim != 3 or elements.shape[1] != elements.shape[2]:
            raise ValidationError(f"observable elements must have shape (m, d, d), got {elements.shape}")
        self.elements = _check_effects(elements, "observable")
        self.elements.setflags(write=False)
        if values is not None:
            values = np.asarray(values, dtype=float)
            if values.shape != (elements.shape[0],):
                raise ValidationError("one outcome value per element is required")
            values.setflags(write=False)
        self.values = values
        self.name = name
        self.projective = self._detect_projective()

    def _detect_projective(self):
        m, d = self.outcomes, self.dim
        if m != d:
            return False
        for E in self.elements:
            if np.max(np.abs(E @ E - E)) > POVM_ATOL or abs(np.trace(E).real - 1.0) > POVM_ATOL:
                return False
        return True

    @property
    def dim(self):
        return self.elements.shape[1]

    @property
    def outcomes(self):
        return self.elements.shape[0]

    def __len__(self):
        return self.outcomes

    def __getitem__(self, x):
        return self.elements[x]

    def basis(self):
        """Unit vectors spanning the rank-one effects of a projective observable."""
        if not self.projective:
            raise ValidationError("observable is not projective")
        vecs = []
        for E in self.elements:
            w, V = eig_hermitian(E)
            vecs.append(V[:, -1])
        return np.array(vecs).T

    def mix(self, other, t):
        """Convex combination ``t * self + (1 - t) * other``."""
        return Observable(t * self.elements + (1 - t) * other.elements, self.values)

    def __repr__(self):
        tag = "projective " if self.projective else ""
        return f"<{tag}Observable d={self.dim} outcomes={self.outcomes} name={self.name!r}>"


class JointMeasurement:
    """POVM over outcome tuples ``(x_1, ..., x_n)``."""

    def __init__(self, elements):
        elements = np.asarray(elements, dtype=complex)
        if elements.ndim < 3 or elements.shape[-1] != elements.shape[-2]:
            raise ValidationError(f"joint measurement elements must have shape (*shape, d, d), got {elements.shape}")
        self.elements = _check_effects(elements, "joint measurement")
        self.elements.setflags(write=False)

    @property
    def dim(self):
        return self.elements.shape[-1]

    @property
    def shape(self):
        return self.elements.shape[:-2]

    @property
    def n(self):
        return len(self.shape)

    def tuples(self):
        return itertools.product(*(range(k) for k in self.shape))

    def __repr__(self):
        return f"<JointMeasurement d={self.dim} shape={self.shape}>"


class State:
    """Density operator: PSD with unit trace."""

    def __init__(self, matrix):
        rho = as_hermitian(matrix, atol=1e-10)
        w = np.linalg.eigvalsh(rho)
        if w[0] < -POVM_ATOL:
            raise ValidationError(f"state is not positive (min eigenvalue {w[0]:.3e})")
        if abs(np.trace(rho).real - 1.0) > 1e-10:
            raise ValidationError("state does not have unit trace")
        self.matrix = rho
        self.matrix.setflags(write=False)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, psi):
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))


def projective_from_basis(basis, values=None, name=None):
    """Projective observable with effects ``|phi_y><phi_y|`` for the columns of ``basis``.

    ``basis`` may also be given as a sequence of vectors.
    """
    B = np.asarray(basis, dtype=complex)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValidationError("basis must consist of d vectors of length d")
    if not isinstance(basis, np.ndarray):
        B = B.T
    if np.max(np.abs(B.conj().T @ B - np.eye(B.shape[0]))) > 1e-10:
        raise ValidationError("basis vectors are not orthonormal")
    effects = np.einsum("iy,jy->yij", B, B.conj())
    return Observable(effects, values=values, name=name)


def marginal(R, i):
    """Marginal observable of slot ``i``: sum of ``R`` over all other slots."""
    if not 0 <= i < R.n:
        raise ValidationError(f"slot {i} out of range for {R.n} slots")
    others = tuple(k for k in range(R.n) if k != i)
    return Observable(R.elements.sum(axis=others))


def marginals(R):
    return [marginal(R, i) for i in range(R.n)]


def outcome_distribution(rho, A):
    """Outcome probabilities ``tr(rho A(y))``."""
    M = rho.matrix if isinstance(rho, State) else np.asarray(rho)
    if M.shape[0] != A.dim:
        raise ValidationError(f"state dimension {M.shape[0]} does not match observable dimension {A.dim}")
    p = np.real(np.einsum("ij,yji->y", M, A.elements))
    return np.clip(p, 0.0, None) / max(np.sum(np.clip(p, 0.0, None)), 1e-300)


def spin_matrices(s=1):
    """Angular momentum matrices ``(L1, L2, L3)`` with ``L3 = diag(s, ..., -s)``."""
    m = np.arange(s, -s - 1, -1, dtype=float)
    d = m.size
    Lp = np.zeros((d, d))
    for k in range(1, d):
        Lp[k - 1, k] = np.sqrt(s * (s + 1) - m[k] * (m[k] + 1))
    L1 = 0.5 * (Lp + Lp.T)
    L2 = -0.5j * (Lp - Lp.T)
    L3 = np.diag(m)
    return L1.astype(complex), L2, L3.astype(complex)


def observable_from_hermitian(H, name=None):
    """Projective observable of the eigenbasis of a non-degenerate Hermitian matrix."""
    w, V = eig_hermitian(H)
    if np.min(np.diff(w)) < 1e-9:
        raise ValidationError("Hermitian matrix has a degenerate spectrum")
    return projective_from_basis(V, values=np.round(w, 12), name=name)


def spin1_triple():
    """Spin-1 angular momentum components ``L1, L2, L3`` with outcomes ``(-1, 0, 1)``."""
    return tuple(
        observable_from_hermitian(L, name=f"spin1_L{k}") for k, L in enumerate(spin_matrices(1), start=1)
    )


def fourier_pair(d):
    """Computational basis and discrete Fourier basis of ``C^d``."""
    if d < 2:
        raise ValidationError("Fourier pair needs d >= 2")
    j = np.arange(d)
    F = np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)
    position = projective_from_basis(np.eye(d, dtype=complex), values=np.arange(d), name="fourier_position")
    momentum = projective_from_basis(F, values=np.arange(d), name="fourier_momentum")
    return position, momentum


def random_psd(d, rng, rank=None):
    rank = d if rank is None else rank
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    return G @ G.conj().T


def normalize_effects(blocks):
    """Sandwich PSD blocks with ``S^(-1/2)``, ``S`` their sum, to obtain a POVM."""
    blocks = np.asarray(blocks, dtype=complex)
    d = blocks.shape[-1]
    flat = blocks.reshape(-1, d, d)
    T = psd_sqrt_inv(flat.sum(axis=0))
    out = np.einsum("ij,kjl,lm->kim", T, flat, T)
    out = 0.5 * (out + np.conj(np.swapaxes(out, -1, -2)))
    return out.reshape(blocks.shape)


def random_joint_measurement(d, shape, seed):
    """Deterministic random joint measurement for the given seed."""
    rng = np.random.default_rng(seed)
    shape = tuple(int(k) for k in shape)
    count = int(np.prod(shape))
    blocks = np.array([random_psd(d, rng) for _ in range(count)])
    return JointMeasurement(normalize_effects(blocks).reshape(shape + (d, d)))


def random_observable(d, m, rng, values=None):
    blocks = np.array([random_psd(d, rng) for _ in range(m)])
    return Observable(normalize_effects(blocks), values=values)


def random_projective(d, rng, values=None):
    return projective_from_basis(random_unitary(d, rng), values=values)


def random_state(d, rng, pure=False):
    if pure:
        psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        return State.pure(psi)
    rho = random_psd(d, rng)
    return State(rho / np.trace(rho).real)


def trivial_observable(d, m, x):
    """Constant observable that always outputs ``x``."""
    effects = np.zeros((m, d, d), dtype=complex)
    effects[x] = np.eye(d)
    return Observable(effects)
