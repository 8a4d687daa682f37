"""
Measurement error figures of an approximating observable against a reference.

Three measures are provided, all in units of the cost function:

* maximal error ``err_max``: worst transport cost over all input states,
  evaluated through the pricing-scheme family as a largest eigenvalue;
* calibration error ``err_cal``: worst cost over eigenstates of a
  projective reference;
* entangled reference error ``err_ent``: average cost on the maximally
  entangled state.

They are ordered ``err_max >= err_cal >= err_ent``.
"""

import enum

import numpy as np

from .numerics import ValidationError, eig_hermitian, lambda_max
from .observables import State, outcome_distribution, random_state
from .transport import CostFunction, SchemeFamily, scheme_family, transport_cost_primal


class ErrorMeasure(str, enum.Enum):
    M = "M"
    C = "C"
    E = "E"

    @classmethod
    def parse(cls, tag):
        if isinstance(tag, cls):
            return tag
        try:
            return cls(str(tag).upper())
        except ValueError:
            raise ValidationError(f"unknown error measure {tag!r}; expected one of M, C, E") from None


def _check_pair(Aprime, A, c):
    if Aprime.dim != A.dim:
        raise ValidationError(f"dimension mismatch: {Aprime.dim} vs {A.dim}")
    if c.shape != (Aprime.outcomes, A.outcomes):
        raise ValidationError(
            f"cost shape {c.shape} does not match outcome counts ({Aprime.outcomes}, {A.outcomes})"
        )


def _require_projective(A):
    if not A.projective:
        raise ValidationError("reference observable must be projective with rank-one effects")


def price_operator(Aprime, A, phi, psi):
    """``sum_x phi(x) A'(x) - sum_y psi(y) A(y)``."""
    return np.einsum("x,xij->ij", phi, Aprime.elements) - np.einsum("y,yij->ij", psi, A.elements)


def err_max(Aprime, A, c, family=None):
    """Maximal measurement error.

    Parameters
    ----------
    Aprime, A : Observable
        Approximating and reference observables. ``A`` need not be projective.
    c : CostFunction
    family : SchemeFamily, optional
        Pricing schemes of ``c``; enumerated when omitted.

    Returns
    -------
    float
        ``max_alpha lambda_max(sum_x Phi_alpha(x) A'(x) - sum_y Psi_alpha(y) A(y))``.
    """
    _check_pair(Aprime, A, c)
    if family is None:
        family = scheme_family(c)
    elif not isinstance(family, SchemeFamily) or family.cost.shape != c.shape:
        raise ValidationError("scheme family does not belong to this cost function")
    return max(lambda_max(price_operator(Aprime, A, s.phi, s.psi)) for s in family)


def calibration_profile(Aprime, A, c):
    """Cost per eigenstate of ``A``: ``sum_x <phi_y|A'(x)|phi_y> c(x, y)`` for each ``y``."""
    _check_pair(Aprime, A, c)
    _require_projective(A)
    B = A.basis()
    probs = np.real(np.einsum("iy,xij,jy->xy", B.conj(), Aprime.elements, B))
    return np.einsum("xy,xy->y", probs, c.matrix)


def err_cal(Aprime, A, c):
    """Calibration error: worst cost over the eigenstates of a projective ``A``."""
    return float(np.max(calibration_profile(Aprime, A, c)))


def err_ent(Aprime, A, c):
    """Entangled reference error ``sum_xy tr(A'(x) A(y)) c(x, y) / d``."""
    _check_pair(Aprime, A, c)
    _require_projective(A)
    overlaps = np.real(np.einsum("xij,yji->xy", Aprime.elements, A.elements))
    return float(np.sum(overlaps * c.matrix) / A.dim)


def error(measure, Aprime, A, c, family=None):
    """Dispatch on an :class:`ErrorMeasure` tag."""
    measure = ErrorMeasure.parse(measure)
    if measure is ErrorMeasure.M:
        return err_max(Aprime, A, c, family)
    if measure is ErrorMeasure.C:
        return err_cal(Aprime, A, c)
    return err_ent(Aprime, A, c)


def cost_caps(c, d):
    """Largest possible values of the errors for a square cost.

    Returns ``(c_star, c_bar_star)``: the maximal entry, which bounds the
    maximal and calibration errors, and ``max_y sum_x c(x, y) / d``, which
    bounds the entangled reference error.
    """
    if not c.is_square:
        raise ValidationError("cost caps need a square cost")
    M = c.matrix
    return float(M.max()), float(np.max(M.sum(axis=0)) / d)


def appleby_pointwise(rho, Aprime, A, values=None):
    """Per-state comparison between the Appleby deviation and the quadratic transport cost.

    With ``m``, ``v`` the mean and variance of ``rho A`` and ``v'`` the mean
    square deviation of ``rho A'`` from ``m``, returns
    ``((sqrt(v') - sqrt(v))**2, c_hat(rho A', rho A))`` for ``c(x, y) = (x - y)**2``.
    The first never exceeds the second.
    """
    if values is None:
        values = A.values if A.values is not None else Aprime.values
    if values is None:
        raise ValidationError("outcome values are required")
    values = np.asarray(values, dtype=float)
    if values.shape != (A.outcomes,) or Aprime.outcomes != A.outcomes:
        raise ValidationError("one outcome value per outcome is required")
    if not isinstance(rho, State):
        rho = State(rho)
    p = outcome_distribution(rho, Aprime)
    q = outcome_distribution(rho, A)
    m = float(q @ values)
    v = float(q @ (values - m) ** 2)
    vprime = float(p @ (values - m) ** 2)
    lhs = (np.sqrt(vprime) - np.sqrt(v)) ** 2
    cost = CostFunction.from_difference(lambda t: t * t, values, convex=True)
    rhs = transport_cost_primal(cost, p, q)[0]
    return float(lhs), float(rhs)


def sampled_err_max(Aprime, A, c, samples=1000, seed=0):
    """Lower estimate of the maximal error from Haar-random pure input states.

    This is not a certified value: it only ever underestimates ``err_max``.

    Returns
    -------
    best : float
        Largest sampled transport cost.
    state : State
        The state attaining it.
    """
    _check_pair(Aprime, A, c)
    rng = np.random.default_rng(seed)
    best, arg = -np.inf, None
    for _ in range(samples):
        rho = random_state(A.dim, rng, pure=True)
        val = transport_cost_primal(c, outcome_distribution(rho, Aprime), outcome_distribution(rho, A))[0]
        if val > best:
            best, arg = val, rho
    return float(best), arg


def worst_state(Aprime, A, c, family=None):
    """Eigenvector attaining ``err_max``, as a pure :class:`State`."""
    _check_pair(Aprime, A, c)
    family = scheme_family(c) if family is None else family
    best, vec = -np.inf, None
    for s in family:
        w, V = eig_hermitian(price_operator(Aprime, A, s.phi, s.psi))
        if w[-1] > best:
            best, vec = w[-1], V[:, -1]
    return State.pure(vec)

