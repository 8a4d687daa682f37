"""
Offsets of uncertainty regions and boundary tracing.

For reference observables ``A_1..A_n`` and a weight vector ``w`` the offset
``b_L(w)`` is the least value of ``w . eps`` over all error tuples ``eps``
attainable by marginals of a joint measurement, for ``L`` one of the three
error measures. Each offset is computed by a pair of mutually dual SDPs:
the ``inf`` side optimizes over joint measurements ``R`` and yields the
boundary point, the ``sup`` side certifies the value.
"""

import concurrent.futures
import dataclasses
import itertools

import numpy as np

from .errors import ErrorMeasure, cost_caps, err_cal, err_ent, err_max
from .numerics import NumericalError, ValidationError, eig_hermitian, psd_sqrt_inv, unembed
from .observables import JointMeasurement, Observable, marginal
from .sdp import NUMERICAL_FAILURE, OPTIMAL, SdpBuilder, solve
from .transport import CostFunction, scheme_family


@dataclasses.dataclass
class ProblemInstance:
    """Reference observables on a common space with one cost function each.

    Scheme families are enumerated on demand when not supplied.
    """

    observables: list
    costs: list
    scheme_families: list = None

    def __post_init__(self):
        if not self.observables:
            raise ValidationError("at least one observable is required")
        if len(self.costs) != len(self.observables):
            raise ValidationError("one cost function per observable is required")
        d = self.observables[0].dim
        for i, (A, c) in enumerate(zip(self.observables, self.costs)):
            if not isinstance(A, Observable) or not isinstance(c, CostFunction):
                raise ValidationError(f"entry {i}: expected an Observable and a CostFunction")
            if A.dim != d:
                raise ValidationError(f"observable {i} acts on dimension {A.dim}, expected {d}")
            if A.outcomes != d:
                raise ValidationError(f"observable {i} has {A.outcomes} outcomes, expected {d}")
            if c.shape != (d, d):
                raise ValidationError(f"cost {i} has shape {c.shape}, expected ({d}, {d})")
        if self.scheme_families is not None and len(self.scheme_families) != len(self.observables):
            raise ValidationError("one scheme family per observable is required")

    @property
    def n(self):
        return len(self.observables)

    @property
    def dim(self):
        return self.observables[0].dim

    def families(self):
        if self.scheme_families is None:
            self.scheme_families = [scheme_family(c) for c in self.costs]
        return self.scheme_families

    def require_projective(self):
        for i, A in enumerate(self.observables):
            if not A.projective:
                raise ValidationError(f"observable {i} is not projective")

    def caps(self, measure):
        measure = ErrorMeasure.parse(measure)
        k = 1 if measure is ErrorMeasure.E else 0
        return np.array([cost_caps(c, self.dim)[k] for c in self.costs])


@dataclasses.dataclass
class BoundaryPoint:
    """Supporting hyperplane ``w . eps >= b`` touching the region at ``epsilon``."""

    w: np.ndarray
    measure: str
    b: float
    epsilon: np.ndarray
    gap: float
    status: str
    joint: JointMeasurement = None
    residuals: dict = None


@dataclasses.dataclass
class RegionSample:
    measure: str
    points: list
    caps: np.ndarray


@dataclasses.dataclass
class SdpBuild:
    """An SDP together with the handles needed to read off its solution."""

    problem: object
    measure: str
    side: str
    tuples: list
    R: list = None
    scalars: dict = None


def _check_weights(instance, w):
    w = np.asarray(w, dtype=float)
    if w.shape != (instance.n,):
        raise ValidationError(f"expected {instance.n} weights, got shape {w.shape}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValidationError("weights must be finite and nonnegative")
    if w.sum() <= 0:
        raise ValidationError("weights must not all vanish")
    return w


def _active(w):
    return [i for i in range(len(w)) if w[i] > 0]


def _tuples(d, slots):
    return list(itertools.product(range(d), repeat=slots))


def _add_povm(bd, d, n):
    tuples = _tuples(d, n)
    R = [bd.hermitian(d) for _ in tuples]
    bd.matrix_equation(d, herm_terms=[(j, 1.0) for j in R], rhs=np.eye(d))
    return tuples, R


def build_sdp_M(instance, w):
    """Minimize ``sum_i w_i mu_i`` over joint measurements with ``mu_i`` bounding each scheme."""
    w = _check_weights(instance, w)
    d, n = instance.dim, instance.n
    fams = instance.families()
    bd = SdpBuilder("min")
    tuples, R = _add_povm(bd, d, n)
    mu = {}
    for i in _active(w):
        (mu[i],) = bd.free(1)
        bd.objective_scalar(mu[i], w[i])
        A = instance.observables[i].elements
        for s in fams[i]:
            S = bd.hermitian(d)
            terms = [(S, 1.0)] + [(R[t], float(s.phi[x[i]])) for t, x in enumerate(tuples)]
            bd.matrix_equation(
                d,
                herm_terms=terms,
                scalar_terms=[(mu[i], -np.eye(d))],
                rhs=np.einsum("y,yij->ij", s.psi, A),
            )
    return SdpBuild(bd.build(), "M", "inf", tuples, R, {"mu": mu})


def build_sdp_M_dual(instance, w):
    """Maximize ``tr C - sum tr[D_ia sum_y Psi_a(y) A_i(y)]`` with ``C`` below every tuple's mixture."""
    w = _check_weights(instance, w)
    d = instance.dim
    fams = instance.families()
    active = _active(w)
    bd = SdpBuilder("max")
    Cv = bd.free_hermitian(d)
    bd.objective_free_hermitian(Cv, np.eye(d))
    D = {}
    for i in active:
        A = instance.observables[i].elements
        for a, s in enumerate(fams[i]):
            D[i, a] = bd.hermitian(d)
            bd.objective_hermitian(D[i, a], np.einsum("y,yij->ij", s.psi, A), -1.0)
        bd.scalar_equation(herm_terms=[(D[i, a], np.eye(d), 1.0) for a in range(len(fams[i]))], rhs=w[i])
    tuples = _tuples(d, len(active))
    for x in tuples:
        T = bd.hermitian(d)
        terms = [(T, 1.0)]
        for k, i in enumerate(active):
            terms += [(D[i, a], -float(s.phi[x[k]])) for a, s in enumerate(fams[i])]
        bd.matrix_equation(d, herm_terms=terms, free_terms=[(Cv, 1.0)])
    return SdpBuild(bd.build(), "M", "sup", tuples)


def build_sdp_C(instance, w):
    """Maximize ``tr Y`` with ``Y`` below ``sum w_i lambda_iy c_i(x_i, y) A_i(y)`` for every tuple."""
    w = _check_weights(instance, w)
    instance.require_projective()
    d = instance.dim
    active = _active(w)
    bd = SdpBuilder("max")
    Y = bd.free_hermitian(d)
    bd.objective_free_hermitian(Y, np.eye(d))
    lam = {}
    for i in active:
        idx = bd.nonneg(d)
        for y in range(d):
            lam[i, y] = idx[y]
        bd.scalar_equation(scalar_terms=[(k, 1.0) for k in idx], rhs=1.0)
    tuples = _tuples(d, len(active))
    for x in tuples:
        T = bd.hermitian(d)
        scal = []
        for k, i in enumerate(active):
            A, c = instance.observables[i].elements, instance.costs[i].matrix
            scal += [(lam[i, y], -w[i] * c[x[k], y] * A[y]) for y in range(d) if c[x[k], y] != 0]
        bd.matrix_equation(d, herm_terms=[(T, 1.0)], scalar_terms=scal, free_terms=[(Y, 1.0)])
    return SdpBuild(bd.build(), "C", "sup", tuples, scalars={"lambda": lam})


def build_sdp_C_dual(instance, w):
    """Minimize ``sum w_i m_i`` over joint measurements with ``m_i`` bounding each eigenstate's cost."""
    w = _check_weights(instance, w)
    instance.require_projective()
    d, n = instance.dim, instance.n
    bd = SdpBuilder("min")
    tuples, R = _add_povm(bd, d, n)
    mvar = {}
    for i in _active(w):
        (mvar[i],) = bd.free(1)
        bd.objective_scalar(mvar[i], w[i])
        A, c = instance.observables[i].elements, instance.costs[i].matrix
        for y in range(d):
            (s,) = bd.nonneg(1)
            terms = [(R[t], A[y], -c[x[i], y]) for t, x in enumerate(tuples) if c[x[i], y] != 0]
            bd.scalar_equation(herm_terms=terms, scalar_terms=[(mvar[i], 1.0), (s, -1.0)])
    return SdpBuild(bd.build(), "C", "inf", tuples, R, {"m": mvar})


def build_sdp_E(instance, w):
    """Maximize ``tr Y / d`` with ``Y`` below ``sum_i w_i sum_y c_i(x_i, y) A_i(y)`` for every tuple."""
    w = _check_weights(instance, w)
    instance.require_projective()
    d = instance.dim
    active = _active(w)
    bd = SdpBuilder("max")
    Y = bd.free_hermitian(d)
    bd.objective_free_hermitian(Y, np.eye(d), 1.0 / d)
    tuples = _tuples(d, len(active))
    for x in tuples:
        T = bd.hermitian(d)
        rhs = np.zeros((d, d), dtype=complex)
        for k, i in enumerate(active):
            A, c = instance.observables[i].elements, instance.costs[i].matrix
            rhs += w[i] * np.einsum("y,yij->ij", c[x[k]], A)
        bd.matrix_equation(d, herm_terms=[(T, 1.0)], free_terms=[(Y, 1.0)], rhs=rhs)
    return SdpBuild(bd.build(), "E", "sup", tuples)


def build_sdp_E_dual(instance, w):
    """Minimize the weighted entangled reference errors of the marginals over joint measurements."""
    w = _check_weights(instance, w)
    instance.require_projective()
    d, n = instance.dim, instance.n
    bd = SdpBuilder("min")
    tuples, R = _add_povm(bd, d, n)
    for t, x in enumerate(tuples):
        F = np.zeros((d, d), dtype=complex)
        for i in _active(w):
            A, c = instance.observables[i].elements, instance.costs[i].matrix
            F += w[i] * np.einsum("y,yij->ij", c[x[i]], A)
        bd.objective_hermitian(R[t], F, 1.0 / d)
    return SdpBuild(bd.build(), "E", "inf", tuples, R)


BUILDERS = {
    ErrorMeasure.M: (build_sdp_M, build_sdp_M_dual),
    ErrorMeasure.C: (build_sdp_C_dual, build_sdp_C),
    ErrorMeasure.E: (build_sdp_E_dual, build_sdp_E),
}


def clean_joint(blocks, shape):
    """Nearest-valid joint measurement: clip negative eigenvalues, then renormalize."""
    d = blocks[0].shape[0]
    out = []
    for B in blocks:
        vals, V = eig_hermitian(0.5 * (B + B.conj().T))
        out.append((V * np.clip(vals, 0.0, None)) @ V.conj().T)
    out = np.array(out)
    T = psd_sqrt_inv(out.sum(axis=0))
    out = np.einsum("ij,kjl,lm->kim", T, out, T)
    out = 0.5 * (out + np.conj(np.swapaxes(out, 1, 2)))
    return JointMeasurement(out.reshape(tuple(shape) + (d, d)))


def _joint_from(build, solution, instance):
    blocks = [unembed(solution.X[j]) for j in build.R]
    return clean_joint(blocks, (instance.dim,) * instance.n)


def offset(instance, measure, w, tol=1e-8, max_iter=200, keep_joint=True):
    """Offset ``b_L(w)`` with a boundary point attaining it.

    The weights are normalized to the simplex for the solve and the offset
    is scaled back, so ``offset(t w) = t offset(w)``.

    Returns
    -------
    BoundaryPoint
        ``b`` is the value of the program over joint measurements, ``gap``
        the difference to the certifying program and ``epsilon`` the error
        tuple of the marginals of the optimal joint measurement.
    """
    measure = ErrorMeasure.parse(measure)
    w = _check_weights(instance, w)
    scale = float(w.sum())
    wn = w / scale
    inf_build, sup_build = (f(instance, wn) for f in BUILDERS[measure])
    s_inf = solve(inf_build.problem, tol=tol, max_iter=max_iter)
    s_sup = solve(sup_build.problem, tol=tol, max_iter=max_iter)
    statuses = {s_inf.status, s_sup.status}
    status = OPTIMAL if statuses == {OPTIMAL} else (statuses - {OPTIMAL}).pop()
    b = s_inf.objective_primal
    gap = abs(s_inf.objective_primal - s_sup.objective_primal)
    try:
        R = _joint_from(inf_build, s_inf, instance)
    except (NumericalError, ValidationError, np.linalg.LinAlgError):
        R = None
        status = NUMERICAL_FAILURE
    eps = np.full(instance.n, np.nan)
    if R is not None:
        margs = [marginal(R, i) for i in range(instance.n)]
        fams = instance.families() if measure is ErrorMeasure.M else None
        for i in range(instance.n):
            A, c = instance.observables[i], instance.costs[i]
            if measure is ErrorMeasure.M:
                pair = inf_build.scalars["mu"].get(i)
                eps[i] = s_inf.x[pair[0]] - s_inf.x[pair[1]] if pair else err_max(margs[i], A, c, fams[i])
            elif measure is ErrorMeasure.C:
                pair = inf_build.scalars["m"].get(i)
                eps[i] = s_inf.x[pair[0]] - s_inf.x[pair[1]] if pair else err_cal(margs[i], A, c)
            else:
                eps[i] = err_ent(margs[i], A, c)
    residuals = {"inf": s_inf.residuals, "sup": s_sup.residuals}
    return BoundaryPoint(
        w=w,
        measure=measure.value,
        b=b * scale,
        epsilon=eps,
        gap=gap * scale,
        status=status,
        joint=R if keep_joint else None,
        residuals=residuals,
    )


def marginal_errors(instance, measure, R):
    """Error tuple of the marginals of a joint measurement."""
    measure = ErrorMeasure.parse(measure)
    out = np.empty(instance.n)
    for i in range(instance.n):
        A, c, Ap = instance.observables[i], instance.costs[i], marginal(R, i)
        if measure is ErrorMeasure.M:
            out[i] = err_max(Ap, A, c, instance.families()[i])
        elif measure is ErrorMeasure.C:
            out[i] = err_cal(Ap, A, c)
        else:
            out[i] = err_ent(Ap, A, c)
    return out


def _halton(k, base):
    f, r = 1.0, 0.0
    while k > 0:
        f /= base
        r += f * (k % base)
        k //= base
    return r


def sample_weights(n, count):
    """Deterministic weight vectors on the simplex.

    ``n = 2``: uniform angles on the quarter circle, mapped to the simplex;
    ``n = 3``: Fibonacci lattice on the triangle; larger ``n``: Halton points
    pushed to the simplex by the exponential map.
    """
    if count < 1:
        raise ValidationError("sample count must be at least 1")
    if n == 1:
        return np.ones((count, 1))
    if n == 2:
        th = np.array([np.pi / 4]) if count == 1 else np.linspace(0.0, np.pi / 2, count)
        W = np.stack([np.cos(th), np.sin(th)], axis=1)
        W[np.abs(W) < 1e-15] = 0.0
        return W / W.sum(axis=1, keepdims=True)
    if n == 3:
        golden = (np.sqrt(5.0) - 1.0) / 2.0
        k = np.arange(count)
        u = (k + 0.5) / count
        v = np.mod(k * golden, 1.0)
        su = np.sqrt(u)
        return np.stack([1.0 - su, su * (1.0 - v), su * v], axis=1)
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    if n - 1 > len(primes):
        raise ValidationError(f"weight sampling supports at most {len(primes) + 1} observables")
    pts = np.array([[_halton(k + 1, p) for p in primes[:n]] for k in range(count)])
    E = -np.log(np.clip(pts, 1e-12, 1.0))
    return E / E.sum(axis=1, keepdims=True)


def trace_boundary(instance, measure, count=None, weights=None, threads=1, tol=1e-8, keep_joint=False):
    """Boundary points of the uncertainty region over sampled weight vectors.

    Failed solves are kept with their status. Results are ordered by sample
    index whatever the number of worker threads.
    """
    measure = ErrorMeasure.parse(measure)
    if weights is None:
        if count is None:
            count = 41 if instance.n == 2 else 200
        weights = sample_weights(instance.n, count)
    weights = [np.asarray(w, dtype=float) for w in weights]
    if measure is ErrorMeasure.M:
        instance.families()

    def run(w):
        try:
            return offset(instance, measure, w, tol=tol, keep_joint=keep_joint)
        except (NumericalError, np.linalg.LinAlgError):
            return BoundaryPoint(w, measure.value, np.nan, np.full(instance.n, np.nan), np.nan, NUMERICAL_FAILURE)

    if threads and threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            points = list(pool.map(run, weights))
    else:
        points = [run(w) for w in weights]
    return RegionSample(measure.value, points, instance.caps(measure))


def hyperplane_violations(points, tol=1e-7):
    """Pairs ``(i, j)`` where point ``j`` lies strictly below the supporting hyperplane of point ``i``."""
    good = [p for p in points if p.status == OPTIMAL]
    out = []
    for i, p in enumerate(good):
        wn = p.w / p.w.sum()
        bn = p.b / p.w.sum()
        for j, q in enumerate(good):
            if wn @ q.epsilon < bn - tol:
                out.append((i, j))
    return out
