"""
Dense primal-dual interior-point solver for small semidefinite programs.

The core works on the real standard form

    minimize    sum_j <C_j, X_j> + c_lin . x
    subject to  sum_j <A_kj, X_j> + (A_lin x)_k = b_k,   k = 1..m
                X_j symmetric PSD,  x >= 0

with dual

    maximize    b . y
    subject to  Z_j = C_j - sum_k y_k A_kj  PSD,  z = c_lin - A_lin^T y >= 0.

Free scalars are split into differences of nonnegative ones. Complex
Hermitian variables are handled by :class:`SdpBuilder`, which embeds each
``d x d`` Hermitian block into a ``2d x 2d`` real symmetric block and
imposes Hermitian matrix equations through ``d**2`` real component
functionals.

The iteration is an infeasible-start path-following method with the HKM
search direction and Mehrotra's predictor-corrector.
"""

import dataclasses
import io

import numpy as np
import scipy.linalg

from .numerics import ValidationError, embed, unembed

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
NUMERICAL_FAILURE = "numerical_failure"


@dataclasses.dataclass
class SdpProblem:
    """Real standard-form SDP.

    Attributes
    ----------
    block_dims : list of int
        Sizes of the symmetric PSD blocks.
    C : list of ndarray
        Objective matrix per block.
    A : list of ndarray
        Constraint matrices per block, shape ``(len(rows[j]), n_j, n_j)``.
    rows : list of ndarray
        Constraint indices touched by each block.
    c_lin, A_lin : ndarray
        Objective and constraint columns of the nonnegative scalars.
    b : ndarray
        Right-hand sides.
    free : ndarray of int
        Indices of nonnegative scalars that come in ``(plus, minus)`` pairs
        representing free variables, shape ``(n_free, 2)``.
    sense : {"min", "max"}
    offset : float
        Constant added to the objective.
    """

    block_dims: list
    C: list
    A: list
    rows: list
    c_lin: np.ndarray
    A_lin: np.ndarray
    b: np.ndarray
    free: np.ndarray
    sense: str = "min"
    offset: float = 0.0

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValidationError(f"sense must be 'min' or 'max', got {self.sense!r}")
        m = self.b.shape[0]
        if self.A_lin.shape != (m, self.c_lin.shape[0]):
            raise ValidationError("linear constraint matrix has inconsistent shape")
        for j, n in enumerate(self.block_dims):
            if self.C[j].shape != (n, n) or self.A[j].shape[1:] != (n, n):
                raise ValidationError(f"block {j} data do not match its dimension {n}")
            if self.A[j].shape[0] != len(self.rows[j]):
                raise ValidationError(f"block {j} has {self.A[j].shape[0]} matrices for {len(self.rows[j])} rows")
            if np.max(np.abs(self.C[j] - self.C[j].T), initial=0.0) > 1e-12:
                raise ValidationError(f"objective of block {j} is not symmetric")
            if np.max(np.abs(self.A[j] - np.swapaxes(self.A[j], 1, 2)), initial=0.0) > 1e-12:
                raise ValidationError(f"constraints of block {j} are not symmetric")

    @property
    def m(self):
        return self.b.shape[0]

    @property
    def n_lin(self):
        return self.c_lin.shape[0]

    def apply(self, X, x):
        """Constraint map ``A(X, x)``."""
        out = self.A_lin @ x
        for j in range(len(self.block_dims)):
            if len(self.rows[j]):
                np.add.at(out, self.rows[j], self.A[j].reshape(len(self.rows[j]), -1) @ X[j].ravel())
        return out

    def adjoint(self, y):
        """Adjoint map, returning per-block matrices and the linear part."""
        mats = [
            np.tensordot(y[self.rows[j]], self.A[j], axes=1) if len(self.rows[j]) else np.zeros((n, n))
            for j, n in enumerate(self.block_dims)
        ]
        return mats, self.A_lin.T @ y

    def objective(self, X, x):
        """Objective in the caller's sense."""
        val = sum(float(np.sum(Cj * Xj)) for Cj, Xj in zip(self.C, X)) + float(self.c_lin @ x)
        return val + self.offset

    def dump(self):
        """Plain-text listing of the problem data.

        Format, one entry per line::

            sense min|max
            blocks n_1 n_2 ...
            linear n_lin
            obj  <block> <row> <col> <value>      (block "L" for scalars, row = col = index)
            con  <k> <block> <row> <col> <value>
            rhs  <k> <value>

        Only upper-triangular nonzeros are listed; the matrices are symmetric.
        """
        buf = io.StringIO()
        buf.write(f"sense {self.sense}\n")
        buf.write("blocks " + " ".join(str(n) for n in self.block_dims) + "\n")
        buf.write(f"linear {self.n_lin}\n")
        buf.write(f"offset {self.offset:.17g}\n")
        for j, Cj in enumerate(self.C):
            for r, c in zip(*np.nonzero(np.triu(Cj))):
                buf.write(f"obj {j} {r} {c} {Cj[r, c]:.17g}\n")
        for i in np.nonzero(self.c_lin)[0]:
            buf.write(f"obj L {i} {i} {self.c_lin[i]:.17g}\n")
        for j, Aj in enumerate(self.A):
            for t, k in enumerate(self.rows[j]):
                for r, c in zip(*np.nonzero(np.triu(Aj[t]))):
                    buf.write(f"con {k} {j} {r} {c} {Aj[t, r, c]:.17g}\n")
        for k, i in zip(*np.nonzero(self.A_lin)):
            buf.write(f"con {k} L {i} {i} {self.A_lin[k, i]:.17g}\n")
        for k, v in enumerate(self.b):
            buf.write(f"rhs {k} {v:.17g}\n")
        return buf.getvalue()


@dataclasses.dataclass
class SdpSolution:
    """Result of :func:`solve`.

    ``X``/``x`` are the primal blocks and scalars, ``y`` the equality
    multipliers and ``Z``/``z`` the dual slacks. Objectives are reported in
    the problem's own sense.
    """

    X: list
    x: np.ndarray
    y: np.ndarray
    Z: list
    z: np.ndarray
    objective_primal: float
    objective_dual: float
    status: str
    iterations: int
    residuals: dict

    @property
    def gap(self):
        return abs(self.objective_primal - self.objective_dual)

    def free_values(self, problem):
        """Values of the free scalars ``plus - minus``."""
        if len(problem.free) == 0:
            return np.zeros(0)
        return self.x[problem.free[:, 0]] - self.x[problem.free[:, 1]]


def _min_eig(M):
    if M.shape[0] == 0:
        return np.inf
    return float(np.linalg.eigvalsh(M)[0])


def residuals(problem, solution):
    """Recompute feasibility and gap figures from the solution alone.

    Returns a dict with

    * ``primal_feas``: ``||A(X, x) - b|| / (1 + ||b||)`` plus any negative
      eigenvalue of ``X`` or negative entry of ``x``;
    * ``dual_feas``: ``||C - A^*(y) - Z|| / (1 + ||C||)`` plus any
      negative eigenvalue of ``Z`` or entry of ``z``;
    * ``gap``: ``|primal - dual|`` of the recomputed objectives;
    * ``rel_gap``: the gap divided by ``1 + |primal| + |dual|``;
    * ``objective_primal``, ``objective_dual``.
    """
    X, x, y, Z, z = solution.X, solution.x, solution.y, solution.Z, solution.z
    sign = 1.0 if problem.sense == "min" else -1.0
    C = [sign * Cj for Cj in problem.C]
    c_lin = sign * problem.c_lin
    rp = problem.apply(X, x) - problem.b
    At, at = problem.adjoint(y)
    normC = np.sqrt(sum(float(np.sum(Cj * Cj)) for Cj in C) + float(c_lin @ c_lin))
    rd2 = sum(float(np.sum((Cj - Aj - Zj) ** 2)) for Cj, Aj, Zj in zip(C, At, Z))
    rd2 += float(np.sum((c_lin - at - z) ** 2))
    cone_p = max([0.0] + [-_min_eig(Xj) for Xj in X] + [-float(np.min(x, initial=0.0))])
    cone_d = max([0.0] + [-_min_eig(Zj) for Zj in Z] + [-float(np.min(z, initial=0.0))])
    pobj = problem.objective(X, x)
    dobj = sign * float(problem.b @ y) + problem.offset
    gap = abs(pobj - dobj)
    return {
        "primal_feas": float(np.linalg.norm(rp) / (1 + np.linalg.norm(problem.b))) + max(cone_p, 0.0),
        "dual_feas": float(np.sqrt(rd2) / (1 + normC)) + max(cone_d, 0.0),
        "gap": gap,
        "rel_gap": gap / (1 + abs(pobj) + abs(dobj)),
        "objective_primal": pobj,
        "objective_dual": dobj,
    }


def _step_length(X, dX, groups):
    """Largest ``a`` with every ``X_j + a dX_j`` PSD; blocks are batched by size."""
    a = np.inf
    for idx in groups:
        L = np.linalg.cholesky(np.stack([X[j] for j in idx]))
        Li = np.linalg.inv(L)
        w = np.linalg.eigvalsh(Li @ np.stack([dX[j] for j in idx]) @ np.swapaxes(Li, 1, 2))
        wmin = float(np.min(w[:, 0]))
        if wmin < 0:
            a = min(a, -1.0 / wmin)
    return a


def _size_groups(dims):
    groups = {}
    for j, n in enumerate(dims):
        groups.setdefault(n, []).append(j)
    return [idx for n, idx in sorted(groups.items()) if n > 0]


def _lin_step(x, dx):
    neg = dx < 0
    return np.inf if not np.any(neg) else float(np.min(-x[neg] / dx[neg]))


def chol_solve(L, r):
    return scipy.linalg.cho_solve((L, True), r)


def _sym(M):
    return 0.5 * (M + M.T)


def solve(problem, tol=1e-8, max_iter=200, step=None, verbose=False):
    """Solve a :class:`SdpProblem`.

    Parameters
    ----------
    problem : SdpProblem
    tol : float
        Target for the relative gap and the relative feasibility residuals.
    max_iter : int
    step : float, optional
        Fixed fraction of the distance to the cone boundary taken per step;
        by default ``0.9 + 0.09 * min(predictor step lengths)``.
    verbose : bool
        Print one line of progress per iteration.

    Returns
    -------
    SdpSolution
        ``status`` is ``"optimal"`` when all residuals are below ``tol``,
        ``"infeasible"`` when an infeasibility certificate was detected and
        ``"numerical_failure"`` otherwise (the best iterate is returned).
    """
    nb = len(problem.block_dims)
    m = problem.m
    sign = 1.0 if problem.sense == "min" else -1.0
    C = [sign * Cj for Cj in problem.C]
    c_lin = sign * problem.c_lin
    b = problem.b
    A, rows, A_lin = problem.A, problem.rows, problem.A_lin
    free = problem.free
    groups = _size_groups(problem.block_dims)
    N = sum(problem.block_dims) + problem.n_lin

    # starting point scaled from data norms
    normA = np.zeros(m)
    for j in range(nb):
        np.add.at(normA, rows[j], np.einsum("kab,kab->k", A[j], A[j]))
    normA = np.sqrt(normA + np.sum(A_lin**2, axis=1))
    normC = np.sqrt(sum(float(np.sum(Cj**2)) for Cj in C) + float(c_lin @ c_lin))
    nmax = max(problem.block_dims + [1])
    xi = max(10.0, np.sqrt(nmax), float(np.max(np.sqrt(nmax) * (1 + np.abs(b)) / (1 + normA), initial=0.0)))
    eta = max(10.0, np.sqrt(nmax), normC, float(np.max(normA, initial=0.0)))
    X = [xi * np.eye(n) for n in problem.block_dims]
    Z = [eta * np.eye(n) for n in problem.block_dims]
    x = xi * np.ones(problem.n_lin)
    z = eta * np.ones(problem.n_lin)
    y = np.zeros(m)
    normb = np.linalg.norm(b)

    status = NUMERICAL_FAILURE
    best = None
    it = 0
    for it in range(1, max_iter + 1):
        AX = problem.apply(X, x)
        rp = b - AX
        At, at = problem.adjoint(y)
        Rd = [C[j] - At[j] - Z[j] for j in range(nb)]
        rd = c_lin - at - z
        mu = (sum(float(np.sum(X[j] * Z[j])) for j in range(nb)) + float(x @ z)) / N
        pobj = sum(float(np.sum(C[j] * X[j])) for j in range(nb)) + float(c_lin @ x)
        dobj = float(b @ y)
        pinf = np.linalg.norm(rp) / (1 + normb)
        dinf = np.sqrt(sum(float(np.sum(R**2)) for R in Rd) + float(rd @ rd)) / (1 + normC)
        rgap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
        merit = max(pinf, dinf, rgap)
        if verbose:
            print(f"{it:3d} pobj={pobj:+.10e} dobj={dobj:+.10e} pinf={pinf:.2e} dinf={dinf:.2e} gap={rgap:.2e} mu={mu:.2e}")
        if best is None or merit < best[0]:
            best = (merit, [Xj.copy() for Xj in X], x.copy(), y.copy(), [Zj.copy() for Zj in Z], z.copy())
        if merit <= tol:
            status = OPTIMAL
            break
        # Farkas-type certificates on diverging iterates
        if dobj > 1e8 * (1 + normC) and dinf * (1 + normC) < 1e-6 * abs(dobj):
            status = INFEASIBLE
            break
        if pobj < -1e8 * (1 + normb) and pinf * (1 + normb) < 1e-6 * abs(pobj):
            status = INFEASIBLE
            break

        # Schur complement M_kl = sum_j tr(A_kj X_j A_lj Z_j^-1) + lin part
        try:
            Zinv = [None] * nb
            for idx in groups:
                inv = np.linalg.inv(np.stack([Z[j] for j in idx]))
                for t, j in enumerate(idx):
                    Zinv[j] = _sym(inv[t])
        except np.linalg.LinAlgError:
            break
        M = (A_lin * (x / z)) @ A_lin.T
        for j in range(nb):
            K = len(rows[j])
            if K == 0:
                continue
            Gj = X[j] @ A[j] @ Zinv[j]
            M[np.ix_(rows[j], rows[j])] += Gj.reshape(K, -1) @ A[j].reshape(K, -1).T
        M = 0.5 * (M + M.T)
        M0 = M.copy()
        M[np.diag_indices(m)] += 1e-12 * max(1.0, float(np.max(np.abs(np.diag(M)), initial=1.0)))
        try:
            Lm = np.linalg.cholesky(M)
        except np.linalg.LinAlgError:
            break

        def direction(Rc, rc):
            # Rc: target for dX + sym(X dZ Z^-1) per block; rc likewise for scalars
            rhs = rp.copy()
            XRdZ = [X[j] @ Rd[j] @ Zinv[j] for j in range(nb)]
            blocks = [XRdZ[j] - Rc[j] for j in range(nb)]
            rhs += problem.apply(blocks, x * rd / z - rc)
            dy = chol_solve(Lm, rhs)
            for _ in range(2):
                dy += chol_solve(Lm, rhs - M0 @ dy)
            Ady, ady = problem.adjoint(dy)
            dZ = [_sym(Rd[j] - Ady[j]) for j in range(nb)]
            dz = rd - ady
            dX = [_sym(Rc[j] - X[j] @ dZ[j] @ Zinv[j]) for j in range(nb)]
            dx = rc - x * dz / z
            return dX, dx, dy, dZ, dz

        def lengths(dX, dx, dZ, dz):
            ap = min(_step_length(X, dX, groups), _lin_step(x, dx))
            ad = min(_step_length(Z, dZ, groups), _lin_step(z, dz))
            return ap, ad

        try:
            # predictor
            dX, dx, dy, dZ, dz = direction([-Xj for Xj in X], -x)
            ap, ad = lengths(dX, dx, dZ, dz)
            ap, ad = min(1.0, ap), min(1.0, ad)
            mu_aff = (
                sum(float(np.sum((X[j] + ap * dX[j]) * (Z[j] + ad * dZ[j]))) for j in range(nb))
                + float((x + ap * dx) @ (z + ad * dz))
            ) / N
            amin = min(ap, ad)
            expon = 1.0 if amin < 1.0 / np.sqrt(3.0) else max(1.0, 3.0 * amin**2)
            sigma = min(1.0, (max(mu_aff, 0.0) / mu) ** expon) if mu > 0 else 0.0
            gamma = 0.9 + 0.09 * amin if step is None else step
            # corrector
            Rc = [sigma * mu * Zinv[j] - X[j] - _sym(dX[j] @ dZ[j] @ Zinv[j]) for j in range(nb)]
            rc = sigma * mu / z - x - dx * dz / z
            dX, dx, dy, dZ, dz = direction(Rc, rc)
            ap, ad = lengths(dX, dx, dZ, dz)
        except np.linalg.LinAlgError:
            break
        ap, ad = min(1.0, gamma * ap), min(1.0, gamma * ad)
        if verbose:
            print(f"    sigma={sigma:.2e} ap={ap:.3f} ad={ad:.3f}")
        X = [X[j] + ap * dX[j] for j in range(nb)]
        x = x + ap * dx
        y = y + ad * dy
        Z = [Z[j] + ad * dZ[j] for j in range(nb)]
        z = z + ad * dz
        if len(free):
            # keep split free variables bounded; the difference is unchanged
            shift = 0.9 * np.minimum(x[free[:, 0]], x[free[:, 1]])
            x[free[:, 0]] -= shift
            x[free[:, 1]] -= shift

    if status != OPTIMAL and best is not None and status != INFEASIBLE:
        _, X, x, y, Z, z = best
    sol = SdpSolution(X, x, y, Z, z, 0.0, 0.0, status, it, {})
    rep = residuals(problem, sol)
    sol.objective_primal = rep["objective_primal"]
    sol.objective_dual = rep["objective_dual"]
    sol.residuals = rep
    return sol


def hermitian_functionals(d):
    """Complex matrices ``F_k`` with ``Re tr(F_k H)`` the real coordinates of a Hermitian ``H``.

    Returns ``(F, G)``: ``F`` of shape ``(d*d, d, d)`` and the dual basis
    ``G`` with ``H = sum_k Re tr(F_k H) G_k``.
    """
    F, G = [], []
    for p in range(d):
        for q in range(p, d):
            f = np.zeros((d, d), dtype=complex)
            g = np.zeros((d, d), dtype=complex)
            if p == q:
                f[p, p] = g[p, p] = 1.0
            else:
                f[p, q] = f[q, p] = 0.5
                g[p, q] = g[q, p] = 1.0
            F.append(f)
            G.append(g)
            if p != q:
                f = np.zeros((d, d), dtype=complex)
                g = np.zeros((d, d), dtype=complex)
                f[p, q], f[q, p] = 0.5j, -0.5j
                g[p, q], g[q, p] = 1j, -1j
                F.append(f)
                G.append(g)
    return np.array(F), np.array(G)


class SdpBuilder:
    """Incremental construction of an :class:`SdpProblem` from complex data.

    Variables are Hermitian PSD matrices (:meth:`hermitian`), real symmetric
    PSD blocks (:meth:`block`), nonnegative scalars (:meth:`nonneg`) and free
    scalars or free Hermitian matrices (:meth:`free`, :meth:`free_hermitian`).
    """

    def __init__(self, sense="min"):
        self.sense = sense
        self.block_dims = []
        self.herm_dim = {}
        self.C = []
        self.block_terms = []  # per block: list of (row, matrix)
        self.n_lin = 0
        self.c_lin = []
        self.lin_terms = []  # (row, col, coef)
        self.free_pairs = []
        self.b = []
        self.offset = 0.0
        self._func_cache = {}

    # variables
    def block(self, n):
        self.block_dims.append(n)
        self.C.append(np.zeros((n, n)))
        self.block_terms.append([])
        return len(self.block_dims) - 1

    def hermitian(self, d):
        j = self.block(2 * d)
        self.herm_dim[j] = d
        return j

    def nonneg(self, k=1):
        start = self.n_lin
        self.n_lin += k
        self.c_lin.extend([0.0] * k)
        return list(range(start, start + k))

    def free(self, k=1):
        """``k`` free scalars; returns ``(plus, minus)`` index pairs."""
        out = []
        for _ in range(k):
            plus, minus = self.nonneg(2)
            self.free_pairs.append((plus, minus))
            out.append((plus, minus))
        return out

    def free_hermitian(self, d):
        """Free Hermitian matrix as ``d**2`` free coordinates along the dual basis."""
        return FreeHermitian(d, self.free(d * d))

    def functionals(self, d):
        if d not in self._func_cache:
            self._func_cache[d] = hermitian_functionals(d)
        return self._func_cache[d]

    # objective
    def objective_hermitian(self, j, F, coef=1.0):
        """Add ``coef * Re tr(F H_j)`` to the objective."""
        self.C[j] += coef * 0.5 * embed(np.asarray(F, dtype=complex))
        self.C[j] = _sym(self.C[j])

    def objective_scalar(self, idx, coef):
        if isinstance(idx, tuple):
            self.c_lin[idx[0]] += coef
            self.c_lin[idx[1]] -= coef
        else:
            self.c_lin[idx] += coef

    def objective_free_hermitian(self, Y, F, coef=1.0):
        """Add ``coef * Re tr(F Y)`` for a free Hermitian variable ``Y``."""
        _, G = self.functionals(Y.d)
        F = np.asarray(F, dtype=complex)
        for pair, g in zip(Y.coords, G):
            self.objective_scalar(pair, coef * float(np.real(np.trace(F @ g))))

    # constraints
    def _row(self, rhs):
        self.b.append(float(rhs))
        return len(self.b) - 1

    def scalar_equation(self, herm_terms=(), scalar_terms=(), rhs=0.0):
        """``sum coef * Re tr(F H_j) + sum coef * s = rhs``.

        ``herm_terms`` holds ``(j, F, coef)``, ``scalar_terms`` ``(idx, coef)``
        where ``idx`` is a nonnegative index or a free ``(plus, minus)`` pair.
        """
        k = self._row(rhs)
        for j, F, coef in herm_terms:
            self.block_terms[j].append((k, coef * 0.5 * embed(np.asarray(F, dtype=complex))))
        for idx, coef in scalar_terms:
            self._add_scalar(k, idx, coef)
        return k

    def _add_scalar(self, k, idx, coef):
        if coef == 0.0:
            return
        if isinstance(idx, tuple):
            self.lin_terms.append((k, idx[0], coef))
            self.lin_terms.append((k, idx[1], -coef))
        else:
            self.lin_terms.append((k, idx, coef))

    def matrix_equation(self, d, herm_terms=(), scalar_terms=(), free_terms=(), rhs=None):
        """Hermitian equation ``sum coef H_j + sum s G + sum coef Y = rhs``.

        ``herm_terms``: ``(j, coef)``; ``scalar_terms``: ``(idx, G)`` with a
        fixed Hermitian ``G``; ``free_terms``: ``(Y, coef)`` for free
        Hermitian variables. Imposed on all ``d**2`` real coordinates.
        """
        F, _ = self.functionals(d)
        rhs = np.zeros((d, d), dtype=complex) if rhs is None else np.asarray(rhs, dtype=complex)
        rhs_c = np.real(np.einsum("kij,ji->k", F, rhs))
        emb = [0.5 * embed(f) for f in F]
        scal = [(idx, np.real(np.einsum("kij,ji->k", F, np.asarray(G, dtype=complex)))) for idx, G in scalar_terms]
        rows = []
        for k in range(len(F)):
            r = self._row(rhs_c[k])
            rows.append(r)
            for j, coef in herm_terms:
                if coef != 0.0:
                    self.block_terms[j].append((r, coef * emb[k]))
            for idx, comps in scal:
                self._add_scalar(r, idx, float(comps[k]))
            for Y, coef in free_terms:
                self._add_scalar(r, Y.coords[k], coef)
        return rows

    def build(self):
        m = len(self.b)
        A, rows = [], []
        for j, n in enumerate(self.block_dims):
            terms = self.block_terms[j]
            merged = {}
            for r, M in terms:
                merged[r] = merged[r] + M if r in merged else M.copy()
            keys = np.array(sorted(merged), dtype=int)
            rows.append(keys)
            A.append(np.array([_sym(merged[r]) for r in keys]) if len(keys) else np.zeros((0, n, n)))
        A_lin = np.zeros((m, self.n_lin))
        for r, i, coef in self.lin_terms:
            A_lin[r, i] += coef
        return SdpProblem(
            block_dims=list(self.block_dims),
            C=[_sym(Cj) for Cj in self.C],
            A=A,
            rows=rows,
            c_lin=np.array(self.c_lin, dtype=float),
            A_lin=A_lin,
            b=np.array(self.b, dtype=float),
            free=np.array(self.free_pairs, dtype=int).reshape(-1, 2),
            sense=self.sense,
            offset=self.offset,
        )


@dataclasses.dataclass
class FreeHermitian:
    """Handle for a free Hermitian variable stored as ``d**2`` free scalars."""

    d: int
    coords: list

    def value(self, solution):
        _, G = hermitian_functionals(self.d)
        vals = np.array([solution.x[p] - solution.x[q] for p, q in self.coords])
        return np.einsum("k,kij->ij", vals, G)


def hermitian_value(solution, j):
    """Complex Hermitian matrix of an embedded block."""
    return unembed(solution.X[j])
