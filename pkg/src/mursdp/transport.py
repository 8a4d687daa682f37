"""
Finite optimal transport.

Primal transport costs are computed with the transportation simplex, the
dual side with families of optimal pricing schemes ``(phi, psi)``, one per
maximally cyclically c-monotone (mccm) subset of ``X x Y``.  Once such a
family is known, the transport cost of any pair of distributions is a
maximum over finitely many affine functions of ``(p, q)``.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .numerics import NumericalError, ValidationError

__all__ = [
    "CostFunction",
    "PricingScheme",
    "SchemeFamily",
    "TransportSolution",
    "as_distribution",
    "transport_cost_primal",
    "solve_transport",
    "transport_cost_dual",
    "tv_distance",
    "is_ccm",
    "find_positive_cycle",
    "equality_set",
    "pricing_from_ccm",
    "enumerate_mccm",
    "enumerate_mccm_ordered",
    "manhattan_bound",
    "scheme_family",
    "MAX_ENUMERATION_SIZE",
]

MAX_ENUMERATION_SIZE = 8


def _is_convex_on(h, values_x, values_y):
    diffs = np.unique(np.subtract.outer(values_x, values_y).ravel())
    if diffs.size < 3:
        return True
    hv = np.array([h(t) for t in diffs], dtype=float)
    slopes = np.diff(hv) / np.diff(diffs)
    return bool(np.all(np.diff(slopes) >= -1e-12 * max(1.0, np.max(np.abs(slopes)))))


@dataclass(frozen=True, eq=False)
class CostFunction:
    """Cost matrix ``c[x, y]`` for reporting ``x`` when ``y`` was correct.

    Square costs must vanish exactly on the diagonal and be strictly
    positive elsewhere.  ``ordered_convex`` marks costs of the form
    ``h(x - y)`` with convex ``h`` over sorted outcome values; such costs
    admit the staircase enumeration of :func:`enumerate_mccm_ordered`.
    """

    matrix: np.ndarray
    values_x: Optional[np.ndarray] = None
    values_y: Optional[np.ndarray] = None
    ordered_convex: bool = False
    kind: str = "matrix"

    def __post_init__(self):
        c = np.array(self.matrix, dtype=float)
        if c.ndim != 2 or c.size == 0:
            raise ValidationError(f"cost matrix must be a non-empty 2-d array, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValidationError("cost matrix has non-finite entries")
        c.setflags(write=False)
        object.__setattr__(self, "matrix", c)
        for name, size in (("values_x", c.shape[0]), ("values_y", c.shape[1])):
            v = getattr(self, name)
            if v is not None:
                v = np.array(v, dtype=float)
                if v.shape != (size,):
                    raise ValidationError(f"{name} must have length {size}")
                v.setflags(write=False)
                object.__setattr__(self, name, v)
        if self.is_square:
            if np.any(np.diag(c) != 0.0):
                raise ValidationError("square cost must vanish on the diagonal")
            off = c[~np.eye(c.shape[0], dtype=bool)]
            if np.any(off <= 0.0):
                raise ValidationError("square cost must be strictly positive off the diagonal")
        if self.ordered_convex:
            for v in (self.values_x, self.values_y):
                if v is None or np.any(np.diff(v) <= 0):
                    raise ValidationError("ordered_convex costs need strictly increasing outcome values")

    # constructors

    @classmethod
    def from_matrix(cls, rows, values_x=None, values_y=None):
        return cls(np.asarray(rows, dtype=float), values_x, values_y)

    @classmethod
    def discrete(cls, d):
        """Discrete metric ``1 - delta(x, y)`` on ``d`` points."""
        return cls(1.0 - np.eye(d), kind="discrete")

    @classmethod
    def from_difference(cls, h, values_x, values_y=None, convex=None):
        """Cost ``h(x - y)`` over real outcome values.

        Convexity of ``h`` is checked on the occurring differences unless
        given explicitly; values must be sorted to enable the ordered path.
        """
        vx = np.asarray(values_x, dtype=float)
        vy = vx if values_y is None else np.asarray(values_y, dtype=float)
        c = np.array([[h(x - y) for y in vy] for x in vx], dtype=float)
        if convex is None:
            convex = _is_convex_on(h, vx, vy)
        ordered = bool(convex and np.all(np.diff(vx) > 0) and np.all(np.diff(vy) > 0))
        return cls(c, vx, vy, ordered_convex=ordered, kind="difference")

    @classmethod
    def quadratic(cls, values_x, values_y=None):
        """Squared distance ``(x - y)**2`` of outcome values."""
        cost = cls.from_difference(lambda t: t * t, values_x, values_y, convex=True)
        object.__setattr__(cost, "kind", "quadratic")
        return cost

    @classmethod
    def power(cls, values_x, alpha, values_y=None):
        """``|x - y|**alpha``; convex (hence ordered) for ``alpha >= 1``."""
        if alpha <= 0:
            raise ValidationError("exponent must be positive")
        return cls.from_difference(lambda t: abs(t) ** alpha, values_x, values_y, convex=alpha >= 1)

    # properties

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def is_square(self):
        return self.matrix.shape[0] == self.matrix.shape[1]

    @property
    def is_metric(self):
        if not self.is_square:
            return False
        c = self.matrix
        tol = 1e-12 * max(1.0, float(np.max(c)))
        if np.max(np.abs(c - c.T)) > tol:
            return False
        # c[x, z] <= c[x, y] + c[y, z]
        via = c[:, :, None] + c[None, :, :]
        return bool(np.all(c[:, None, :] <= via + tol))

    @property
    def is_discrete_metric(self):
        return self.is_square and bool(np.array_equal(self.matrix, 1.0 - np.eye(self.shape[0])))

    def scale(self):
        return max(1.0, float(np.max(np.abs(self.matrix))))


def as_distribution(p, size=None, name="distribution"):
    """Validate a probability vector (nonnegative, summing to one within 1e-10)."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional")
    if size is not None and p.shape[0] != size:
        raise ValidationError(f"{name} has length {p.shape[0]}, expected {size}")
    if np.any(p < -1e-12):
        raise ValidationError(f"{name} has negative weights")
    if abs(p.sum() - 1.0) > 1e-10:
        raise ValidationError(f"{name} is not normalized (sum {p.sum():.12g})")
    return np.clip(p, 0.0, None)


# ---------------------------------------------------------------------------
# primal: transportation simplex


@dataclass
class TransportSolution:
    cost: float
    plan: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    basis: list
    pivots: int
    p: np.ndarray
    q: np.ndarray

    @property
    def dual_value(self):
        return float(self.p @ self.phi - self.q @ self.psi)


def _potentials(c, basis, m, n):
    phi = np.full(m, np.nan)
    psi = np.full(n, np.nan)
    rows = [[] for _ in range(m)]
    cols = [[] for _ in range(n)]
    for i, j in basis:
        rows[i].append(j)
        cols[j].append(i)
    phi[0] = 0.0
    stack = [("x", 0)]
    while stack:
        side, k = stack.pop()
        if side == "x":
            for j in rows[k]:
                if np.isnan(psi[j]):
                    psi[j] = phi[k] - c[k, j]
                    stack.append(("y", j))
        else:
            for i in cols[k]:
                if np.isnan(phi[i]):
                    phi[i] = c[i, k] + psi[k]
                    stack.append(("x", i))
    return phi, psi


def _tree_path(basis, m, n, start_col, end_row):
    """Cells on the basis-tree path from column ``start_col`` to row ``end_row``."""
    adj = {}
    for i, j in basis:
        adj.setdefault(("x", i), []).append(("y", j))
        adj.setdefault(("y", j), []).append(("x", i))
    start, goal = ("y", start_col), ("x", end_row)
    parent = {start: None}
    queue = [start]
    for node in queue:
        if node == goal:
            break
        for nb in adj.get(node, ()):
            if nb not in parent:
                parent[nb] = node
                queue.append(nb)
    if goal not in parent:
        raise NumericalError("basis is not a spanning tree")
    cells = []
    node = goal
    while parent[node] is not None:
        prev = parent[node]
        a, b = (node, prev) if node[0] == "x" else (prev, node)
        cells.append((a[1], b[1]))
        node = prev
    # ordered from start_col towards end_row
    return cells[::-1]


def solve_transport(c, p, q, max_pivots=10000):
    """Optimal coupling of ``p`` and ``q`` by the transportation simplex.

    Starts from the north-west corner basis and pivots with Bland's rule,
    which rules out cycling on degenerate bases.  The final basis gives an
    optimal pricing scheme ``phi[x] - psi[y] <= c[x, y]`` as a certificate.
    """
    c = np.asarray(c, dtype=float)
    m, n = c.shape
    p = np.asarray(p, dtype=float) / np.sum(p)
    q = np.asarray(q, dtype=float) / np.sum(q)
    x = np.zeros((m, n))
    basis = []
    sup, dem = p.copy(), q.copy()
    i = j = 0
    while True:
        amount = min(sup[i], dem[j])
        x[i, j] = amount
        basis.append((i, j))
        sup[i] -= amount
        dem[j] -= amount
        if i == m - 1 and j == n - 1:
            break
        if j == n - 1 or (i < m - 1 and sup[i] <= dem[j]):
            i += 1
        else:
            j += 1
    tol = 1e-12 * max(1.0, float(np.max(np.abs(c))))
    pivots = 0
    while True:
        phi, psi = _potentials(c, basis, m, n)
        reduced = c - phi[:, None] + psi[None, :]
        in_basis = np.zeros((m, n), dtype=bool)
        for cell in basis:
            in_basis[cell] = True
        candidates = np.argwhere((reduced < -tol) & ~in_basis)
        if candidates.size == 0:
            break
        if pivots >= max_pivots:
            raise NumericalError("transportation simplex exceeded the pivot limit")
        ei, ej = (int(v) for v in candidates[0])
        path = _tree_path(basis, m, n, ej, ei)
        minus = path[0::2]
        plus = path[1::2]
        theta = min(x[cell] for cell in minus)
        leaving = min(cell for cell in minus if x[cell] <= theta)
        for cell in minus:
            x[cell] -= theta
        for cell in plus:
            x[cell] += theta
        x[ei, ej] += theta
        x[leaving] = 0.0
        basis.remove(leaving)
        basis.append((ei, ej))
        pivots += 1
    x = np.clip(x, 0.0, None)
    return TransportSolution(float(np.sum(c * x)), x, phi, psi, sorted(basis), pivots, p, q)


def transport_cost_primal(cost, p, q):
    """Minimal expected cost over couplings of ``p`` (on X) and ``q`` (on Y).

    Returns
    -------
    cost : float
    plan : ndarray, shape (|X|, |Y|)
        An optimal vertex coupling.
    """
    c = cost.matrix if isinstance(cost, CostFunction) else np.asarray(cost, dtype=float)
    p = as_distribution(p, c.shape[0], "p")
    q = as_distribution(q, c.shape[1], "q")
    sol = solve_transport(c, p, q)
    gap = abs(sol.cost - sol.dual_value)
    if gap > 1e-9 * max(1.0, abs(sol.cost)):
        raise NumericalError(f"transport duality gap {gap:.3e} exceeds tolerance")
    return sol.cost, sol.plan


def tv_distance(p, q):
    """Half the l1 distance; the transport cost under the discrete metric."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValidationError(f"size mismatch: {p.shape} vs {q.shape}")
    return 0.5 * float(np.sum(np.abs(p - q)))


# ---------------------------------------------------------------------------
# pricing schemes and ccm sets


@dataclass(frozen=True, eq=False)
class PricingScheme:
    """Pair ``(phi, psi)`` with ``phi[x] - psi[y] <= c[x, y]``.

    Entries may be infinite for vertices unreachable from the reference
    point (see :func:`pricing_from_ccm`).
    """

    phi: np.ndarray
    psi: np.ndarray
    edges: frozenset = field(default_factory=frozenset)

    def value(self, p, q):
        return float(np.dot(self.phi, p) - np.dot(self.psi, q))

    def is_valid(self, cost, tol=1e-12):
        c = cost.matrix if isinstance(cost, CostFunction) else np.asarray(cost)
        with np.errstate(invalid="ignore"):
            gap = self.phi[:, None] - self.psi[None, :] - c
        return bool(np.all(np.nan_to_num(gap, nan=np.inf) <= tol * max(1.0, np.max(np.abs(c)))))

    def normalized(self, x0=0):
        a = self.phi[x0]
        return PricingScheme(self.phi - a, self.psi - a, self.edges)

    def key(self, grid=1e-9):
        s = self.normalized()
        return tuple(np.round(np.concatenate([s.phi, s.psi]) / grid).astype(np.int64).tolist())


def equality_set(cost, phi, psi, tol=None):
    """Pairs ``(x, y)`` where the pricing inequality is tight."""
    c = cost.matrix if isinstance(cost, CostFunction) else np.asarray(cost)
    if tol is None:
        tol = 1e-9 * max(1.0, float(np.max(np.abs(c))))
    with np.errstate(invalid="ignore"):
        slack = c - (np.asarray(phi)[:, None] - np.asarray(psi)[None, :])
    return frozenset((int(i), int(j)) for i, j in np.argwhere(np.abs(slack) <= tol))


@dataclass(frozen=True, eq=False)
class SchemeFamily:
    """Optimal pricing schemes of a cost, one per mccm set."""

    cost: CostFunction
    schemes: tuple

    def __post_init__(self):
        if not self.schemes:
            raise ValidationError("scheme family is empty")

    def __len__(self):
        return len(self.schemes)

    def __iter__(self):
        return iter(self.schemes)

    @property
    def phis(self):
        return np.array([s.phi for s in self.schemes])

    @property
    def psis(self):
        return np.array([s.psi for s in self.schemes])


def transport_cost_dual(cost, p, q, family):
    """Transport cost as the best value of the precomputed pricing schemes.

    Returns the cost and the index of the maximizing scheme (lowest index on
    ties).
    """
    if family is None or len(family) == 0:
        raise ValidationError("empty scheme family")
    c = cost.matrix if isinstance(cost, CostFunction) else np.asarray(cost)
    if family.phis.shape[1] != c.shape[0] or family.psis.shape[1] != c.shape[1]:
        raise ValidationError("scheme family does not match the cost shape")
    p = as_distribution(p, c.shape[0], "p")
    q = as_distribution(q, c.shape[1], "q")
    values = family.phis @ p - family.psis @ q
    k = int(np.argmax(values))
    return float(values[k]), k


def _check_edges(gamma, m, n):
    edges = frozenset((int(x), int(y)) for x, y in gamma)
    for x, y in edges:
        if not (0 <= x < m and 0 <= y < n):
            raise ValidationError(f"edge {(x, y)} out of range for a {m}x{n} cost")
    return edges


def _adapted_arcs(c, edges):
    """Arcs of the adapted-path digraph: x->y on edges with +c, y->x always with -c."""
    m, n = c.shape
    arcs = [(x, m + y, c[x, y]) for x, y in sorted(edges)]
    arcs += [(m + y, x, -c[x, y]) for x in range(m) for y in range(n)]
    return arcs


def find_positive_cycle(cost, gamma, tol=None):
    """A closed adapted path of positive cost, or ``None`` if ``gamma`` is ccm.

    Bellman-Ford on negated arc weights; the cycle is returned as a list of
    vertices labelled ``("x", i)`` / ``("y", j)``.
    """
    c = cost.matrix if isinstance(cost, CostFunction) else np.asarray(cost, dtype=float)
    m, n = c.shape
    edges = _check_edges(gamma, m, n)
    if tol is None:
        tol = 1e-12 * max(1.0, float(np.max(np.abs(c))))
    arcs = [(u, v, -w) for u, v, w in _adapted_arcs(c, edges)]
    V = m + n
    dist = np.zeros(V)
    pred = [-1] * V
    last = -1
    for _ in range(V):
        last = -1
        for u, v, w in arcs:
            if dist[u] + w < dist[v] - tol:
                dist[v] = dist[u] + w
                pred[v] = u
                last = v
        if last < 0:
            return None
    v = last
    for _ in range(V):
        v = pred[v]
    cycle = [v]
    u = pred[v]
    while u != v:
        cycle.append(u)
        u = pred[u]
    cycle.reverse()
    return [("x", k) if k < m else ("y", k - m) for k in cycle]


def is_ccm(cost, gamma):
    """True iff no ``gamma``-adapted closed path has positive cost."""
    return find_positive_cycle(cost, gamma) is None


def _longest_paths(V, arcs, source):
    dist = np.full(V, -np.inf)
    dist[source] = 0.0
    for _ in range(V):
        changed = False
        for u, v, w in arcs:
            if dist[u] > -np.inf and dist[u] + w > dist[v] + 1e-15 * max(1.0, abs(dist[v]) if np.isfinite(dist[v]) else 1.0):
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            return dist
    raise NumericalError("positive cycle encountered in longest-path relaxation")


def pricing_from_ccm(cost, gamma, x0=0):
    """Maximal and minimal pricing schemes tight on a ccm set.

    Both schemes satisfy the pricing inequality everywhere, are tight on
    ``gamma`` and have ``phi[x0] = 0``; every other such scheme lies between
    them pointwise.  Vertices not linked to ``x0`` through adapted paths get
    ``+inf`` (maximal scheme) or ``-inf`` (minimal scheme).

    Returns
    -------
    plus, minus : PricingScheme
    """
    c = cost.matrix if isinstance(cost, CostFunction) else np.asarray(cost, dtype=float)
    m, n = c.shape
    edges = _check_edges(gamma, m, n)
    if not edges:
        raise ValidationError("ccm set is empty")
    if not any(x == x0 for x, _ in edges):
        raise ValidationError(f"reference point x0={x0} has no edge in the ccm set")
    cycle = find_positive_cycle(c, edges)
    if cycle is not None:
        raise ValidationError(f"set is not cyclically c-monotone; positive cycle {cycle}")
    arcs = _adapted_arcs(c, edges)
    V = m + n
    forward = _longest_paths(V, arcs, x0)
    backward = _longest_paths(V, [(v, u, w) for u, v, w in arcs], x0)
    chi_plus = -forward
    chi_minus = backward
    chi_plus[x0] = chi_minus[x0] = 0.0
    plus = PricingScheme(chi_plus[:m].copy(), chi_plus[m:].copy(), edges)
    minus = PricingScheme(chi_minus[:m].copy(), chi_minus[m:].copy(), edges)
    return plus, minus


# ---------------------------------------------------------------------------
# enumeration of mccm sets


def _family_from_potentials(cost, potentials):
    c = cost.matrix
    m = c.shape[0]
    seen = {}
    for pot in potentials:
        phi = np.asarray(pot[:m], dtype=float)
        psi = np.asarray(pot[m:], dtype=float)
        scheme = PricingScheme(phi - phi[0], psi - phi[0])
        scheme = PricingScheme(scheme.phi, scheme.psi, equality_set(cost, scheme.phi, scheme.psi))
        seen.setdefault(scheme.key(), scheme)
    schemes = sorted(seen.values(), key=lambda s: s.key())
    return SchemeFamily(cost, tuple(schemes))


def enumerate_mccm(cost, max_size=MAX_ENUMERATION_SIZE):
    """All optimal pricing schemes of ``cost`` by growing ccm trees.

    The search grows a connected set of vertices of ``X u Y`` from ``x = 0``,
    maintaining the pricing potentials of the connected vertices and checking
    the pricing inequality of each new vertex against all old ones.  To visit
    every mccm set exactly once, the next vertex is always the lowest-indexed
    vertex that is tight with the current set; vertices passed over are
    remembered and must stay non-tight with the set they were passed over
    for.  The search stops once every vertex is connected.
    """
    c = cost.matrix
    m, n = c.shape
    if m > max_size or n > max_size:
        raise ValidationError(
            f"{m}x{n} exceeds the enumeration bound {max_size}x{max_size}; "
            "use enumerate_mccm_ordered for ordered convex costs"
        )
    V = m + n
    tol = 1e-9 * cost.scale()
    # node k < m is x = k, node k >= m is y = k - m; cc[a][b] is the cost of
    # the pair formed by a and b when they lie on opposite sides
    cc = [[0.0] * V for _ in range(V)]
    for i in range(m):
        for j in range(n):
            cc[i][m + j] = cc[m + j][i] = float(c[i, j])
    xs = list(range(m))
    ys = list(range(m, V))
    pot = [0.0] * V
    pos = [-1] * V
    pos[0] = 0
    order = [0]
    skip = [0] * V
    results = []

    def lower_y(u, nodes):
        # psi[u] >= phi[x] - c[x, u] for tree x in nodes
        return max((pot[x] - cc[x][u] for x in nodes), default=-math.inf)

    def upper_x(u, nodes):
        # phi[u] <= c[u, y] + psi[y] for tree y in nodes
        return min((cc[u][y] + pot[y] for y in nodes), default=math.inf)

    def attachable(u):
        """Whether a passed-over vertex can still become tight with an allowed vertex."""
        k = skip[u]
        tree_x = [x for x in xs if pos[x] >= 0]
        tree_y = [y for y in ys if pos[y] >= 0]
        if u >= m:
            forbidden = lower_y(u, [x for x in tree_x if pos[x] < k])
            bound = lower_y(u, tree_x)
            if bound > forbidden + tol and any(
                pos[x] >= k and abs(pot[x] - cc[x][u] - bound) <= tol for x in tree_x
            ):
                return True
            for w in xs:
                if pos[w] < 0:
                    top = upper_x(w, tree_y) - cc[w][u]
                    if top > forbidden + tol and top >= bound - tol:
                        return True
            return False
        forbidden = upper_x(u, [y for y in tree_y if pos[y] < k])
        bound = upper_x(u, tree_y)
        if bound < forbidden - tol and any(
            pos[y] >= k and abs(cc[u][y] + pot[y] - bound) <= tol for y in tree_y
        ):
            return True
        for w in ys:
            if pos[w] < 0:
                bottom = lower_y(w, tree_x) + cc[u][w]
                if bottom < forbidden - tol and bottom <= bound + tol:
                    return True
        return False

    def grow(pending):
        if len(order) == V:
            results.append(list(pot))
            return
        for u in pending:
            if not attachable(u):
                return
        passed = []
        for v in range(V):
            if pos[v] >= 0:
                continue
            is_x = v < m
            partners = [u for u in (ys if is_x else xs) if pos[u] >= 0]
            values = []
            for u in partners:
                if pos[u] < skip[v]:
                    continue
                val = pot[u] + cc[v][u] if is_x else pot[u] - cc[v][u]
                for w in values:
                    if abs(val - w) <= tol:
                        break
                else:
                    values.append(val)
            for val in values:
                for u in partners:
                    s = cc[v][u] - (val - pot[u]) if is_x else cc[v][u] - (pot[u] - val)
                    if s < -tol or (s <= tol and pos[u] < skip[v]):
                        break
                else:
                    saved = [skip[u] for u in passed]
                    for u in passed:
                        skip[u] = len(order)
                    pot[v] = val
                    pos[v] = len(order)
                    order.append(v)
                    grow([u for u in range(V) if pos[u] < 0 and skip[u] > 0])
                    order.pop()
                    pos[v] = -1
                    for u, s in zip(passed, saved):
                        skip[u] = s
            if partners:
                passed.append(v)

    grow([])
    if not results:
        raise NumericalError("no pricing scheme found")
    return _family_from_potentials(cost, results)


def enumerate_mccm_ordered(cost):
    """Pricing schemes of an ordered convex cost from staircase sets.

    With sorted outcomes and ``c = h(x - y)``, ``h`` convex, every ccm tree
    is a monotone lattice path from ``(0, 0)`` to ``(|X|-1, |Y|-1)``; there
    are at most ``binomial(|X| + |Y| - 2, |X| - 1)`` of them.
    """
    if not cost.ordered_convex:
        raise ValidationError("cost is not flagged ordered_convex")
    c = cost.matrix
    m, n = c.shape
    tol = 1e-9 * cost.scale()
    potentials = []
    steps = m + n - 2
    for east in itertools.combinations(range(steps), m - 1):
        east = set(east)
        phi = np.zeros(m)
        psi = np.zeros(n)
        x = y = 0
        psi[0] = phi[0] - c[0, 0]
        for k in range(steps):
            if k in east:
                x += 1
                phi[x] = c[x, y] + psi[y]
            else:
                y += 1
                psi[y] = phi[x] - c[x, y]
        if np.all(phi[:, None] - psi[None, :] <= c + tol):
            potentials.append(np.concatenate([phi, psi]))
    if not potentials:
        raise NumericalError("no staircase yields a pricing scheme; is the cost really convex?")
    return _family_from_potentials(cost, potentials)


def manhattan_bound(m, n):
    return math.comb(m + n - 2, m - 1)


def scheme_family(cost, max_size=MAX_ENUMERATION_SIZE):
    """Optimal pricing schemes, using the staircase path when it applies."""
    if cost.ordered_convex:
        return enumerate_mccm_ordered(cost)
    return enumerate_mccm(cost, max_size=max_size)
