import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from mursdp.numerics import ValidationError
from mursdp.transport import (
    CostFunction,
    PricingScheme,
    enumerate_mccm,
    enumerate_mccm_ordered,
    equality_set,
    find_positive_cycle,
    is_ccm,
    manhattan_bound,
    pricing_from_ccm,
    scheme_family,
    transport_cost_dual,
    transport_cost_primal,
    tv_distance,
)


# ---------------------------------------------------------------- oracles


def lp_oracle(c, p, q):
    """Transport cost from a generic LP solver (HiGHS)."""
    m, n = c.shape
    A = np.zeros((m + n, m * n))
    for i in range(m):
        A[i, i * n : (i + 1) * n] = 1
    for j in range(n):
        A[m + j, j::n] = 1
    res = linprog(c.ravel(), A_eq=A, b_eq=np.concatenate([p, q]), bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


def vertex_oracle(c):
    """Normalized extreme pricing schemes by brute force over spanning trees of K_{m,n}."""
    m, n = c.shape
    pairs = [(x, y) for x in range(m) for y in range(n)]
    out = set()
    for tree in itertools.combinations(pairs, m + n - 1):
        phi = [None] * m
        psi = [None] * n
        phi[0] = 0.0
        changed = True
        while changed:
            changed = False
            for x, y in tree:
                if phi[x] is not None and psi[y] is None:
                    psi[y] = phi[x] - c[x, y]
                    changed = True
                elif psi[y] is not None and phi[x] is None:
                    phi[x] = c[x, y] + psi[y]
                    changed = True
        if any(v is None for v in phi + psi):
            continue
        phi, psi = np.array(phi), np.array(psi)
        if np.all(phi[:, None] - psi[None, :] <= c + 1e-9):
            out.add(tuple(np.round(np.concatenate([phi, psi]) / 1e-9).astype(np.int64).tolist()))
    return out


def random_cost(rng, m, n):
    c = rng.random((m, n))
    if m == n:
        np.fill_diagonal(c, 0.0)
        c[~np.eye(m, dtype=bool)] += 1e-3
    return CostFunction.from_matrix(c)


# ---------------------------------------------------------------- cost functions


def test_cost_validation():
    with pytest.raises(ValidationError):
        CostFunction.from_matrix([[0, 1], [1, 0.5]])
    with pytest.raises(ValidationError):
        CostFunction.from_matrix([[0, 0], [1, 0]])
    with pytest.raises(ValidationError):
        CostFunction.from_matrix([[0, np.inf], [1, 0]])
    c = CostFunction.from_matrix([[1.0, 2.0, 0.0]])
    assert c.shape == (1, 3) and not c.is_square


def test_cost_flags():
    assert CostFunction.discrete(3).is_metric
    assert CostFunction.discrete(3).is_discrete_metric
    q = CostFunction.quadratic([-1, 0, 1])
    assert q.ordered_convex and not q.is_metric  # (x-y)^2 violates the triangle inequality
    assert CostFunction.power([0, 1, 2], 1.0).is_metric
    assert not CostFunction.power([0, 1, 2], 0.5).ordered_convex
    assert not CostFunction.quadratic([1, 0, -1]).ordered_convex


# ---------------------------------------------------------------- primal


def test_identity_coupling():
    c = CostFunction.quadratic([0, 1, 2])
    p = np.array([0.2, 0.5, 0.3])
    cost, plan = transport_cost_primal(c, p, p)
    assert cost == pytest.approx(0.0, abs=1e-15)
    assert np.allclose(plan, np.diag(p))


def test_point_mass_target():
    # only coupling: move everything to y = 2
    c = CostFunction.quadratic([1, 2])
    cost, plan = transport_cost_primal(c, [0.5, 0.5], [0.0, 1.0])
    assert cost == pytest.approx(0.5, abs=1e-15)


def test_discrete_metric_example():
    c = CostFunction.discrete(2)
    assert transport_cost_primal(c, [0.7, 0.3], [0.3, 0.7])[0] == pytest.approx(0.4, abs=1e-15)


def test_unnormalized_rejected():
    with pytest.raises(ValidationError):
        transport_cost_primal(CostFunction.discrete(2), [0.7, 0.2], [0.5, 0.5])
    with pytest.raises(ValidationError):
        transport_cost_primal(CostFunction.discrete(2), [0.5, 0.5], [0.2, 0.3, 0.5])


def test_primal_matches_lp_oracle(rng):
    for _ in range(150):
        m, n = rng.integers(1, 7, size=2)
        c = random_cost(rng, m, n)
        p, q = rng.dirichlet(np.ones(m)), rng.dirichlet(np.ones(n))
        cost, plan = transport_cost_primal(c, p, q)
        assert cost == pytest.approx(lp_oracle(c.matrix, p, q), abs=1e-9)
        assert np.allclose(plan.sum(axis=1), p, atol=1e-9) and np.allclose(plan.sum(axis=0), q, atol=1e-9)
        assert np.all(plan >= 0)


def test_optimal_plan_has_ccm_support(rng):
    for _ in range(100):
        m, n = rng.integers(1, 6, size=2)
        c = random_cost(rng, m, n)
        p, q = rng.dirichlet(np.ones(m)), rng.dirichlet(np.ones(n))
        _, plan = transport_cost_primal(c, p, q)
        assert is_ccm(c, [tuple(e) for e in np.argwhere(plan > 1e-9)])


def test_faithfulness(rng):
    c = CostFunction.quadratic([0, 1, 3, 4])
    for _ in range(50):
        p, q = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
        assert transport_cost_primal(c, p, q)[0] > 0
        assert transport_cost_primal(c, p, p)[0] <= 1e-12


# ---------------------------------------------------------------- discrete metric


def test_tv_examples():
    assert tv_distance([0.5, 0.5], [0.5, 0.5]) == 0
    assert tv_distance([1, 0], [0, 1]) == 1
    assert tv_distance([0.7, 0.3], [0.3, 0.7]) == pytest.approx(0.4, abs=1e-15)
    with pytest.raises(ValidationError):
        tv_distance([1, 0], [1, 0, 0])


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_discrete_metric_is_tv(d, seed):
    rng = np.random.default_rng(seed)
    p, q = rng.dirichlet(np.ones(d)), rng.dirichlet(np.ones(d))
    assert abs(transport_cost_primal(CostFunction.discrete(d), p, q)[0] - tv_distance(p, q)) <= 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_discrete_metric_family(d):
    fam = enumerate_mccm(CostFunction.discrete(d))
    # schemes are indicator functions of proper nonempty subsets
    assert len(fam) == 2**d - 2
    for s in fam:
        assert np.allclose(s.phi, s.psi)
        assert set(np.round(s.phi - s.phi.min(), 12)) == {0.0, 1.0}
        assert all((x, x) in s.edges for x in range(d))


def test_discrete_metric_two_points_centered():
    for s in enumerate_mccm(CostFunction.discrete(2)):
        centered = s.phi - s.phi.mean()
        assert np.all(np.abs(centered) <= 0.5 + 1e-15)


def test_dual_examples():
    c = CostFunction.discrete(3)
    fam = scheme_family(c)
    assert transport_cost_dual(c, [1, 0, 0], [0, 0, 1], fam)[0] == pytest.approx(1.0)
    assert transport_cost_dual(c, [0.2, 0.3, 0.5], [0.2, 0.3, 0.5], fam)[0] == pytest.approx(0.0, abs=1e-15)


# ---------------------------------------------------------------- ccm sets


def test_is_ccm_examples():
    c = CostFunction.quadratic([1, 2])
    assert not is_ccm(c, [(0, 1), (1, 0)])
    cycle = find_positive_cycle(c, [(0, 1), (1, 0)])
    assert cycle is not None and len(cycle) >= 2
    for d in (2, 3, 5):
        assert is_ccm(CostFunction.discrete(d), [(x, x) for x in range(d)])
    assert is_ccm(CostFunction.power([0, 1, 2, 3], 1.0), [(x, x) for x in range(4)])


def test_equality_sets_are_ccm(rng):
    for _ in range(40):
        m, n = rng.integers(1, 5, size=2)
        c = random_cost(rng, m, n)
        for s in scheme_family(c):
            assert is_ccm(c, s.edges)
            assert s.edges == equality_set(c, s.phi, s.psi)


def test_pricing_from_ccm_singleton():
    c = CostFunction.quadratic([1, 2])
    plus, minus = pricing_from_ccm(c, [(0, 0)])
    for s in (plus, minus):
        assert s.is_valid(c)
        assert s.phi[0] - s.psi[0] == pytest.approx(c.matrix[0, 0])
    assert np.all(plus.phi >= minus.phi) and np.all(plus.psi >= minus.psi)


def test_pricing_from_ccm_diagonal_sandwich():
    c = CostFunction.discrete(3)
    plus, minus = pricing_from_ccm(c, [(x, x) for x in range(3)])
    zero = np.zeros(3)
    assert np.all(minus.phi <= zero) and np.all(zero <= plus.phi)
    for s in (plus, minus):
        assert s.is_valid(c)
        assert {(x, x) for x in range(3)} <= equality_set(c, s.phi, s.psi)


def test_pricing_from_ccm_errors():
    c = CostFunction.quadratic([1, 2])
    with pytest.raises(ValidationError, match="not cyclically"):
        pricing_from_ccm(c, [(0, 1), (1, 0)])
    with pytest.raises(ValidationError):
        pricing_from_ccm(c, [])
    with pytest.raises(ValidationError):
        pricing_from_ccm(c, [(1, 1)])


def test_pricing_from_ccm_unreachable_is_infinite():
    c = CostFunction.quadratic([0, 1, 2])
    plus, minus = pricing_from_ccm(c, [(0, 0)])
    assert np.isfinite(plus.phi[0]) and np.isfinite(minus.phi[0])
    # with a single edge every other vertex is only bounded on one side
    assert np.any(np.isinf(np.concatenate([plus.phi, plus.psi, minus.phi, minus.psi])))


def test_sandwich_property(rng):
    for _ in range(30):
        m, n = rng.integers(2, 5, size=2)
        c = random_cost(rng, m, n)
        fam = scheme_family(c)
        for s in fam:
            edges = sorted(s.edges)
            if not any(x == 0 for x, _ in edges):
                continue
            # any subset containing an x0 edge is ccm; s is compatible with it
            keep = [e for e in edges if e[0] == 0][:1] + [e for e in edges if rng.random() < 0.5]
            plus, minus = pricing_from_ccm(c, keep)
            t = s.normalized()
            assert set(keep) <= plus.edges
            assert np.all(minus.phi <= t.phi + 1e-9) and np.all(t.phi <= plus.phi + 1e-9)
            assert np.all(minus.psi <= t.psi + 1e-9) and np.all(t.psi <= plus.psi + 1e-9)
            for v in (plus, minus):
                finite_x = np.isfinite(v.phi)
                finite_y = np.isfinite(v.psi)
                gap = v.phi[finite_x][:, None] - v.psi[finite_y][None, :] - c.matrix[np.ix_(finite_x, finite_y)]
                assert np.all(gap <= 1e-9)
                for x, y in keep:
                    assert v.phi[x] - v.psi[y] == pytest.approx(c.matrix[x, y], abs=1e-9)


# ---------------------------------------------------------------- enumeration


def test_single_point():
    c = CostFunction.from_matrix([[0.0]])
    fam = enumerate_mccm(c)
    assert len(fam) == 1
    s = fam.schemes[0]
    assert s.phi[0] == 0 and s.psi[0] == 0 and s.edges == {(0, 0)}


def test_rectangular_single_row():
    c = CostFunction.from_matrix([[0.3, 0.1, 0.7]])
    fam = enumerate_mccm(c)
    assert len(fam) == 1
    assert fam.schemes[0].edges == {(0, 0), (0, 1), (0, 2)}


def test_family_matches_vertex_oracle(rng):
    for _ in range(60):
        m, n = rng.integers(1, 4, size=2)
        c = random_cost(rng, m, n)
        got = {s.key() for s in enumerate_mccm(c)}
        assert got == vertex_oracle(c.matrix)


def test_family_on_degenerate_costs():
    # ties everywhere: vertices of the dual polytope are shared by many trees
    for c in (
        CostFunction.from_matrix(np.ones((2, 3))),
        CostFunction.discrete(3),
        CostFunction.power([0, 1, 2], 1.0),
        CostFunction.from_matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]]),
    ):
        assert {s.key() for s in enumerate_mccm(c)} == vertex_oracle(c.matrix)


def test_enumeration_reproduces_primal(rng):
    for _ in range(60):
        m, n = rng.integers(1, 6, size=2)
        c = random_cost(rng, m, n)
        fam = enumerate_mccm(c)
        for _ in range(5):
            p, q = rng.dirichlet(np.ones(m)), rng.dirichlet(np.ones(n))
            assert abs(transport_cost_dual(c, p, q, fam)[0] - transport_cost_primal(c, p, q)[0]) <= 1e-9


def test_size_bound():
    with pytest.raises(ValidationError, match="ordered"):
        enumerate_mccm(CostFunction.discrete(9))
    # the ordered path has no such bound
    fam = scheme_family(CostFunction.quadratic(np.arange(9)))
    assert len(fam) <= manhattan_bound(9, 9)


def test_metric_family_lipschitz(rng):
    for _ in range(10):
        pts = np.sort(rng.random(4) * 3)
        c = CostFunction.power(pts, 1.0)
        for s in enumerate_mccm(c):
            assert np.allclose(s.phi, s.psi, atol=1e-12)
            diff = np.abs(s.phi[:, None] - s.phi[None, :])
            assert np.all(diff <= c.matrix + 1e-12)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_quadratic_family_count(k):
    c = CostFunction.quadratic(np.arange(k))
    ordered = enumerate_mccm_ordered(c)
    general = enumerate_mccm(c)
    assert len(ordered) <= math.comb(2 * k - 2, k - 1)
    assert [s.key() for s in ordered] == [s.key() for s in general]


def test_spin1_quadratic_family():
    c = CostFunction.quadratic([-1, 0, 1])
    fam = scheme_family(c)
    assert len(fam) == 6
    rng = np.random.default_rng(5)
    for _ in range(100):
        p, q = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(3))
        assert abs(transport_cost_dual(c, p, q, fam)[0] - lp_oracle(c.matrix, p, q)) <= 1e-9


def test_ordered_sets_are_monotone(rng):
    for alpha in (1.0, 1.5, 2.0, 3.0):
        c = CostFunction.power(np.sort(rng.random(4)), alpha)
        for s in enumerate_mccm_ordered(c):
            for (x1, y1), (x2, y2) in itertools.combinations(sorted(s.edges), 2):
                # no crossing pairs x1 < x2 with y1 > y2
                assert not (x1 < x2 and y1 > y2) or abs(c.matrix[x1, y2] + c.matrix[x2, y1] - c.matrix[x1, y1] - c.matrix[x2, y2]) < 1e-9


def test_ordered_requires_flag():
    with pytest.raises(ValidationError):
        enumerate_mccm_ordered(CostFunction.discrete(3))


def test_dual_rejects_mismatch():
    fam = scheme_family(CostFunction.discrete(2))
    with pytest.raises(ValidationError):
        transport_cost_dual(CostFunction.discrete(3), [1, 0, 0], [0, 1, 0], fam)


def test_argmax_tie_breaks_low():
    c = CostFunction.discrete(2)
    fam = scheme_family(c)
    _, k = transport_cost_dual(c, [0.5, 0.5], [0.5, 0.5], fam)
    assert k == 0


def test_scheme_key_is_shift_invariant():
    s = PricingScheme(np.array([1.0, 2.0]), np.array([0.5, 1.0]))
    t = PricingScheme(s.phi + 3.0, s.psi + 3.0)
    assert s.key() == t.key()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_duality_property(m, n, seed):
    rng = np.random.default_rng(seed)
    c = random_cost(rng, m, n)
    fam = scheme_family(c)
    p, q = rng.dirichlet(np.ones(m)), rng.dirichlet(np.ones(n))
    primal = transport_cost_primal(c, p, q)[0]
    dual, k = transport_cost_dual(c, p, q, fam)
    assert abs(primal - dual) <= 1e-9
    assert fam.schemes[k].is_valid(c, tol=1e-12)
