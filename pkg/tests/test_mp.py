import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from psne.mp import mp_apply, mp_coefficients
from psne.oracle import exact_ppr

from conftest import fanout_graph, random_connected_graph


def mp_dense(s, g, wp):
    """Direct double loop over the definition."""
    n = g.n
    out = np.zeros_like(s)
    d = g.degrees
    for i in range(n):
        for j in range(n):
            acc = s[i, j] / (d[i] + 1)
            for h in g.neighbors(i):
                lam = wp[g.edge_id(i, h)] / (np.sqrt(d[h] + 1) * np.sqrt(d[i] + 1))
                acc += lam * s[h, j]
            out[i, j] = acc
    return out


def test_identity_on_p3(p3):
    m = mp_apply(sp.identity(3, format="csr"), p3, np.ones(2)).toarray()
    assert m[1, 1] == pytest.approx(1 / 3)
    assert m[1, 0] == pytest.approx(1 / (np.sqrt(2) * np.sqrt(3)))


def test_zero_pattern_weight(p4):
    rng = np.random.default_rng(0)
    s = rng.random((4, 4))
    m = mp_apply(sp.csr_matrix(s), p4, np.zeros(3)).toarray()
    np.testing.assert_allclose(m, s / (p4.degrees + 1)[:, None])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_matches_definition(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(int(rng.integers(2, 7)), 0.4, rng)
    s = rng.random((g.n, g.n)) * (rng.random((g.n, g.n)) < 0.5)
    wp = rng.random(g.m)
    np.testing.assert_allclose(mp_apply(sp.csr_matrix(s), g, wp).toarray(), mp_dense(s, g, wp), atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(seed, a, b):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(5, 0.5, rng)
    s1 = sp.random(5, 5, density=0.4, random_state=rng)
    s2 = sp.random(5, 5, density=0.4, random_state=rng)
    wp = rng.random(g.m)
    lhs = mp_apply(a * s1 + b * s2, g, wp).toarray()
    rhs = a * mp_apply(s1, g, wp).toarray() + b * mp_apply(s2, g, wp).toarray()
    np.testing.assert_allclose(lhs, rhs, atol=1e-11)


@pytest.mark.parametrize("seed", range(5))
def test_closed_form_with_unit_weights(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(int(rng.integers(2, 7)), 0.5, rng)
    pi = exact_ppr(g, 0.2)
    a_hat = g.adjacency().toarray() + np.eye(g.n)
    dh = a_hat.sum(axis=1) ** -0.5
    expect = (dh[:, None] * a_hat * dh[None, :]) @ pi
    np.testing.assert_allclose(mp_apply(sp.csr_matrix(pi), g, np.ones(g.m)).toarray(), expect, atol=1e-12)


def test_no_spurious_fill():
    rng = np.random.default_rng(4)
    g = random_connected_graph(30, 0.05, rng)
    s = sp.random(30, 30, density=0.05, random_state=rng, format="csr")
    m = mp_apply(s, g, rng.random(g.m))
    row_nnz = np.diff(s.indptr)
    bound = sum(row_nnz[i] + row_nnz[g.neighbors(i)].sum() for i in range(g.n))
    assert m.nnz <= bound
    lam = mp_coefficients(g, np.ones(g.m))
    # every stored column of row i comes from a contributing row
    for i in range(g.n):
        allowed = set(s[[i, *g.neighbors(i)]].indices)
        assert set(m[i].indices) <= allowed
    assert lam.nnz == g.n + 2 * g.m


def test_coefficients_bounded():
    rng = np.random.default_rng(2)
    g = random_connected_graph(10, 0.3, rng)
    lam = mp_coefficients(g, rng.random(g.m)).tocoo()
    d1 = g.degrees + 1
    assert np.all(lam.data <= 1 / np.sqrt(d1[lam.row] * d1[lam.col]) + 1e-15)
    assert np.all(lam.data <= 1) and np.all(lam.data >= 0)


def test_dimension_and_weight_checks(p3):
    with pytest.raises(ValueError):
        mp_apply(sp.identity(4, format="csr"), p3, np.ones(2))
    with pytest.raises(ValueError):
        mp_apply(sp.identity(3, format="csr"), p3, np.ones(3))


def test_fanout_graph_ppr_row():
    g = fanout_graph()
    row = exact_ppr(g, 0.15)[0]
    table = [0.204, 0.319, 0.054, 0.078, 0.078, 0.078, 0.140, 0.023, 0.023]
    np.testing.assert_allclose(row, table, atol=1e-3)
