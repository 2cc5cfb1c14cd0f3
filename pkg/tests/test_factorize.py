import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st
from scipy.linalg import subspace_angles

from psne.factorize import embed, log_filter, rsvd


class TestLogFilter:
    def test_values(self):
        n, mu = 10, 2.0
        m = sp.csr_matrix(np.array([[1 / (n * mu), np.e ** 2 / (n * mu)], [-0.3, 0.0]]))
        out = log_filter(m, mu, n).toarray()
        np.testing.assert_allclose(out, [[0.0, 2.0], [0.0, 0.0]], atol=1e-12)
        assert log_filter(m, mu, n).nnz == 1

    @given(st.lists(st.floats(1e-6, 10), min_size=2, max_size=20))
    def test_monotone_and_pattern_subset(self, vals):
        x = np.sort(np.array(vals))
        m = sp.csr_matrix(x[None, :])
        out = log_filter(m, 3.0, 7)
        dense = out.toarray().ravel()
        assert np.all(np.diff(dense) >= 0)
        assert set(out.indices) <= set(m.indices)

    def test_rejects_bad_mu(self):
        with pytest.raises(ValueError):
            log_filter(sp.identity(2, format="csr"), 0.0, 2)


class TestRsvd:
    def test_diagonal(self):
        u, s, v = rsvd(sp.diags([4.0, 3.0, 2.0, 1.0]).tocsr(), 2, oversample=2, power_iters=2, rng=0)
        np.testing.assert_allclose(s, [4, 3], atol=1e-6)

    def test_rank3_exact(self):
        rng = np.random.default_rng(1)
        m = rng.standard_normal((50, 3)) @ rng.standard_normal((3, 50))
        u, s, v = rsvd(m, 3, rng=2)
        err = np.linalg.norm(m - (u * s) @ v.T) / np.linalg.norm(m)
        assert err <= 1e-6

    @pytest.mark.parametrize("seed", range(3))
    def test_against_dense_svd(self, seed):
        rng = np.random.default_rng(seed)
        m = sp.random(120, 120, density=0.1, random_state=rng, format="csr")
        u, s, v = rsvd(m, 5, rng=seed)
        exact = np.linalg.svd(m.toarray(), compute_uv=False)[:5]
        np.testing.assert_allclose(s, exact, rtol=0.01)
        assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
        for q in (u, v):
            assert np.abs(q.T @ q - np.eye(5)).max() <= 1e-8

    @pytest.mark.parametrize("seed", range(4))
    def test_subspace_with_gap(self, seed):
        # low rank plus a tail well below the k-th value; a gap alone does not
        # bound the angle when the tail decays slowly
        rng = np.random.default_rng(seed)
        n = 200
        q1, _ = np.linalg.qr(rng.standard_normal((n, n)))
        q2, _ = np.linalg.qr(rng.standard_normal((n, n)))
        spectrum = np.concatenate([[10, 9, 8, 7], 1.0 * 0.97 ** np.arange(n - 4)])
        m = (q1 * spectrum) @ q2.T
        u, s, _ = rsvd(m, 4, power_iters=2, rng=seed)
        assert subspace_angles(u, q1[:, :4]).max() <= 1e-3

    def test_bad_k(self):
        with pytest.raises(ValueError):
            rsvd(np.eye(5), 0)
        with pytest.raises(ValueError):
            rsvd(np.eye(5), 3, oversample=3)

    def test_seeded_determinism(self):
        m = sp.random(40, 40, density=0.2, random_state=3, format="csr")
        a = rsvd(m, 4, rng=9)
        b = rsvd(m, 4, rng=9)
        for x, y in zip(a, b):
            assert np.array_equal(x, y)


class TestEmbed:
    def test_scaling(self):
        np.testing.assert_allclose(embed(np.eye(2), [4.0, 1.0]), [[2, 0], [0, 1]])

    def test_zero_sigma(self):
        assert np.all(embed(np.ones((3, 2)), [0.0, 0.0]) == 0)

    def test_gram(self):
        q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((20, 4)))
        sigma = np.array([5.0, 3.0, 2.0, 0.5])
        e = embed(q, sigma)
        np.testing.assert_allclose(e.T @ e, np.diag(sigma), atol=1e-12)

    def test_negative_sigma(self):
        with pytest.raises(ValueError):
            embed(np.eye(2), [1.0, -1e-3])
