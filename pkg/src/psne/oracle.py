"""Dense reference computations for small graphs and error-bound audits."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from .config import PsneConfig, alpha_sum
from .factorize import log_filter
from .graph import Graph
from .mp import mp_apply, mp_coefficients

DENSE_CAP = 5000
SAMPLED_ROWS = 64


class DenseCapError(ValueError):
    pass


def _check_cap(g: Graph, cap: int) -> None:
    if g.n > cap:
        raise DenseCapError(f"graph has {g.n} nodes, above the dense cap of {cap}")


def transition_matrix(g: Graph) -> np.ndarray:
    return g.adjacency().toarray() / g.degrees[:, None]


def exact_ppr(g: Graph, alpha: float, tol: float = 1e-12, cap: int = DENSE_CAP) -> np.ndarray:
    """Sum ``alpha (1-alpha)^r P^r`` until a term's largest entry drops below ``tol``."""
    _check_cap(g, cap)
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    p = transition_matrix(g)
    term = alpha * np.eye(g.n)
    total = term.copy()
    while np.abs(term).max() >= tol:
        term = (1.0 - alpha) * (term @ p)
        total += term
    return total


def truncated_ppr(g: Graph, alpha: float, T: int, cap: int = DENSE_CAP) -> np.ndarray:
    """``sum_{r=0..T} alpha (1-alpha)^r P^r``."""
    _check_cap(g, cap)
    p = transition_matrix(g)
    term = alpha * np.eye(g.n)
    total = term.copy()
    for _ in range(T):
        term = (1.0 - alpha) * (term @ p)
        total += term
    return total


def polynomial_laplacian(g: Graph, beta, cap: int = DENSE_CAP) -> np.ndarray:
    """``D - sum_r beta_r D P^r`` for ``r = 1..len(beta)``."""
    _check_cap(g, cap)
    beta = np.asarray(beta, dtype=np.float64)
    if abs(beta.sum() - 1.0) > 1e-12 or np.any(beta < 0):
        raise ValueError("beta must be nonnegative and sum to 1")
    p = transition_matrix(g)
    d = g.degrees
    poly = np.zeros((g.n, g.n))
    power = np.diag(d)
    for b in beta:
        power = power @ p
        poly += b * power
    return np.diag(d) - poly


def ppr_beta(alpha: float, T: int) -> np.ndarray:
    r = np.arange(1, T + 1)
    w = alpha * (1.0 - alpha) ** r
    return w / w.sum()


def ppr_rows(g: Graph, alpha: float, rows, tol: float = 1e-12) -> np.ndarray:
    """Exact PPR rows by power iteration on sparse ``P``."""
    p_t = sp.csr_matrix(g.adjacency().multiply(1.0 / g.degrees[:, None])).T.tocsr()
    rows = np.asarray(rows)
    term = np.zeros((g.n, len(rows)))
    term[rows, np.arange(len(rows))] = alpha
    total = term.copy()
    while np.abs(term).max() >= tol:
        term = (1.0 - alpha) * (p_t @ term)
        total += term
    return total.T


@dataclass
class AuditReport:
    n: int
    alpha: float
    T: int
    mu: float
    truncation_error: float
    truncation_bound: float
    laplacian_asymmetry: float
    laplacian_row_sum: float
    by_c: dict = field(default_factory=dict)
    sampled_rows: bool = False

    @property
    def truncation_ok(self) -> bool:
        return self.truncation_error <= self.truncation_bound

    @property
    def laplacian_ok(self) -> bool:
        return self.laplacian_asymmetry <= 1e-9 and self.laplacian_row_sum <= 1e-9

    @property
    def eps_monotone(self) -> bool:
        eps = [self.by_c[c]["eps_hat"] for c in sorted(self.by_c)]
        return all(b <= a for a, b in zip(eps, eps[1:]))

    @property
    def mp_bound_ok(self) -> bool:
        return all(v["mp_error"] <= v["mp_bound"] for v in self.by_c.values())

    @property
    def ok(self) -> bool:
        return self.truncation_ok and self.laplacian_ok

    def lines(self) -> list[str]:
        out = [f"n={self.n}", f"alpha={self.alpha}", f"T={self.T}", f"mu={self.mu}",
               f"sampled_rows={int(self.sampled_rows)}",
               f"truncation_error={self.truncation_error:.9g}",
               f"truncation_bound={self.truncation_bound:.9g}",
               f"truncation_ok={int(self.truncation_ok)}",
               f"laplacian_asymmetry={self.laplacian_asymmetry:.3g}",
               f"laplacian_row_sum={self.laplacian_row_sum:.3g}",
               f"laplacian_ok={int(self.laplacian_ok)}"]
        for c in sorted(self.by_c):
            for key, val in self.by_c[c].items():
                out.append(f"c{c:g}.{key}={val:.9g}")
        if self.by_c:
            out.append(f"eps_monotone={int(self.eps_monotone)}")
            out.append(f"mp_bound_ok={int(self.mp_bound_ok)}")
        return out


def _fro(x) -> float:
    return float(np.linalg.norm(x.toarray() if sp.issparse(x) else x))


def audit_bounds(g: Graph, cfg: PsneConfig, runs: int = 5, cs=(1, 4, 16, 64),
                 cap: int = DENSE_CAP) -> AuditReport:
    """Measure the sparsifier's Frobenius errors against exact PPR.

    For every sample factor ``c`` and each of ``runs`` seeds, records
    ``||Pi - Pi~||``, ``||Pi' - Pi~||``, the filtered MP error and the implied
    ``eps_hat = ||Pi' - Pi~|| / (4 alpha_sum sqrt(n))``; medians are reported.
    Graphs above the dense cap are audited on 64 uniformly sampled rows,
    with Frobenius norms scaled up by ``sqrt(n / 64)``.
    """
    from .sparsifier import build_sparsifier

    alpha, T = cfg.alpha, cfg.T
    asum = alpha_sum(alpha, T)
    sampled = g.n > cap
    if sampled:
        n_rows = min(SAMPLED_ROWS, g.n)
        rows = np.sort(np.random.default_rng(cfg.seed).choice(g.n, n_rows, replace=False))
        scale = math.sqrt(g.n / n_rows)
        pi = ppr_rows(g, alpha, rows)
        pi_t = _truncated_rows(g, alpha, T, rows)
        lam_rows = mp_coefficients(g, np.ones(g.m))[rows]
        needed = np.unique(lam_rows.indices)
        # MP rows only gather the sampled rows' neighbourhoods
        m_exact_rows = lam_rows[:, needed] @ ppr_rows(g, alpha, needed)
    else:
        rows = slice(None)
        scale = 1.0
        pi = exact_ppr(g, alpha, cap=cap)
        pi_t = truncated_ppr(g, alpha, T, cap=cap)
        m_exact_rows = mp_apply(sp.csr_matrix(pi), g, np.ones(g.m)).toarray()
    trunc = scale * _fro(pi - pi_t)
    report = AuditReport(n=g.n, alpha=alpha, T=T, mu=cfg.mu, truncation_error=trunc,
                         truncation_bound=math.sqrt(g.n) * (1.0 - alpha) ** (T + 1),
                         laplacian_asymmetry=0.0, laplacian_row_sum=0.0, sampled_rows=sampled)
    d_max = float(g.degrees.max())
    for c in cs:
        errs, errs_t, mp_errs, mp_raw = [], [], [], []
        for run in range(runs):
            run_cfg = replace(cfg, c=float(c), seed=cfg.seed + run)
            out = build_sparsifier(g, run_cfg)
            lap = out.l_tilde
            # both measured relative to the largest diagonal entry
            scale_l = max(float(lap.diagonal().max()), 1e-300)
            report.laplacian_asymmetry = max(report.laplacian_asymmetry,
                                             abs(lap - lap.T).max() / scale_l)
            report.laplacian_row_sum = max(report.laplacian_row_sum,
                                           float(np.abs(np.asarray(lap.sum(axis=1))).max()) / scale_l)
            m_exact = m_exact_rows
            if sampled:
                pi_tilde = out.pi_tilde[rows].toarray()
                m_tilde = (lam_rows @ out.pi_tilde).toarray()
            else:
                pi_tilde = out.pi_tilde.toarray()
                m_tilde = mp_apply(out.pi_tilde, g, np.ones(g.m)).toarray()
            errs.append(scale * _fro(pi - pi_tilde))
            errs_t.append(scale * _fro(pi_t - pi_tilde))
            mp_raw.append(scale * _fro(m_exact - m_tilde))
            f_exact = log_filter(sp.csr_matrix(m_exact), cfg.mu, g.n)
            f_tilde = log_filter(sp.csr_matrix(m_tilde), cfg.mu, g.n)
            mp_errs.append(scale * _fro(f_exact - f_tilde))
        med_t = float(np.median(errs_t))
        med = float(np.median(errs))
        report.by_c[c] = {
            "pi_error": med,
            "pi_trunc_error": med_t,
            "eps_hat": med_t / (4.0 * asum * math.sqrt(g.n)),
            "mp_unfiltered_error": float(np.median(mp_raw)),
            "mp_error": float(np.median(mp_errs)),
            "mp_bound": math.sqrt(d_max + 1.0) * med,
        }
    return report


def _truncated_rows(g: Graph, alpha: float, T: int, rows) -> np.ndarray:
    p_t = sp.csr_matrix(g.adjacency().multiply(1.0 / g.degrees[:, None])).T.tocsr()
    term = np.zeros((g.n, len(rows)))
    term[rows, np.arange(len(rows))] = alpha
    total = term.copy()
    for _ in range(T):
        term = (1.0 - alpha) * (p_t @ term)
        total += term
    return total.T


def implied_eps(pi_trunc: np.ndarray, pi_tilde, alpha: float, T: int) -> float:
    """``||Pi' - Pi~||_F / (4 alpha_sum sqrt(n))``."""
    n = pi_trunc.shape[0]
    return _fro(pi_trunc - (pi_tilde.toarray() if sp.issparse(pi_tilde) else pi_tilde)) / (
        4.0 * alpha_sum(alpha, T) * math.sqrt(n))
