"""Dense numerical kernels: SVD, smallest singular triplet, minimum-norm least
squares, and minimizers of a quadratic on the unit sphere."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.optimize import brentq

# above this order the default smallest_triplet path switches to inverse iteration
DENSE_SVD_LIMIT = 2000


@dataclass(frozen=True)
class SvdResult:
    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray


def _check_finite(C):
    C = np.asarray(C, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {C.shape}")
    if not np.all(np.isfinite(C)):
        raise ValueError("matrix has non-finite entries")
    return C


def svd(C) -> SvdResult:
    """Full SVD with singular values sorted descending (C = U diag(s) V^T)."""
    C = _check_finite(C)
    U, s, Vt = np.linalg.svd(C)
    return SvdResult(U=U, sigma=s, V=Vt.T)


def _inverse_iteration(C, v0, tol, maxiter=30):
    """Inverse iteration on C^T C through one LU of C.

    Returns None when the LU is singular or the residual target is not met,
    so the caller can fall back to a dense SVD.
    """
    try:
        with np.errstate(all="raise"), warnings.catch_warnings():
            # an exact zero pivot is handled below
            warnings.simplefilter("ignore", sla.LinAlgWarning)
            lu = sla.lu_factor(C, check_finite=False)
    except (FloatingPointError, sla.LinAlgError, ValueError):
        return None
    if np.min(np.abs(np.diag(lu[0]))) == 0.0:
        return None
    v = v0 / np.linalg.norm(v0)
    for _ in range(maxiter):
        w = sla.lu_solve(lu, v, trans=1, check_finite=False)
        x = sla.lu_solve(lu, w, check_finite=False)
        nx, nw = np.linalg.norm(x), np.linalg.norm(w)
        if not (np.isfinite(nx) and np.isfinite(nw)) or nx == 0.0 or nw == 0.0:
            return None
        # C x = w, so w/||w|| is the left vector without forming C v / s
        v = x / nx
        u = w / nw
        s = nw / nx
        if max(np.linalg.norm(C @ v - s * u), np.linalg.norm(C.T @ u - s * v)) <= tol:
            return u, s, v
    return None


def smallest_triplet(C, v0=None, tol: float | None = None):
    """Smallest singular triplet (u, sigma_min, v) with C v = sigma_min u.

    Without ``v0`` a dense SVD is used (for n <= DENSE_SVD_LIMIT). With a warm
    start ``v0``, e.g. the vector from the previous iterate of a solver, the
    triplet is refined by inverse iteration and checked against the residual
    target ``tol`` (default 1e-12 * ||C||_F); on failure the dense SVD is used.
    """
    C = _check_finite(C)
    n = C.shape[0]
    if tol is None:
        tol = 1e-12 * max(np.linalg.norm(C), np.finfo(float).tiny)
    if v0 is None and n > DENSE_SVD_LIMIT:
        # one inverse step on a random vector sketches the bottom of the spectrum
        rng = np.random.default_rng(0)
        try:
            v0 = np.linalg.solve(C.T, rng.standard_normal(n))
        except np.linalg.LinAlgError:
            v0 = None
    if v0 is not None:
        out = _inverse_iteration(C, np.asarray(v0, dtype=float), tol)
        if out is not None:
            return out
    res = svd(C)
    return res.U[:, -1], float(res.sigma[-1]), res.V[:, -1]


def minnorm_lstsq(M, r, rcond: float | None = None) -> np.ndarray:
    """Minimum-norm least-squares solution via the SVD pseudoinverse."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    r = np.asarray(r, dtype=float)
    q, p = M.shape
    if r.shape != (q,):
        raise ValueError(f"right-hand side has shape {r.shape}, expected {(q,)}")
    if rcond is None:
        rcond = np.finfo(float).eps * max(q, p)
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros(p)
    keep = s > rcond * s[0]
    coef = (U[:, keep].T @ r) / s[keep]
    return Vt[keep].T @ coef


def sphere_quadratic_min(Q, b, sym_tol: float = 1e-10):
    """Global minimizer of v^T Q v + 2 b^T v subject to ||v|| = 1.

    Returns ``(v, value, lam)`` where ``lam`` is the Lagrange multiplier with
    (Q - lam I) v = -b and lam <= lambda_min(Q).
    """
    Q = np.asarray(Q, dtype=float)
    b = np.asarray(b, dtype=float)
    n = Q.shape[0]
    if Q.shape != (n, n) or b.shape != (n,):
        raise ValueError("Q must be n x n and b of length n")
    if np.linalg.norm(Q - Q.T) > sym_tol * max(1.0, np.linalg.norm(Q)):
        raise ValueError("Q is not symmetric")
    evals, evecs = np.linalg.eigh(0.5 * (Q + Q.T))
    v, lam = sphere_quadratic_min_eig(evals, evecs, b)
    return v, float(v @ Q @ v + 2.0 * b @ v), lam


def sphere_quadratic_min_eig(evals, evecs, b, rtol: float = 1e-13, maxiter: int = 100):
    """Same problem with Q = evecs diag(evals) evecs^T already diagonalized.

    Solves the secular equation 1/||v(t)|| = 1 in the shift t = lambda_min - lam
    with safeguarded Newton steps; the hard case (b orthogonal to the bottom
    eigenspace and ||v(0)|| <= 1) is completed with a bottom eigenvector.
    """
    order = np.argsort(evals)
    evals = np.asarray(evals, dtype=float)[order]
    evecs = np.asarray(evecs, dtype=float)[:, order]
    beta = evecs.T @ b
    lam_min = evals[0]
    gaps = evals - lam_min
    scale = max(np.max(np.abs(evals)), np.linalg.norm(b), np.finfo(float).tiny)
    bottom = gaps <= 1e-12 * scale
    bnorm = np.linalg.norm(beta)

    if bnorm == 0.0:
        return evecs[:, 0].copy(), lam_min

    beta_bottom = np.linalg.norm(beta[bottom])
    if beta_bottom <= 1e-14 * bnorm:
        # candidate with t = 0 on the non-bottom part
        coef = np.zeros_like(beta)
        coef[~bottom] = -beta[~bottom] / gaps[~bottom]
        cn = np.linalg.norm(coef)
        if cn <= 1.0:
            k = np.flatnonzero(bottom)[0]
            coef[k] = np.sqrt(max(0.0, 1.0 - cn * cn))
            return evecs @ coef, lam_min

    # h(t) = 1/||v(t)|| - 1 is increasing and nearly linear; root in (0, ||b||]
    lo, hi = 0.0, bnorm
    t = hi
    for _ in range(maxiter):
        d = gaps + t
        nv = np.sqrt(np.sum((beta / d) ** 2))
        h = 1.0 / nv - 1.0
        if h < 0:
            lo = t
        else:
            hi = t
        if abs(h) <= rtol:
            break
        # d||v||/dt = -sum beta^2/d^3 / ||v||
        dnv = -np.sum(beta**2 / d**3) / nv
        dh = -dnv / nv**2
        t_new = t - h / dh if dh > 0 else 0.5 * (lo + hi)
        if not (lo < t_new < hi):
            t_new = 0.5 * (lo + hi)
        if abs(t_new - t) <= rtol * max(t, np.finfo(float).tiny):
            t = t_new
            break
        t = t_new
    coef = -beta / (gaps + t)
    v = evecs @ coef
    v /= np.linalg.norm(v)
    return v, lam_min - t


def sphere_quadratic_local_min_eig(evals, evecs, b):
    """Local-nonglobal minimizer of v^T Q v + 2 b^T v on the unit sphere.

    Such a point has its multiplier lam strictly between the two smallest
    eigenvalues of Q and sits on the branch where ||(Q - lam I)^{-1} b|| decreases;
    it exists for at most one lam. Its component along the bottom eigenvector
    has the opposite sign from the global minimizer's. Returns ``(v, lam)`` or
    None when there is no such point (e.g. a repeated bottom eigenvalue or a
    large ||b||).
    """
    order = np.argsort(evals)
    evals = np.asarray(evals, dtype=float)[order]
    evecs = np.asarray(evecs, dtype=float)[:, order]
    if evals.size < 2:
        return None
    beta = evecs.T @ b
    gaps = evals - evals[0]
    g2 = gaps[1]
    scale = max(np.max(np.abs(evals)), np.linalg.norm(b), np.finfo(float).tiny)
    if g2 <= 1e-12 * scale or abs(beta[0]) <= 1e-14 * max(np.linalg.norm(beta), np.finfo(float).tiny):
        return None

    def psi(s):
        return np.sum((beta / (gaps - s)) ** 2) - 1.0

    def dpsi(s):
        return np.sum(beta**2 / (gaps - s) ** 3)

    lo, hi = g2 * 1e-15, g2 * (1.0 - 1e-15)
    if dpsi(hi) <= 0.0:
        return None
    s_min = brentq(dpsi, lo, hi, xtol=1e-300, rtol=1e-15)
    if psi(s_min) > 0.0 or psi(lo) <= 0.0:
        return None
    s = brentq(psi, lo, s_min, xtol=1e-300, rtol=1e-15)
    coef = -beta / (gaps - s)
    v = evecs @ coef
    v /= np.linalg.norm(v)
    return v, float(evals[0] + s)
