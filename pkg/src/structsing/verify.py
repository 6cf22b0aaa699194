"""Randomized invariant suite behind ``structsing verify``.

Every property draws small random instances from one seeded generator and
records the worst observed value of its error measure against a tolerance.
The report is deterministic for a fixed seed (no timings).
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass

import numpy as np

from . import algorithms
from .algorithms import SolverConfig, dual_update, solve
from .generators import gen_sparse, gen_toeplitz
from .numerics import smallest_triplet, sphere_quadratic_min, svd
from .projection import LsqSystem, assemble_full, assemble_reduced, eval_g, solve_exact, solve_tikhonov
from .spaces import (
    LeftKernel,
    RightKernel,
    dimension,
    from_svd_block,
    from_svd_left,
    from_svd_right,
    sample_element,
)
from .structures import (
    coefficients_of,
    full_basis,
    hankel_basis,
    make_instance,
    materialize,
    orthonormalize,
    sparse_pattern_basis,
    symmetric_basis,
    toeplitz_basis,
)


@dataclass(frozen=True)
class PropertyResult:
    name: str
    module: str
    worst: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.worst <= self.tol)

    @property
    def slack(self) -> float:
        """tol - worst; negative on failure."""
        return self.tol - self.worst


def _random_basis(rng, n):
    k = int(rng.integers(5))
    if k == 4:
        pat = sorted({(int(i), int(j)) for i, j in rng.integers(0, n, size=(2 * n, 2))})
        return sparse_pattern_basis(pat, n=n)
    return (toeplitz_basis, hankel_basis, symmetric_basis, full_basis)[k](n)


def _random_space(rng, n):
    res = svd(rng.standard_normal((n, n)))
    k = int(rng.integers(3))
    if k == 0:
        return from_svd_right(res)
    if k == 1:
        return from_svd_left(res)
    size_i = int(rng.integers(1, n + 1))
    return from_svd_block(res, size_i, n + 1 - size_i)


def _toeplitz_instance(rng, n):
    return make_instance(gen_toeplitz(n, int(rng.integers(2**31))), toeplitz_basis(n))


# -- structures ---------------------------------------------------------------


def p_basis_orthonormal(rng):
    worst = 0.0
    for _ in range(20):
        b = _random_basis(rng, int(rng.integers(1, 8)))
        X = b.matrix.toarray()
        worst = max(worst, np.abs(X.T @ X - np.eye(b.p)).max())
    return worst, 1e-12


def p_round_trip(rng):
    worst = 0.0
    for _ in range(30):
        b = _random_basis(rng, int(rng.integers(1, 8)))
        d = rng.standard_normal(b.p)
        alpha, res = coefficients_of(b, materialize(b, d))
        worst = max(worst, np.abs(alpha - d).max() / max(1.0, np.abs(d).max()), res)
    return worst, 1e-12


# -- spaces -------------------------------------------------------------------


def p_space_elements_singular(rng):
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 9))
        s = np.linalg.svd(sample_element(_random_space(rng, n), int(rng.integers(2**31))), compute_uv=False)
        worst = max(worst, s[-1] / max(1.0, s[0]))
    return worst, 1e-10


def p_dimension_bound(rng):
    worst = -np.inf
    for _ in range(100):
        n = int(rng.integers(2, 9))
        worst = max(worst, dimension(_random_space(rng, n)) - n * (n - 1))
    return float(worst), 0.0


# -- numerics -----------------------------------------------------------------


def p_smallest_triplet(rng):
    worst = 0.0
    for _ in range(30):
        n = int(rng.integers(2, 10))
        C = rng.standard_normal((n, n))
        ref = svd(C)
        v0 = ref.V[:, -1] + 0.1 * rng.standard_normal(n) if rng.random() < 0.5 else None
        u, s, v = smallest_triplet(C, v0=v0)
        worst = max(worst, abs(s - ref.sigma[-1]) / ref.sigma[0],
                    np.linalg.norm(C @ v - s * u) / ref.sigma[0])
    return worst, 1e-10


def p_sphere_kkt(rng):
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 6))
        G = rng.standard_normal((n, n))
        Q = G.T @ G
        b = rng.standard_normal(n) * 10.0 ** rng.uniform(-3, 1)
        v, _, lam = sphere_quadratic_min(Q, b)
        kkt = np.linalg.norm((Q - lam * np.eye(n)) @ v + b) / (np.linalg.norm(Q) + np.linalg.norm(b))
        # second-order condition: lam below the spectrum
        worst = max(worst, kkt, max(0.0, lam - np.linalg.eigvalsh(Q)[0]) / np.linalg.norm(Q))
    return worst, 1e-8


# -- projection ---------------------------------------------------------------


def p_reduced_vs_full(rng):
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 6))
        b = _random_basis(rng, n)
        inst = make_instance(materialize(b, rng.standard_normal(b.p)), b)
        space = _random_space(rng, n)
        full = solve_exact(assemble_full(b, space, inst.A))[0]
        red = solve_exact(assemble_reduced(b, space, inst.A))[0]
        worst = max(worst, np.linalg.norm(full - red))
    return worst, 1e-10


def p_completed_square(rng):
    worst = 0.0
    for _ in range(30):
        q, p = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        M, r = rng.standard_normal((q, p)), rng.standard_normal(q)
        sys = LsqSystem(M=M, r=r, space=None, shift=np.zeros(q))
        delta, y = rng.standard_normal(p), rng.standard_normal(q)
        eps = 10.0 ** rng.uniform(-3, 2)
        res = M @ delta - r
        alt = delta @ delta + np.sum((res + eps * y) ** 2) / eps - eps * y @ y
        g = eval_g(delta, sys, eps, y)
        worst = max(worst, abs(g - alt) / max(1.0, abs(g)))
    return worst, 1e-10


def p_symmetric_kernels(rng):
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 9))
        b = symmetric_basis(n)
        A = materialize(b, rng.standard_normal(b.p))
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        dr = np.linalg.norm(solve_exact(assemble_reduced(b, RightKernel(v), A))[0])
        dl = np.linalg.norm(solve_exact(assemble_reduced(b, LeftKernel(v), A))[0])
        worst = max(worst, abs(dr - dl))
    return worst, 1e-10


# -- algorithms ---------------------------------------------------------------


def _trace_rise(result):
    worst = 0.0
    for tr in result.g_trace:
        tr = np.asarray(tr)
        if tr.size > 1:
            rise = np.diff(tr) / np.maximum(1.0, np.abs(tr[:-1]))
            worst = max(worst, float(rise.max()))
    return worst


def p_monotone_traces(rng):
    worst = 0.0
    for _ in range(3):
        inst = _toeplitz_instance(rng, int(rng.integers(4, 12)))
        for alg in ("unregularized", "tikhonov", "augmented-lagrangian"):
            worst = max(worst, _trace_rise(solve(inst, SolverConfig(algorithm=alg))))
    return worst, 1e-12


def p_eckart_young(rng):
    worst = 0.0
    for _ in range(4):
        n = int(rng.integers(2, 7))
        A = rng.standard_normal((n, n))
        inst = make_instance(A, full_basis(n))
        smin = np.linalg.svd(A, compute_uv=False)[-1]
        for alg in ("unregularized", "tikhonov", "augmented-lagrangian"):
            worst = max(worst, abs(solve(inst, SolverConfig(algorithm=alg)).distance - smin) / smin)
    return worst, 1e-6


def p_feasible_and_structured(rng):
    worst = 0.0
    for _ in range(3):
        n = int(rng.integers(4, 10))
        A, pattern = gen_sparse(n, 0.5, int(rng.integers(2**31)))
        b = sparse_pattern_basis(pattern, n=n)
        inst = make_instance(A, b)
        res = solve(inst, SolverConfig())
        tol1 = 1e-11 * max(1.0, np.linalg.norm(A))
        if res.converged:
            worst = max(worst, res.constraint_violation / (10 * tol1))
        worst = max(worst, coefficients_of(b, res.Delta)[1] / 1e-12)
    return worst, 1.0


def p_basis_rotation(rng):
    worst = 0.0
    for _ in range(2):
        n = int(rng.integers(3, 7))
        inst = _toeplitz_instance(rng, n)
        els = inst.basis.elements
        Q, _ = np.linalg.qr(rng.standard_normal((len(els), len(els))))
        rotated = orthonormalize([sum(Q[k, l] * els[k] for k in range(len(els))) for l in range(len(els))])
        d0 = solve(inst, SolverConfig()).distance
        d1 = solve(make_instance(inst.A, rotated), SolverConfig()).distance
        worst = max(worst, abs(d0 - d1) / d0)
    return worst, 1e-8


def p_dual_update(rng):
    """The multiplier step reproduces the stationarity multiplier:
    after a delta-step on the shifted system, delta = -M^T y_new."""
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(3, 9))
        inst = _toeplitz_instance(rng, n)
        v = rng.standard_normal(n)
        sys = assemble_reduced(inst.basis, RightKernel(v / np.linalg.norm(v)), inst.A)
        y = rng.standard_normal(n)
        eps = 10.0 ** rng.uniform(-3, 0)
        delta, _ = solve_tikhonov(sys.with_dual(y, eps), eps)
        y_new = dual_update(y, sys, delta, eps)
        worst = max(worst, np.linalg.norm(delta + sys.M.T @ y_new) / (1.0 + np.linalg.norm(delta)))
    return worst, 1e-8


def p_generator_determinism(rng):
    worst = 0.0
    for _ in range(5):
        n, seed = int(rng.integers(2, 20)), int(rng.integers(2**31))
        worst = max(worst, float(np.abs(gen_toeplitz(n, seed) - gen_toeplitz(n, seed)).max()))
        a1, p1 = gen_sparse(n, 0.3, seed)
        a2, p2 = gen_sparse(n, 0.3, seed)
        worst = max(worst, float(np.abs(a1 - a2).max()), float(p1 != p2))
    return worst, 0.0


def p_generator_structured(rng):
    worst = 0.0
    for _ in range(5):
        n, seed = int(rng.integers(2, 20)), int(rng.integers(2**31))
        A = gen_toeplitz(n, seed)
        worst = max(worst, coefficients_of(toeplitz_basis(n), A)[1] / max(1.0, np.linalg.norm(A)))
    return worst, 1e-12


PROPERTIES = [
    ("basis orthonormality", "structures", p_basis_orthonormal),
    ("coefficient round trip", "structures", p_round_trip),
    ("space elements singular", "singular_spaces", p_space_elements_singular),
    ("dimension <= n(n-1)", "singular_spaces", p_dimension_bound),
    ("smallest triplet", "numerics", p_smallest_triplet),
    ("sphere minimizer KKT", "numerics", p_sphere_kkt),
    ("reduced = full system", "projection_solver", p_reduced_vs_full),
    ("completed square", "projection_solver", p_completed_square),
    ("symmetric kernels agree", "projection_solver", p_symmetric_kernels),
    ("monotone g traces", "algorithms", p_monotone_traces),
    ("unstructured oracle", "algorithms", p_eckart_young),
    ("feasible and structured", "algorithms", p_feasible_and_structured),
    ("basis rotation invariance", "algorithms", p_basis_rotation),
    ("dual update multiplier", "algorithms", p_dual_update),
    ("generator determinism", "cli_bench", p_generator_determinism),
    ("Toeplitz generator in T", "cli_bench", p_generator_structured),
]


@contextlib.contextmanager
def _flipped_dual_sign():
    old = algorithms._DUAL_SIGN
    algorithms._DUAL_SIGN = -old
    try:
        yield
    finally:
        algorithms._DUAL_SIGN = old


def run_verify(seed: int = 0, inject_fault: bool = False):
    """Run every property; returns a list of :class:`PropertyResult`.

    ``inject_fault`` flips the sign of the multiplier step for the duration of
    the run, which the dual-update property must catch.
    """
    ctx = _flipped_dual_sign() if inject_fault else contextlib.nullcontext()
    out = []
    with ctx:
        for k, (name, module, fn) in enumerate(PROPERTIES):
            rng = np.random.default_rng([seed, k])
            worst, tol = fn(rng)
            out.append(PropertyResult(name, module, float(worst), float(tol)))
    return out


def format_report(results) -> str:
    lines = [f"{'status':6}  {'module':17}  {'property':26}  {'worst':>10}  {'tol':>8}  {'slack':>10}"]
    for r in results:
        lines.append(
            f"{'PASS' if r.passed else 'FAIL':6}  {r.module:17}  {r.name:26}  "
            f"{r.worst:10.3e}  {r.tol:8.1e}  {r.slack:10.3e}"
        )
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} properties passed")
    return "\n".join(lines)
