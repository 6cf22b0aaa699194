"""Solvers for the structured distance to singularity.

All three drivers work on coefficient vectors delta in the orthonormal basis of
the structure, so ||Delta||_F = ||delta||_2 and Delta stays structured.

* :func:`solve_unregularized` walks through singular spaces that contain the
  current iterate and projects onto each (monotone in ||Delta||).
* :func:`solve_tikhonov_bcd` relaxes the space constraint into a 1/eps penalty
  and alternates exact minimization over the space and over delta, driving
  eps to zero.
* :func:`solve_augmented_lagrangian` adds a dual vector y to the penalty and
  restricts the space to right (or left) kernels S_v, whose optimal v for a
  fixed delta is a quadratic minimization on the unit sphere.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import numerics
from .numerics import (
    smallest_triplet,
    sphere_quadratic_local_min_eig,
    sphere_quadratic_min_eig,
)
from .projection import assemble_reduced, eval_g, solve_exact, solve_tikhonov
from .spaces import (
    LeftKernel,
    RightKernel,
    SingularSpace,
    from_svd_block,
    project_complement,
    same_space,
)
from .structures import ProblemInstance, materialize

STRATEGIES = {
    "right-kernel": "right-kernel",
    "i": "right-kernel",
    "left-kernel": "left-kernel",
    "ii": "left-kernel",
    "alternate-kernels": "alternate-kernels",
    "iii": "alternate-kernels",
    "alternate-right-and-block": "alternate-right-and-block",
    "iv": "alternate-right-and-block",
}
ALGORITHMS = ("unregularized", "tikhonov", "augmented-lagrangian")

# sign of the multiplier step; verification flips it to check that the
# invariant suite notices a broken dual update
_DUAL_SIGN = 1.0


@dataclass(frozen=True)
class SolverConfig:
    """Solver knobs. ``None`` entries are scaled from ||A||_F at solve time:
    epsilon0 = 1e-2 ||A||^2, tol1 = 1e-11 max(1, ||A||) and
    epsilon_min = 1e-16 ||A||^2. Without an explicit tol2 the inner loops stop
    on a relative decrease g_prev - g <= tol2_rel * g."""

    algorithm: str = "tikhonov"
    strategy: str = "right-kernel"
    epsilon0: float | None = None
    decrease_k: float = 0.1
    tol1: float | None = None
    tol2: float | None = None
    tol2_rel: float = 1e-7
    epsilon_min: float | None = None
    max_outer: int = 60
    max_inner: int = 500
    warm_start: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        object.__setattr__(self, "strategy", STRATEGIES[self.strategy])
        if not 0.0 < self.decrease_k < 1.0:
            raise ValueError("decrease_k must lie in (0, 1)")
        for name in ("epsilon0", "tol1", "tol2", "epsilon_min"):
            val = getattr(self, name)
            if val is not None and not val > 0:
                raise ValueError(f"{name} must be positive")
        if not self.tol2_rel > 0:
            raise ValueError("tol2_rel must be positive")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration caps must be at least 1")


@dataclass
class SolveResult:
    delta: np.ndarray
    Delta: np.ndarray
    distance: float
    constraint_violation: float
    converged: bool
    inner_iterations_total: int
    outer_iterations: int
    g_trace: list = field(default_factory=list)
    final_space: SingularSpace | None = None
    licq_ok: bool | None = None
    wall_time: float = 0.0
    algorithm: str = ""
    strategy: str = ""
    diagnostics: dict = field(default_factory=dict)


def select_space(C, strategy: str, parity: int, prev: SingularSpace | None = None):
    """Singular space nearest to C (distance sigma_min(C)) of the family that
    ``strategy`` prescribes for this iteration parity.

    ``prev`` seeds the smallest-triplet computation with the previous vector.
    """
    strategy = STRATEGIES[strategy]
    if strategy == "right-kernel" or (strategy != "left-kernel" and parity % 2 == 0):
        v0 = prev.v if isinstance(prev, RightKernel) else None
        _, _, v = smallest_triplet(C, v0=v0)
        return RightKernel(v)
    if strategy in ("left-kernel", "alternate-kernels"):
        u0 = prev.u if isinstance(prev, LeftKernel) else None
        _, _, u = smallest_triplet(C.T, v0=u0)
        return LeftKernel(u)
    n = C.shape[0]
    return from_svd_block(numerics.svd(C), n - 1, 2)


def _short_circuit(inst, cfg, t0, outer=0, inner=0):
    p = inst.basis.p
    return SolveResult(
        delta=np.zeros(p),
        Delta=np.zeros((inst.n, inst.n)),
        distance=0.0,
        constraint_violation=float(smallest_triplet(inst.A)[1]),
        converged=True,
        inner_iterations_total=inner,
        outer_iterations=outer,
        wall_time=time.perf_counter() - t0,
        algorithm=cfg.algorithm,
        strategy=cfg.strategy,
        diagnostics={"degenerate": True},
    )


def _check_instance(inst: ProblemInstance, rtol=1e-10):
    res = np.linalg.norm(inst.A - materialize(inst.basis, inst.alpha))
    if res > rtol * max(1.0, np.linalg.norm(inst.A)):
        raise ValueError(f"matrix is not in the structure (residual {res:.3e})")


def _constraint(C, space):
    vec = None
    if isinstance(space, RightKernel):
        vec = space.v
    return float(smallest_triplet(C, v0=vec)[1])


def solve_unregularized(inst: ProblemInstance, cfg: SolverConfig | None = None) -> SolveResult:
    """Alternating projections onto structure-intersected singular spaces.

    Starts from Delta = -A and stops once consecutive iterates differ by at
    most tol2 (default 1e-10 (1 + ||A||_F)). Every iterate is exactly feasible.
    """
    cfg = cfg or SolverConfig(algorithm="unregularized")
    t0 = time.perf_counter()
    _check_instance(inst)
    A, basis = inst.A, inst.basis
    normA = np.linalg.norm(A)
    tol = cfg.tol2 if cfg.tol2 is not None else 1e-10 * (1.0 + normA)

    delta = -inst.alpha.copy()
    Delta = -A.copy()
    norms = [float(np.linalg.norm(delta))]
    space = None
    parity = 0
    it = 0
    converged = False
    while it < cfg.max_inner:
        it += 1
        C = A + Delta
        # at Delta = -A every space contains A + Delta; pick the one nearest A
        base = A if np.linalg.norm(C) <= 1e-14 * max(normA, 1e-300) else C
        new = select_space(base, cfg.strategy, parity, prev=space)
        if same_space(new, space):
            parity += 1
            new = select_space(base, cfg.strategy, parity, prev=space)
        space = new
        parity += 1
        sys = assemble_reduced(basis, space, A)
        delta_new, _ = solve_exact(sys)
        Delta_new = materialize(basis, delta_new)
        step = np.linalg.norm(Delta_new - Delta)
        delta, Delta = delta_new, Delta_new
        norms.append(float(np.linalg.norm(delta)))
        if step <= tol:
            converged = True
            break

    return SolveResult(
        delta=delta,
        Delta=Delta,
        distance=float(np.linalg.norm(delta)),
        constraint_violation=float(smallest_triplet(A + Delta)[1]),
        converged=converged,
        inner_iterations_total=it,
        outer_iterations=1,
        g_trace=[norms],
        final_space=space,
        wall_time=time.perf_counter() - t0,
        algorithm="unregularized",
        strategy=cfg.strategy,
    )


def _resolve(cfg: SolverConfig, normA: float):
    sq = normA * normA
    eps0 = cfg.epsilon0 if cfg.epsilon0 is not None else 1e-2 * sq
    tol1 = cfg.tol1 if cfg.tol1 is not None else 1e-11 * max(1.0, normA)
    eps_min = cfg.epsilon_min if cfg.epsilon_min is not None else 1e-16 * sq
    return eps0, tol1, eps_min


def _inner_tol(cfg, g0):
    """(absolute, relative) inner decrease tolerances.

    An explicit tol2 is used as is. Otherwise the run stops once a sweep
    lowers g by at most tol2_rel * g, with a 1e-15 (1 + g0) floor.
    """
    if cfg.tol2 is not None:
        return cfg.tol2, 0.0
    return 1e-15 * (1.0 + g0), cfg.tol2_rel


def solve_tikhonov_bcd(inst: ProblemInstance, cfg: SolverConfig | None = None) -> SolveResult:
    """Tikhonov-regularized block coordinate descent over (delta, space).

    Each inner run starts from delta = -alpha (or from the previous outer
    solution when ``cfg.warm_start``). At delta = -alpha the matrix A + Delta
    vanishes and every space is optimal; the previous outer space is reused
    then, and on the very first run the space nearest A.
    """
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    _check_instance(inst)
    A, basis, alpha = inst.A, inst.basis, inst.alpha
    normA = np.linalg.norm(A)
    if normA == 0.0:
        return _short_circuit(inst, cfg, t0)
    eps, tol1, eps_min = _resolve(cfg, normA)

    star_space = select_space(A, cfg.strategy, 0)
    star_delta = -alpha.copy()
    traces = []
    inner_total = 0
    outer = 0
    converged = False
    constraint = np.inf
    history = []

    while outer < cfg.max_outer:
        outer += 1
        if cfg.warm_start and outer > 1:
            delta = star_delta.copy()
            g_prev = eval_g(delta, assemble_reduced(basis, star_space, A), eps)
        else:
            delta = -alpha.copy()
            g_prev = float(delta @ delta)
        tol2, rel2 = _inner_tol(cfg, g_prev)
        trace = [g_prev]
        space = star_space
        parity = 0
        for i in range(cfg.max_inner):
            C = A + materialize(basis, delta)
            if i > 0 or np.linalg.norm(C) > 1e-14 * normA:
                space = select_space(C, cfg.strategy, parity, prev=space)
            parity += 1
            sys = assemble_reduced(basis, space, A)
            delta, g = solve_tikhonov(sys, eps)
            inner_total += 1
            trace.append(g)
            if g_prev - g <= max(tol2, rel2 * abs(g)):
                break
            g_prev = g
        traces.append(trace)
        star_delta, star_space = delta, space
        Delta = materialize(basis, delta)
        constraint = _constraint(A + Delta, space)
        history.append(
            {
                "epsilon": eps,
                "sigma_min": constraint,
                "space_residual": project_complement(space, A + Delta)[1],
                "inner": len(trace) - 1,
            }
        )
        if constraint <= tol1:
            converged = True
            break
        eps *= cfg.decrease_k
        if eps < eps_min:
            break

    Delta = materialize(basis, star_delta)
    return SolveResult(
        delta=star_delta,
        Delta=Delta,
        distance=float(np.linalg.norm(star_delta)),
        constraint_violation=float(constraint),
        converged=converged,
        inner_iterations_total=inner_total,
        outer_iterations=outer,
        g_trace=traces,
        final_space=star_space,
        wall_time=time.perf_counter() - t0,
        algorithm="tikhonov",
        strategy=cfg.strategy,
        diagnostics={"history": history, "final_epsilon": eps},
    )


@dataclass(frozen=True)
class DualState:
    """Multiplier for the kernel constraint (A + Delta) v = 0."""

    y: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        if y.ndim != 1 or not np.all(np.isfinite(y)):
            raise ValueError("dual vector must be a finite 1-d array")
        object.__setattr__(self, "y", y)


def dual_update(y, sys, delta, eps):
    """First-order multiplier step y + (M delta - r) / eps.

    ``eps`` is the penalty of the inner run that produced ``delta``. Since that
    delta is stationary, delta = -M^T (y + (M delta - r) / eps), so the new y
    is the multiplier estimate of the finished run.
    """
    return y + _DUAL_SIGN * (sys.M @ delta - sys.r) / eps


def _sphere_step(C, y, eps, side, prev=None):
    """Minimize ||C v||^2 / eps + 2 <y, C v> over unit v (C^T and u for left).

    Replacing (v, y) by (-v, -y) leaves the objective unchanged, so for a fixed
    y the sign of v carries the sign of the multiplier. The global minimizer
    is taken when it keeps the orientation of ``prev``; otherwise the
    local-nonglobal minimizer on that side is used, as a descent method started
    from ``prev`` would find. ``prev`` itself is kept if neither is better.
    """
    if side == "left":
        C = C.T
    res = numerics.svd(C)
    evals = res.sigma**2 / eps
    b = C.T @ y
    v, _ = sphere_quadratic_min_eig(evals, res.V, b)
    if prev is not None and v @ prev < 0:

        def q(w):
            Cw = C @ w
            return Cw @ Cw / eps + 2.0 * (y @ Cw)

        cands = [prev]
        loc = sphere_quadratic_local_min_eig(evals, res.V, b)
        if loc is not None and loc[0] @ prev >= 0:
            cands.append(loc[0])
        v = min(cands, key=q)
    return RightKernel(v) if side == "right" else LeftKernel(v)


def solve_augmented_lagrangian(
    inst: ProblemInstance, cfg: SolverConfig | None = None
) -> SolveResult:
    """Augmented Lagrangian method over kernel spaces S_v (or S*_u).

    For fixed (eps, y) the inner loop alternates the exact sphere-constrained
    v-step and the closed-form delta-step with right-hand side r - eps y. After
    each inner run y += (M delta - r) / eps with the eps of that run, then eps
    is decreased.
    """
    cfg = cfg or SolverConfig(algorithm="augmented-lagrangian")
    if cfg.strategy not in ("right-kernel", "left-kernel"):
        raise ValueError("the augmented Lagrangian solver supports right-kernel or left-kernel")
    side = "right" if cfg.strategy == "right-kernel" else "left"
    t0 = time.perf_counter()
    _check_instance(inst)
    A, basis, alpha = inst.A, inst.basis, inst.alpha
    n = inst.n
    normA = np.linalg.norm(A)
    if normA == 0.0:
        return _short_circuit(inst, cfg, t0)
    eps, tol1, eps_min = _resolve(cfg, normA)

    star_space = select_space(A, cfg.strategy, 0)
    star_delta = -alpha.copy()
    y = np.zeros(n)
    traces = []
    inner_total = 0
    outer = 0
    converged = False
    constraint = np.inf
    history = []

    while outer < cfg.max_outer:
        outer += 1
        if cfg.warm_start and outer > 1:
            delta = star_delta.copy()
            g_prev = eval_g(delta, assemble_reduced(basis, star_space, A), eps, y)
        else:
            delta = -alpha.copy()
            g_prev = float(delta @ delta)
        tol2, rel2 = _inner_tol(cfg, g_prev)
        trace = [g_prev]
        space = star_space
        for i in range(cfg.max_inner):
            C = A + materialize(basis, delta)
            if i > 0 or np.linalg.norm(C) > 1e-14 * normA:
                prev = space.v if side == "right" else space.u
                space = _sphere_step(C, y, eps, side, prev)
            sys = assemble_reduced(basis, space, A).with_dual(y, eps)
            delta, val = solve_tikhonov(sys, eps)
            g = val - eps * float(y @ y)
            inner_total += 1
            trace.append(g)
            if g_prev - g <= max(tol2, rel2 * abs(g)):
                break
            g_prev = g
        traces.append(trace)
        star_delta, star_space = delta, space
        Delta = materialize(basis, delta)
        constraint = _constraint(A + Delta, space)
        history.append(
            {
                "epsilon": eps,
                "sigma_min": constraint,
                "space_residual": project_complement(space, A + Delta)[1],
                "inner": len(trace) - 1,
            }
        )
        if constraint <= tol1:
            converged = True
            break
        y = dual_update(y, assemble_reduced(basis, space, A), delta, eps)
        eps *= cfg.decrease_k
        if eps < eps_min:
            break

    return SolveResult(
        delta=star_delta,
        Delta=materialize(basis, star_delta),
        distance=float(np.linalg.norm(star_delta)),
        constraint_violation=float(constraint),
        converged=converged,
        inner_iterations_total=inner_total,
        outer_iterations=outer,
        g_trace=traces,
        final_space=star_space,
        wall_time=time.perf_counter() - t0,
        algorithm="augmented-lagrangian",
        strategy=cfg.strategy,
        diagnostics={"history": history, "final_epsilon": eps, "dual": DualState(y)},
    )


def solve(inst: ProblemInstance, cfg: SolverConfig | None = None) -> SolveResult:
    cfg = cfg or SolverConfig()
    if cfg.algorithm == "unregularized":
        return solve_unregularized(inst, cfg)
    if cfg.algorithm == "tikhonov":
        return solve_tikhonov_bcd(inst, cfg)
    return solve_augmented_lagrangian(inst, cfg)


def licq_check(inst: ProblemInstance, result: SolveResult, rtol: float = 1e-8):
    """Rank test of [M_Y^T; ((A + Delta)(I - v v^T))^T] at the returned point.

    Returns ``(full_rank, smallest_singular_value)``.
    """
    if np.linalg.norm(inst.A) == 0.0:
        return False, 0.0
    space = result.final_space
    if not isinstance(space, RightKernel):
        raise ValueError("LICQ diagnostic needs a right-kernel final space")
    v = space.v
    sys = assemble_reduced(inst.basis, space, inst.A)
    C = inst.A + result.Delta
    P = C - np.outer(C @ v, v)
    stack = np.vstack([sys.M.T, P.T])
    s = np.linalg.svd(stack, compute_uv=False)
    smin = float(s[-1]) if s.size else 0.0
    return bool(s.size and smin > rtol * s[0]), smin


def with_overrides(cfg: SolverConfig, **kw) -> SolverConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
