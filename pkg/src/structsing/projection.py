"""Least-squares subproblems over a structure intersected with a singular space.

For a space S, the structured perturbations Delta = sum_l B_l delta_l with
A + Delta in S are the solutions of ``M delta = r``, where M maps coefficients
to the component of Delta orthogonal to S. Here r already carries the minus
sign (r = -Proj(A)), so ``M delta - r`` is the projected residual of A + Delta.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla

from .numerics import minnorm_lstsq
from .spaces import Block, LeftKernel, RightKernel, SingularSpace, project_complement
from .structures import StructuredBasis


@dataclass(frozen=True, eq=False)
class LsqSystem:
    M: np.ndarray
    r: np.ndarray
    space: SingularSpace
    shift: np.ndarray
    gram: np.ndarray | None = None  # M M^T when cheap to form exactly

    @property
    def rhs(self):
        return self.r + self.shift

    def with_dual(self, y, eps):
        """Shift the right-hand side by -eps * y (augmented Lagrangian)."""
        y = np.asarray(y, dtype=float)
        if y.shape != self.r.shape:
            raise ValueError(f"dual vector has shape {y.shape}, expected {self.r.shape}")
        return replace(self, shift=-eps * y)


def _check(basis, space, A):
    A = np.asarray(A, dtype=float)
    if space.n != basis.n or A.shape != (basis.n, basis.n):
        raise ValueError("basis, space and matrix sizes disagree")
    return A


def assemble_full(basis: StructuredBasis, space: SingularSpace, A) -> LsqSystem:
    """n^2 x p system with columns vec(Proj_{S^perp} B_l). Reference only."""
    A = _check(basis, space, A)
    cols = [project_complement(space, B)[0].ravel() for B in basis.elements]
    M = np.column_stack(cols)
    r = -project_complement(space, A)[0].ravel()
    return LsqSystem(M=M, r=r, space=space, shift=np.zeros_like(r))


def kernel_matrix(basis: StructuredBasis, vec, side: str) -> np.ndarray:
    """n x p matrix with columns B_l @ vec (side="right") or B_l^T @ vec ("left")."""
    n, p = basis.n, basis.p
    if side == "right":
        out_idx, in_idx = basis.rows, basis.cols
    else:
        out_idx, in_idx = basis.cols, basis.rows
    flat = out_idx * p + basis.index
    w = basis.values * vec[in_idx]
    return np.bincount(flat, weights=w, minlength=n * p).reshape(n, p)


def assemble_reduced(basis: StructuredBasis, space: SingularSpace, A) -> LsqSystem:
    """Smallest equivalent system: n x p for kernel spaces, |I||J| x p for blocks."""
    A = _check(basis, space, A)
    gram = None
    if isinstance(space, RightKernel):
        M = kernel_matrix(basis, space.v, "right")
        r = -(A @ space.v)
        if basis.kind == "sparse-pattern":
            # one nonzero per column: M M^T is diagonal
            gram = np.diag(np.bincount(basis.rows, weights=space.v[basis.cols] ** 2,
                                       minlength=basis.n))
    elif isinstance(space, LeftKernel):
        M = kernel_matrix(basis, space.u, "left")
        r = -(space.u @ A)
        if basis.kind == "sparse-pattern":
            gram = np.diag(np.bincount(basis.cols, weights=space.u[basis.rows] ** 2,
                                       minlength=basis.n))
    elif isinstance(space, Block):
        UI = space.U[:, list(space.I)]
        VJ = space.V[:, list(space.J)]
        K = np.kron(UI, VJ)
        M = np.asarray((basis.matrix.T @ K).T)
        r = -(UI.T @ A @ VJ).ravel()
    else:
        raise TypeError(f"unsupported space {type(space).__name__}")
    return LsqSystem(M=M, r=r, space=space, shift=np.zeros_like(r), gram=gram)


def solve_exact(sys: LsqSystem, rtol: float = 1e-8) -> tuple[np.ndarray, float]:
    """Minimum-norm solution of M delta = r and its residual norm.

    Raises ValueError when the residual exceeds rtol * (||r|| + 1), which means
    the system was inconsistent (the matrix was not in the structure).
    """
    rhs = sys.rhs
    delta = minnorm_lstsq(sys.M, rhs)
    residual = float(np.linalg.norm(sys.M @ delta - rhs))
    if residual > rtol * (np.linalg.norm(rhs) + 1.0):
        raise ValueError(f"inconsistent least-squares system (residual {residual:.3e})")
    return delta, residual


def solve_tikhonov(sys: LsqSystem, eps: float) -> tuple[np.ndarray, float]:
    """Minimize ||delta||^2 + ||M delta - r||^2 / eps in closed form.

    Returns delta and the optimal value r^T (M M^T + eps I)^{-1} r. The smaller
    of the two normal-equation systems is factored.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    M, rhs = sys.M, sys.rhs
    q, p = M.shape
    if q <= p:
        G = sys.gram if sys.gram is not None else M @ M.T
        G = G + eps * np.eye(q)
        z = sla.cho_solve(sla.cho_factor(G, check_finite=False), rhs, check_finite=False)
        delta = M.T @ z
        value = float(rhs @ z)
    else:
        H = M.T @ M + eps * np.eye(p)
        delta = sla.cho_solve(sla.cho_factor(H, check_finite=False), M.T @ rhs,
                              check_finite=False)
        res = M @ delta - rhs
        value = float(delta @ delta + res @ res / eps)
    return delta, value


def eval_g(delta, sys: LsqSystem, eps: float, y=None) -> float:
    """||delta||^2 + ||M delta - r||^2 / eps + 2 <y, M delta - r>.

    ``r`` here is the unshifted right-hand side of the system.
    """
    delta = np.asarray(delta, dtype=float)
    if delta.shape != (sys.M.shape[1],):
        raise ValueError("coefficient vector has the wrong length")
    res = sys.M @ delta - sys.r
    val = delta @ delta + res @ res / eps
    if y is not None:
        y = np.asarray(y, dtype=float)
        if y.shape != res.shape:
            raise ValueError("dual vector has the wrong length")
        val += 2.0 * (y @ res)
    return float(val)
