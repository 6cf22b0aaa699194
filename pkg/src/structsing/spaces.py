"""Singular vector spaces: linear subspaces of n x n matrices made only of
singular matrices.

Three families are represented. ``RightKernel(v)`` is {B : B v = 0},
``LeftKernel(u)`` is {B : u^T B = 0}, and ``Block(U, V, I, J)`` is
{B : (U^T B V)[I, J] = 0} with |I| + |J| = n + 1 and U, V orthogonal.
Index sets are 0-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .numerics import SvdResult


@dataclass(frozen=True, eq=False)
class RightKernel:
    v: np.ndarray

    @property
    def n(self):
        return self.v.shape[0]


@dataclass(frozen=True, eq=False)
class LeftKernel:
    u: np.ndarray

    @property
    def n(self):
        return self.u.shape[0]


@dataclass(frozen=True, eq=False)
class Block:
    U: np.ndarray
    V: np.ndarray
    I: tuple[int, ...]
    J: tuple[int, ...]

    def __post_init__(self):
        n = self.U.shape[0]
        if len(self.I) + len(self.J) != n + 1:
            raise ValueError(
                f"|I| + |J| must equal n + 1 = {n + 1}, got {len(self.I)} + {len(self.J)}"
            )

    @property
    def n(self):
        return self.U.shape[0]


SingularSpace = RightKernel | LeftKernel | Block


def dimension(space: SingularSpace) -> int:
    n = space.n
    if isinstance(space, Block):
        return n * n - len(space.I) * len(space.J)
    return n * n - n


def from_svd_right(res: SvdResult) -> RightKernel:
    """S_v for the right singular vector of the smallest singular value."""
    return RightKernel(res.V[:, -1].copy())


def from_svd_left(res: SvdResult) -> LeftKernel:
    return LeftKernel(res.U[:, -1].copy())


def block_indices(n: int, size_i: int, size_j: int):
    """I = last size_i rows; J = first size_j - 1 columns plus the last one.

    With a descending diagonal Sigma, Sigma[I, J] then holds sigma_min as its
    only possibly nonzero entry.
    """
    if size_i < 1 or size_j < 1 or size_i + size_j != n + 1:
        raise ValueError(f"invalid block sizes ({size_i}, {size_j}) for n={n}")
    I = tuple(range(n - size_i, n))
    J = tuple(range(size_j - 1)) + (n - 1,)
    return I, J


def from_svd_block(res: SvdResult, size_i: int, size_j: int) -> Block:
    n = res.U.shape[0]
    I, J = block_indices(n, size_i, size_j)
    return Block(res.U, res.V, I, J)


def project_complement(space: SingularSpace, D) -> tuple[np.ndarray, float]:
    """Orthogonal projection of D onto the complement of ``space``.

    D minus the returned matrix lies in the space.
    """
    D = np.asarray(D, dtype=float)
    n = space.n
    if D.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {D.shape}")
    if isinstance(space, RightKernel):
        Dv = D @ space.v
        return np.outer(Dv, space.v), float(np.linalg.norm(Dv))
    if isinstance(space, LeftKernel):
        uD = space.u @ D
        return np.outer(space.u, uD), float(np.linalg.norm(uD))
    I, J = list(space.I), list(space.J)
    core = space.U[:, I].T @ D @ space.V[:, J]
    P = space.U[:, I] @ core @ space.V[:, J].T
    return P, float(np.linalg.norm(core))


def contains(space: SingularSpace, D, tol: float = 1e-12) -> bool:
    _, nrm = project_complement(space, D)
    return nrm <= tol * max(1.0, np.linalg.norm(D))


def same_space(a: SingularSpace, b: SingularSpace | None, tol: float = 1e-12) -> bool:
    """Cheap identity test used to keep consecutive spaces distinct."""
    if b is None or type(a) is not type(b):
        return False
    if isinstance(a, RightKernel):
        return abs(a.v @ b.v) > 1.0 - tol
    if isinstance(a, LeftKernel):
        return abs(a.u @ b.u) > 1.0 - tol
    if a.I != b.I or a.J != b.J:
        return False
    return np.allclose(a.U, b.U, atol=tol) and np.allclose(a.V, b.V, atol=tol)


def sample_element(space: SingularSpace, seed=None) -> np.ndarray:
    """Random element with standard-normal coordinates in an orthonormal
    basis of the space."""
    rng = np.random.default_rng(seed)
    n = space.n
    G = rng.standard_normal((n, n))
    if isinstance(space, RightKernel):
        return G - np.outer(G @ space.v, space.v)
    if isinstance(space, LeftKernel):
        return G - np.outer(space.u, space.u @ G)
    G[np.ix_(space.I, space.J)] = 0.0
    return space.U @ G @ space.V.T


def pattern_max_rank(pattern, n: int) -> int:
    """Largest rank attained on span{e_ij : (i, j) in pattern}.

    Computed combinatorially as the maximum, over all permutations s, of the
    number of cells (i, s(i)) that belong to the pattern.
    """
    if n > 10:
        raise ValueError("pattern_max_rank enumerates n! permutations; n must be <= 10")
    cells = {(int(i), int(j)) for i, j in pattern}
    if not cells:
        return 0
    mask = np.zeros((n, n), dtype=bool)
    for i, j in cells:
        mask[i, j] = True
    rows = np.arange(n)
    best = 0
    for perm in itertools.permutations(range(n)):
        hits = int(mask[rows, perm].sum())
        if hits > best:
            best = hits
            if best == n:
                break
    return best
