"""Linear matrix structures represented by Frobenius-orthonormal bases.

A basis of p elements of size n x n is stored in coordinate form: entry
``k`` says that element ``index[k]`` has value ``values[k]`` at position
``(rows[k], cols[k])``. Toeplitz and sparse-pattern bases only need O(n^2)
and O(|pattern|) entries this way, which keeps n = 500 problems in memory.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

KINDS = ("toeplitz", "hankel", "symmetric", "sparse-pattern", "full", "custom")


class BasisWarning(UserWarning):
    """Raised (as a warning) when orthonormalize drops a dependent input."""


@dataclass(frozen=True, eq=False)
class StructuredBasis:
    n: int
    kind: str
    rows: np.ndarray
    cols: np.ndarray
    index: np.ndarray
    values: np.ndarray
    p: int
    pattern: tuple[tuple[int, int], ...] | None = None
    discarded: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown structure kind {self.kind!r}")
        for arr in (self.rows, self.cols, self.index, self.values):
            arr.setflags(write=False)

    @cached_property
    def matrix(self) -> sp.csc_matrix:
        """(n*n, p) sparse matrix whose column l is vec(B_l), row-major."""
        flat = self.rows * self.n + self.cols
        return sp.csc_matrix(
            (self.values, (flat, self.index)), shape=(self.n * self.n, self.p)
        )

    @property
    def elements(self) -> list[np.ndarray]:
        dense = self.matrix.toarray()
        return [dense[:, l].reshape(self.n, self.n) for l in range(self.p)]

    def __len__(self):
        return self.p


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    A: np.ndarray
    basis: StructuredBasis
    alpha: np.ndarray

    @property
    def n(self):
        return self.basis.n


def _from_dense_columns(n, kind, cols_mat, pattern=None, discarded=()):
    coo = sp.coo_matrix(cols_mat)
    return StructuredBasis(
        n=n,
        kind=kind,
        rows=(coo.row // n).astype(np.int64),
        cols=(coo.row % n).astype(np.int64),
        index=coo.col.astype(np.int64),
        values=coo.data.astype(float),
        p=cols_mat.shape[1],
        pattern=pattern,
        discarded=tuple(discarded),
    )


def orthonormalize(raw, kind: str = "custom") -> StructuredBasis:
    """Modified Gram-Schmidt (with one re-orthogonalization pass) in the
    Frobenius inner product.

    Inputs whose residual after projection falls below 1e-12 times the largest
    input norm are dropped; a :class:`BasisWarning` names them and their
    positions are kept in ``basis.discarded``.
    """
    mats = [np.asarray(m, dtype=float) for m in raw]
    if not mats:
        raise ValueError("orthonormalize needs at least one matrix")
    n = mats[0].shape[0]
    for k, m in enumerate(mats):
        if m.shape != (n, n):
            raise ValueError(f"matrix {k} has shape {m.shape}, expected {(n, n)}")
    vecs = [m.ravel() for m in mats]
    scale = max(np.linalg.norm(v) for v in vecs)
    thresh = 1e-12 * scale
    kept, dropped = [], []
    for k, v in enumerate(vecs):
        w = v.copy()
        for _ in range(2):
            for q in kept:
                w -= (q @ w) * q
        nrm = np.linalg.norm(w)
        if nrm <= thresh or scale == 0.0:
            dropped.append(k)
            continue
        kept.append(w / nrm)
    if dropped:
        warnings.warn(
            f"discarded input matrices {dropped} (linearly dependent on earlier ones)",
            BasisWarning,
            stacklevel=2,
        )
    if not kept:
        raise ValueError("all input matrices are numerically zero")
    return _from_dense_columns(n, kind, np.column_stack(kept), discarded=dropped)


def toeplitz_basis(n: int) -> StructuredBasis:
    """Diagonal indicators, offsets -(n-1)..(n-1), each scaled by 1/sqrt(n-|d|).

    Offset d is the diagonal j - i = d, so element 0 is the bottom-left corner.
    """
    if n < 1:
        raise ValueError("n must be positive")
    i, j = np.indices((n, n))
    d = (j - i).ravel()
    return StructuredBasis(
        n=n,
        kind="toeplitz",
        rows=i.ravel(),
        cols=j.ravel(),
        index=d + (n - 1),
        values=1.0 / np.sqrt(n - np.abs(d)),
        p=2 * n - 1,
    )


def hankel_basis(n: int) -> StructuredBasis:
    """Anti-diagonal indicators i + j = s for s = 0..2n-2, normalized."""
    if n < 1:
        raise ValueError("n must be positive")
    i, j = np.indices((n, n))
    s = (i + j).ravel()
    length = n - np.abs(s - (n - 1))
    return StructuredBasis(
        n=n,
        kind="hankel",
        rows=i.ravel(),
        cols=j.ravel(),
        index=s,
        values=1.0 / np.sqrt(length),
        p=2 * n - 1,
    )


def symmetric_basis(n: int) -> StructuredBasis:
    """e_ii for each i, then (e_ij + e_ji)/sqrt(2) for i < j, row-major."""
    if n < 1:
        raise ValueError("n must be positive")
    rows, cols, idx, vals = [], [], [], []
    for i in range(n):
        rows.append(i), cols.append(i), idx.append(i), vals.append(1.0)
    l = n
    h = 1.0 / np.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            rows += [i, j]
            cols += [j, i]
            idx += [l, l]
            vals += [h, h]
            l += 1
    return StructuredBasis(
        n=n,
        kind="symmetric",
        rows=np.array(rows),
        cols=np.array(cols),
        index=np.array(idx),
        values=np.array(vals),
        p=l,
    )


def full_basis(n: int) -> StructuredBasis:
    if n < 1:
        raise ValueError("n must be positive")
    i, j = np.indices((n, n))
    return StructuredBasis(
        n=n,
        kind="full",
        rows=i.ravel(),
        cols=j.ravel(),
        index=np.arange(n * n),
        values=np.ones(n * n),
        p=n * n,
    )


def sparse_pattern_basis(pattern, n: int | None = None) -> StructuredBasis:
    """One unit matrix e_ij per pattern entry (0-based), sorted row-major.

    ``n`` defaults to one more than the largest index in the pattern.
    """
    entries = [(int(i), int(j)) for i, j in pattern]
    if not entries:
        raise ValueError("sparse pattern must be nonempty")
    if len(set(entries)) != len(entries):
        raise ValueError("sparse pattern has duplicate entries")
    if n is None:
        n = 1 + max(max(i, j) for i, j in entries)
    for i, j in entries:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"pattern entry {(i, j)} out of range for n={n}")
    entries.sort()
    arr = np.array(entries, dtype=np.int64)
    p = len(entries)
    return StructuredBasis(
        n=n,
        kind="sparse-pattern",
        rows=arr[:, 0],
        cols=arr[:, 1],
        index=np.arange(p),
        values=np.ones(p),
        p=p,
        pattern=tuple(entries),
    )


def materialize(basis: StructuredBasis, delta) -> np.ndarray:
    """Return sum_l B_l * delta_l as a dense n x n matrix."""
    delta = np.asarray(delta, dtype=float)
    if delta.shape != (basis.p,):
        raise ValueError(f"expected {basis.p} coefficients, got shape {delta.shape}")
    out = np.zeros(basis.n * basis.n)
    flat = basis.rows * basis.n + basis.cols
    np.add.at(out, flat, basis.values * delta[basis.index])
    return out.reshape(basis.n, basis.n)


def coefficients_of(basis: StructuredBasis, A) -> tuple[np.ndarray, float]:
    """Frobenius inner products <B_l, A> and the norm of what is left over."""
    A = np.asarray(A, dtype=float)
    if A.shape != (basis.n, basis.n):
        raise ValueError(f"expected a {basis.n}x{basis.n} matrix, got {A.shape}")
    alpha = np.bincount(
        basis.index, weights=basis.values * A[basis.rows, basis.cols], minlength=basis.p
    )
    residual = np.linalg.norm(A - materialize(basis, alpha))
    return alpha, float(residual)


def make_instance(A, basis: StructuredBasis, rtol: float = 1e-10) -> ProblemInstance:
    """Pair a matrix with its structure, rejecting matrices outside the span."""
    A = np.asarray(A, dtype=float)
    alpha, res = coefficients_of(basis, A)
    if res > rtol * max(1.0, np.linalg.norm(A)):
        raise ValueError(
            f"matrix does not lie in the {basis.kind} structure (residual {res:.3e})"
        )
    return ProblemInstance(A=A, basis=basis, alpha=alpha)
