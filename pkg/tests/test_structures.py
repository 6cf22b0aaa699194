import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from structsing.structures import (
    BasisWarning,
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

BUILDERS = [toeplitz_basis, hankel_basis, symmetric_basis, full_basis]


def E(n, i, j):
    m = np.zeros((n, n))
    m[i, j] = 1.0
    return m


def gram(basis):
    X = basis.matrix.toarray()
    return X.T @ X


@pytest.mark.parametrize("builder", BUILDERS)
@pytest.mark.parametrize("n", [1, 2, 3, 7])
def test_builders_orthonormal(builder, n):
    b = builder(n)
    assert np.allclose(gram(b), np.eye(b.p), atol=1e-12 * n)


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_basis_sizes(n):
    assert toeplitz_basis(n).p == 2 * n - 1
    assert hankel_basis(n).p == 2 * n - 1
    assert symmetric_basis(n).p == n * (n + 1) // 2
    assert full_basis(n).p == n * n


def test_toeplitz_small():
    assert np.allclose(toeplitz_basis(1).elements[0], [[1.0]])
    els = toeplitz_basis(2).elements
    assert np.allclose(els[0], E(2, 1, 0))
    assert np.allclose(els[1], np.eye(2) / np.sqrt(2))
    assert np.allclose(els[2], E(2, 0, 1))
    els3 = toeplitz_basis(3).elements
    assert len(els3) == 5
    assert np.allclose(els3[2], np.eye(3) / np.sqrt(3))


def test_other_builders_small():
    els = sparse_pattern_basis([(0, 0)], n=2).elements
    assert len(els) == 1 and np.allclose(els[0], E(2, 0, 0))
    sym = symmetric_basis(2).elements
    assert np.allclose(sym[0], E(2, 0, 0))
    assert np.allclose(sym[1], E(2, 1, 1))
    assert np.allclose(sym[2], (E(2, 0, 1) + E(2, 1, 0)) / np.sqrt(2))
    full = full_basis(2).elements
    for l, (i, j) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        assert np.allclose(full[l], E(2, i, j))


def test_sparse_pattern_sorted_and_validated():
    b = sparse_pattern_basis([(1, 0), (0, 1)], n=2)
    assert b.pattern == ((0, 1), (1, 0))
    for l, el in enumerate(b.elements):
        assert np.count_nonzero(el) == 1
        assert el[b.pattern[l]] == 1.0
    with pytest.raises(ValueError):
        sparse_pattern_basis([(0, 0), (0, 0)], n=2)
    with pytest.raises(ValueError):
        sparse_pattern_basis([(2, 0)], n=2)
    with pytest.raises(ValueError):
        sparse_pattern_basis([], n=2)


def test_orthonormalize_examples():
    b = orthonormalize([E(2, 0, 0), E(2, 1, 1)])
    assert b.p == 2
    assert np.allclose(b.elements[0], E(2, 0, 0))
    assert np.allclose(b.elements[1], E(2, 1, 1))

    with pytest.warns(BasisWarning, match=r"\[1\]"):
        b = orthonormalize([np.eye(2), np.diag([2.0, 2.0])])
    assert b.p == 1 and b.discarded == (1,)
    assert np.allclose(b.elements[0], np.eye(2) / np.sqrt(2))

    # hand Gram-Schmidt: e11 - <e11, I/sqrt2> I/sqrt2 = diag(1/2, -1/2)
    b = orthonormalize([np.eye(2), E(2, 0, 0)])
    assert b.p == 2
    assert np.allclose(b.elements[0], np.eye(2) / np.sqrt(2))
    assert np.allclose(b.elements[1], np.diag([1.0, -1.0]) / np.sqrt(2))


def test_orthonormalize_errors():
    with pytest.raises(ValueError):
        orthonormalize([])
    with pytest.raises(ValueError):
        orthonormalize([np.eye(2), np.eye(3)])


def test_orthonormalize_idempotent():
    rng = np.random.default_rng(3)
    raw = [rng.standard_normal((4, 4)) for _ in range(6)]
    b1 = orthonormalize(raw)
    b2 = orthonormalize(b1.elements)
    for x, y in zip(b1.elements, b2.elements):
        assert np.allclose(x, y, atol=1e-12)


def test_materialize_examples():
    assert np.allclose(materialize(toeplitz_basis(2), [0, np.sqrt(2), 0]), np.eye(2))
    assert np.allclose(materialize(symmetric_basis(3), np.zeros(6)), 0)
    assert np.allclose(materialize(full_basis(2), [1, 2, 3, 4]), [[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        materialize(full_basis(2), [1, 2, 3])


def test_coefficients_examples():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((3, 3))
    alpha, res = coefficients_of(full_basis(3), A)
    assert np.allclose(alpha, A.ravel()) and res == pytest.approx(0, abs=1e-14)

    alpha, res = coefficients_of(toeplitz_basis(2), [[1.0, 0.0], [0.0, 0.0]])
    assert np.allclose(alpha, [0, 1 / np.sqrt(2), 0])
    assert res == pytest.approx(1 / np.sqrt(2))

    alpha, res = coefficients_of(symmetric_basis(2), [[0.0, 1.0], [-1.0, 0.0]])
    assert np.allclose(alpha, 0) and res == pytest.approx(np.sqrt(2))


def test_make_instance_rejects_unstructured():
    with pytest.raises(ValueError):
        make_instance([[1.0, 2.0], [3.0, 4.0]], toeplitz_basis(2))
    inst = make_instance([[2.0, 1.0], [1.0, 2.0]], toeplitz_basis(2))
    assert np.allclose(materialize(inst.basis, inst.alpha), inst.A)


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(BUILDERS),
    st.integers(1, 6),
    st.integers(0, 2**32 - 1),
)
def test_round_trip_and_parseval(builder, n, seed):
    b = builder(n)
    delta = np.random.default_rng(seed).standard_normal(b.p)
    A = materialize(b, delta)
    alpha, res = coefficients_of(b, A)
    assert np.allclose(alpha, delta, atol=1e-12 * max(1, np.linalg.norm(delta)))
    assert res <= 1e-12 * max(1, np.linalg.norm(A))
    assert np.linalg.norm(A) == pytest.approx(np.linalg.norm(delta), rel=1e-12)
