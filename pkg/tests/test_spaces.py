import itertools

import numpy as np
import pytest

from structsing.numerics import svd
from structsing.projection import assemble_reduced, solve_exact
from structsing.spaces import (
    Block,
    LeftKernel,
    RightKernel,
    block_indices,
    contains,
    dimension,
    from_svd_block,
    from_svd_left,
    from_svd_right,
    pattern_max_rank,
    project_complement,
    sample_element,
)
from structsing.structures import make_instance, materialize, symmetric_basis

EXAMPLE_PATTERN = [(0, 0), (0, 1), (0, 2), (1, 2), (2, 2)]


def example_family(x, y, z):
    return np.array([[y, x, 0.0], [0.0, z, y], [-z, 0.0, x]])


def random_space(rng, n):
    res = svd(rng.standard_normal((n, n)))
    kind = rng.integers(3)
    if kind == 0:
        return from_svd_right(res)
    if kind == 1:
        return from_svd_left(res)
    size_i = int(rng.integers(1, n + 1))
    return from_svd_block(res, size_i, n + 1 - size_i)


def test_from_svd_right_examples():
    assert np.allclose(np.abs(from_svd_right(svd(np.diag([3.0, 1.0]))).v), [0, 1])
    # C^T C = diag(1, 4): sigma_min = 1 with v = +-e1
    sp_ = from_svd_right(svd(np.array([[0.0, 2.0], [1.0, 0.0]])))
    assert np.allclose(np.abs(sp_.v), [1, 0])
    C = np.outer([1.0, 2.0], [3.0, 1.0])
    assert np.linalg.norm(C @ from_svd_right(svd(C)).v) <= 1e-12


def test_from_svd_left_examples():
    assert np.allclose(np.abs(from_svd_left(svd(np.diag([3.0, 1.0]))).u), [0, 1])
    u = np.array([0.6, 0.8])
    C = 2.0 * np.outer(u, [1.0, 0.0])
    assert abs(from_svd_left(svd(C)).u @ u) <= 1e-12
    S = np.array([[2.0, 1.0], [1.0, 3.0]])
    res = svd(S)
    assert abs(from_svd_left(res).u @ from_svd_right(res).v) == pytest.approx(1)


def test_block_index_bookkeeping():
    I, J = block_indices(3, 2, 2)
    assert I == (1, 2) and J == (0, 2)
    sig = np.diag([5.0, 2.0, 0.5])
    assert np.allclose(sig[np.ix_(I, J)], [[0, 0], [0, 0.5]])
    with pytest.raises(ValueError):
        block_indices(3, 2, 3)
    with pytest.raises(ValueError):
        block_indices(3, 0, 4)


@pytest.mark.parametrize("n", range(2, 7))
def test_block_sigma_block_holds_only_sigma_min(n):
    sig = np.diag(np.linspace(n, 1, n))
    for size_i in range(1, n + 1):
        I, J = block_indices(n, size_i, n + 1 - size_i)
        blk = sig[np.ix_(I, J)]
        assert np.linalg.norm(blk) == pytest.approx(1.0)


def test_block_size_one_equals_left_kernel():
    C = np.random.default_rng(0).standard_normal((4, 4))
    res = svd(C)
    blk = from_svd_block(res, 1, 4)
    left = from_svd_left(res)
    D = np.random.default_rng(1).standard_normal((4, 4))
    assert np.allclose(project_complement(blk, D)[0], project_complement(left, D)[0])


def test_singular_input_is_contained():
    rng = np.random.default_rng(2)
    C = rng.standard_normal((4, 3)) @ rng.standard_normal((3, 4))
    res = svd(C)
    for space in (from_svd_right(res), from_svd_left(res), from_svd_block(res, 2, 3)):
        assert contains(space, C, tol=1e-12)


def test_project_complement_examples():
    P, nrm = project_complement(RightKernel(np.array([0.0, 1.0])), np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert np.allclose(P, [[0, 2], [0, 4]]) and nrm == pytest.approx(np.sqrt(20))
    space = RightKernel(np.array([0.6, 0.8]))
    D = sample_element(space, seed=0)
    P, nrm = project_complement(space, D)
    assert np.allclose(P, 0, atol=1e-12) and nrm <= 1e-12
    with pytest.raises(ValueError):
        project_complement(space, np.eye(3))


@pytest.mark.parametrize("seed", range(10))
def test_kernel_and_block_choices_attain_sigma_min(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    C = rng.standard_normal((n, n))
    res = svd(C)
    spaces = [from_svd_right(res), from_svd_left(res)]
    spaces += [from_svd_block(res, k, n + 1 - k) for k in range(1, n + 1)]
    for space in spaces:
        P, nrm = project_complement(space, C)
        assert nrm == pytest.approx(res.sigma[-1], abs=1e-10 * res.sigma[0])
        assert contains(space, C - P)


def test_block_space_is_singular_and_within_flanders_bound():
    """Every sampled element of every constructed space is singular."""
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        space = random_space(rng, n)
        assert dimension(space) <= n * (n - 1)
        if not isinstance(space, Block):
            assert dimension(space) == n * (n - 1)
        M = sample_element(space, seed=rng.integers(2**32))
        s = np.linalg.svd(M, compute_uv=False)
        worst = max(worst, s[-1] / max(1.0, s[0]))
    assert worst <= 1e-10


def test_sample_element_membership():
    rng = np.random.default_rng(5)
    res = svd(rng.standard_normal((5, 5)))
    v = from_svd_right(res)
    assert np.linalg.norm(sample_element(v, 1) @ v.v) <= 1e-12
    blk = from_svd_block(res, 3, 3)
    M = sample_element(blk, 2)
    core = (blk.U.T @ M @ blk.V)[np.ix_(blk.I, blk.J)]
    assert np.linalg.norm(core) <= 1e-12


def test_cyclic_family_determinant_vanishes():
    # det M(x, y, z) expands to x y z - x y z
    rng = np.random.default_rng(11)
    for x, y, z in rng.standard_normal((100, 3)):
        assert abs(np.linalg.det(example_family(x, y, z))) <= 1e-12


def test_pattern_max_rank_examples():
    # enumerate all 6 permutations by hand: the best hits 2 cells
    assert pattern_max_rank(EXAMPLE_PATTERN, 3) == 2
    hits = [sum((i, p[i]) in EXAMPLE_PATTERN for i in range(3)) for p in itertools.permutations(range(3))]
    assert max(hits) == 2
    for n in (1, 3, 5):
        full = [(i, j) for i in range(n) for j in range(n)]
        assert pattern_max_rank(full, n) == n
    assert pattern_max_rank([], 4) == 0
    with pytest.raises(ValueError):
        pattern_max_rank([(0, 0)], 11)


def random_rank_on_pattern(pattern, n, rng, draws=20):
    best = 0
    for _ in range(draws):
        M = np.zeros((n, n))
        for i, j in pattern:
            M[i, j] = rng.standard_normal()
        best = max(best, np.linalg.matrix_rank(M))
    return best


def test_max_rank_two_oracles_agree():
    rng = np.random.default_rng(13)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        density = rng.uniform(0.1, 0.7)
        pattern = [(i, j) for i in range(n) for j in range(n) if rng.random() < density]
        assert pattern_max_rank(pattern, n) == random_rank_on_pattern(pattern, n, rng)


def test_staircase_pattern_space_is_singular():
    rng = np.random.default_rng(1)
    assert random_rank_on_pattern(EXAMPLE_PATTERN, 3, rng) == 2


def test_symmetric_structure_kernel_spaces_coincide():
    rng = np.random.default_rng(17)
    for _ in range(50):
        n = int(rng.integers(2, 11))
        basis = symmetric_basis(n)
        A = materialize(basis, rng.standard_normal(basis.p))
        inst = make_instance(A, basis)
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        d_right, _ = solve_exact(assemble_reduced(basis, RightKernel(v), inst.A))
        d_left, _ = solve_exact(assemble_reduced(basis, LeftKernel(v), inst.A))
        assert np.linalg.norm(d_right) == pytest.approx(np.linalg.norm(d_left), abs=1e-10)
