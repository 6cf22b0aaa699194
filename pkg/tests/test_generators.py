import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from structsing.generators import gen_sparse, gen_toeplitz, toeplitz_diagonals
from structsing.structures import coefficients_of, toeplitz_basis


def test_toeplitz_golden_n3():
    # pinned draw: default_rng(7).standard_normal(5)
    d = [0.00123015, 0.29874554, -0.27413786, -0.89059184, -0.45467079]
    expected = np.array(
        [
            [d[2], d[3], d[4]],
            [d[1], d[2], d[3]],
            [d[0], d[1], d[2]],
        ]
    )
    np.testing.assert_allclose(gen_toeplitz(3, 7), expected, atol=1e-8)
    np.testing.assert_allclose(toeplitz_diagonals(3, 7), d, atol=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 25), st.integers(0, 2**32 - 1))
def test_toeplitz_deterministic_and_structured(n, seed):
    A = gen_toeplitz(n, seed)
    assert np.array_equal(A, gen_toeplitz(n, seed))
    _, res = coefficients_of(toeplitz_basis(n), A)
    assert res <= 1e-12 * max(1.0, np.linalg.norm(A))
    # entry (i, j) depends on j - i only
    for k in range(-(n - 1), n):
        assert np.ptp(np.diagonal(A, k)) == 0.0


def test_toeplitz_seeds_differ():
    assert not np.array_equal(gen_toeplitz(5, 0), gen_toeplitz(5, 1))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 20), st.floats(0.05, 1.0), st.integers(0, 2**32 - 1))
def test_sparse_deterministic_and_consistent(n, p, seed):
    A, pat = gen_sparse(n, p, seed)
    A2, pat2 = gen_sparse(n, p, seed)
    assert np.array_equal(A, A2) and pat == pat2
    assert pat == sorted(pat) and len(pat) == len(set(pat)) > 0
    mask = np.zeros((n, n), dtype=bool)
    for i, j in pat:
        mask[i, j] = True
    assert np.all(A[~mask] == 0.0)


def test_sparse_full_pattern_at_p_one():
    A, pat = gen_sparse(6, 1.0, 3)
    assert len(pat) == 36
    assert np.all(A != 0.0)


def test_sparse_density_concentrates():
    n, p = 30, 0.4
    counts = np.array([len(gen_sparse(n, p, s)[1]) for s in range(100)])
    # each count is Binomial(n^2, p): mean n^2 p, std n sqrt(p (1 - p))
    sd = n * np.sqrt(p * (1 - p))
    assert np.all(np.abs(counts - n * n * p) <= 4 * sd)
    assert abs(counts.mean() - n * n * p) <= 4 * sd / np.sqrt(len(counts))


def test_sparse_values_standard_normal():
    vals = np.concatenate([gen_sparse(40, 0.5, s)[0][gen_sparse(40, 0.5, s)[0] != 0] for s in range(20)])
    assert abs(vals.mean()) < 0.05
    assert abs(vals.std() - 1.0) < 0.05


def test_sparse_resamples_empty_pattern():
    # the first draw for seed 11 is empty, so this goes through the redraw path
    A, pat = gen_sparse(2, 0.01, 11)
    assert len(pat) >= 1 and np.count_nonzero(A) == len(pat)


@pytest.mark.parametrize("bad", [dict(n=1, p=0.5), dict(n=4, p=0.0), dict(n=4, p=1.5)])
def test_sparse_rejects_bad_args(bad):
    with pytest.raises(ValueError):
        gen_sparse(bad["n"], bad["p"], 0)


def test_toeplitz_rejects_small_n():
    with pytest.raises(ValueError):
        gen_toeplitz(1, 0)
