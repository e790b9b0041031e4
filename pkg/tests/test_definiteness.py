import random

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from folsing.definiteness import MAX_DIMENSION, determinant, is_negative_definite, leading_minors
from oracles import cofactor_det, leibniz_det


@pytest.mark.parametrize(
    "m, minors, verdict",
    [
        ([[-1]], (-1,), True),
        ([[-2, 1], [1, -2]], (-2, 3), True),
        ([[-1, 1], [1, -1]], (-1, 0), False),
        ([[-2, 1, 1], [1, -2, 0], [1, 0, -2]], (-2, 3, -4), True),
    ],
)
def test_examples(m, minors, verdict):
    assert leading_minors(m) == minors
    assert is_negative_definite(m) is verdict


def test_zero_pivot_keeps_later_minors_exact():
    # Δ1 = 0 forces the block-by-block path
    m = [[0, 1, 0], [1, 0, 1], [0, 1, -2]]
    assert leading_minors(m) == (0, -1, 2)
    assert leading_minors(m)[2] == leibniz_det(m)


def test_dimension_cap():
    n = MAX_DIMENSION + 1
    with pytest.raises(ValueError):
        leading_minors([[-2 if i == j else 0 for j in range(n)] for i in range(n)])
    e8_like = [[-2 if i == j else (1 if abs(i - j) == 1 else 0) for j in range(64)] for i in range(64)]
    assert is_negative_definite(e8_like)


sym_matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.integers(-6, 6), min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2).map(
        lambda vals: _sym(n, vals)
    )
)


def _sym(n, vals):
    m = [[0] * n for _ in range(n)]
    it = iter(vals)
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = next(it)
    return m


@settings(max_examples=300, deadline=None)
@given(sym_matrices)
def test_minors_match_cofactor_expansion(m):
    n = len(m)
    expected = tuple(cofactor_det([row[:k] for row in m[:k]]) for k in range(1, n + 1))
    assert leading_minors(m) == expected
    assert determinant(m) == expected[-1]


@settings(max_examples=300, deadline=None)
@given(sym_matrices)
def test_agrees_with_eigenvalues_when_separated(m):
    eig = np.linalg.eigvalsh(np.array(m, dtype=float))
    assume(np.min(np.abs(eig)) > 1e-6)
    assert is_negative_definite(m) == bool(np.all(eig < 0))


@settings(max_examples=200, deadline=None)
@given(sym_matrices, st.randoms(use_true_random=False))
def test_permutation_invariance(m, rnd):
    n = len(m)
    perm = list(range(n))
    rnd.shuffle(perm)
    pm = [[m[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
    assert is_negative_definite(pm) == is_negative_definite(m)


def _neg_gram(n, vals):
    a = [vals[i * n:(i + 1) * n] for i in range(n)]
    return [[-(sum(a[k][i] * a[k][j] for k in range(n)) + (i == j)) for j in range(n)] for i in range(n)]


neg_definite = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.integers(-3, 3), min_size=n * n, max_size=n * n).map(lambda v: _neg_gram(n, v))
)


@settings(max_examples=200, deadline=None)
@given(neg_definite, st.integers(0, 5), st.integers(1, 5))
def test_decreasing_diagonal_preserves_definiteness(m, idx, amount):
    assert is_negative_definite(m)
    k = idx % len(m)
    m2 = [row[:] for row in m]
    m2[k][k] -= amount
    assert is_negative_definite(m2)


def test_random_tree_matrices_against_eigenvalues():
    from folsing.generator import random_tree_edges, tree_matrix

    rng = random.Random(7)
    seen = {True: 0, False: 0}
    for _ in range(300):
        n = rng.randint(1, 8)
        m = tree_matrix(n, random_tree_edges(rng, n), [rng.choice([-4, -3, -2, -1, 1]) for _ in range(n)])
        eig = np.linalg.eigvalsh(np.array(m, dtype=float))
        if np.min(np.abs(eig)) <= 1e-6:
            continue
        verdict = is_negative_definite(m)
        assert verdict == bool(np.all(eig < 0))
        seen[verdict] += 1
    assert seen[True] > 20 and seen[False] > 20
