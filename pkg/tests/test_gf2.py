import numpy as np
import pytest

from stairfec import gf2


def naive_mat_mul(a, b):
    a = np.asarray(a, dtype=int)
    b = np.asarray(b, dtype=int)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=int)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            acc = 0
            for l in range(a.shape[1]):
                acc ^= a[i, l] & b[l, j]
            out[i, j] = acc
    return out.astype(np.uint8)


def test_mat_mul_matches_naive():
    rng = np.random.default_rng(0)
    for _ in range(20):
        rows, inner, cols = rng.integers(1, 9, size=3)
        a = rng.integers(0, 2, (rows, inner), dtype=np.uint8)
        b = rng.integers(0, 2, (inner, cols), dtype=np.uint8)
        assert (gf2.mat_mul(a, b) == naive_mat_mul(a, b)).all()


def test_mat_mul_dimension_check():
    with pytest.raises(ValueError):
        gf2.mat_mul(gf2.zeros(2, 3), gf2.zeros(4, 2))


def test_mat_mul_large_inner_dimension_stays_exact():
    # column of ones against row of ones: inner sums reach the full width
    n = 3000
    a = np.ones((1, n), dtype=np.uint8)
    b = np.ones((n, 1), dtype=np.uint8)
    assert gf2.mat_mul(a, b)[0, 0] == n % 2


def test_invert_multiplies_back_to_identity():
    rng = np.random.default_rng(1)
    for n in (1, 2, 5, 17, 40, 129):
        # random invertible matrix: start from identity, apply row ops
        a = gf2.identity(n)
        for _ in range(4 * n):
            i, j = rng.integers(0, n, 2)
            if i != j:
                a[i] ^= a[j]
        inv = gf2.invert(a)
        assert (gf2.mat_mul(a, inv) == gf2.identity(n)).all()
        assert (gf2.mat_mul(inv, a) == gf2.identity(n)).all()


def test_invert_singular_raises():
    a = np.array([[1, 1], [1, 1]], dtype=np.uint8)
    with pytest.raises(gf2.SingularMatrixError):
        gf2.invert(a)


def test_rank():
    assert gf2.rank(gf2.identity(5)) == 5
    assert gf2.rank(gf2.zeros(3, 4)) == 0
    a = np.array([[1, 0, 1], [0, 1, 1], [1, 1, 0]], dtype=np.uint8)
    # third row is the sum of the first two
    assert gf2.rank(a) == 2


def test_vec_unvec_exhaustive_small():
    for rows in range(1, 5):
        for cols in range(1, 5):
            q = np.arange(rows * cols, dtype=np.uint8).reshape(rows, cols) % 2
            for order in ("col", "row"):
                v = gf2.vec(q, order=order)
                assert (gf2.unvec(v, rows, cols, order=order) == q).all()
    # column-wise convention: v[j*rows + i] == q[i, j]
    q = np.array([[1, 0], [0, 1], [1, 1]], dtype=np.uint8)
    v = gf2.vec(q)
    for i in range(3):
        for j in range(2):
            assert v[j * 3 + i] == q[i, j]


def test_kron_mixed_product():
    rng = np.random.default_rng(2)
    for _ in range(10):
        a = rng.integers(0, 2, (3, 2), dtype=np.uint8)
        b = rng.integers(0, 2, (2, 4), dtype=np.uint8)
        x = rng.integers(0, 2, (2, 1), dtype=np.uint8)
        y = rng.integers(0, 2, (4, 1), dtype=np.uint8)
        lhs = gf2.mat_mul(gf2.kron(a, b), gf2.kron(x, y))
        rhs = gf2.kron(gf2.mat_mul(a, x), gf2.mat_mul(b, y))
        assert (lhs == rhs).all()


def test_elementary_perm_shifts_and_composes():
    m = 7
    x = np.arange(m, dtype=np.uint8) % 2
    e1 = gf2.elementary_perm(m, 1)
    assert (gf2.mat_mul(e1, x) == np.roll(x, -1)).all()
    for i in range(m):
        for j in range(m):
            lhs = gf2.mat_mul(gf2.elementary_perm(m, i), gf2.elementary_perm(m, j))
            assert (lhs == gf2.elementary_perm(m, (i + j) % m)).all()
    assert (gf2.elementary_perm(m, m) == gf2.identity(m)).all()


def test_block_diag():
    a = gf2.identity(2)
    b = np.array([[0, 1], [1, 0]], dtype=np.uint8)
    d = gf2.block_diag([a, b])
    assert d.shape == (4, 4)
    assert (d[:2, :2] == a).all() and (d[2:, 2:] == b).all()
    assert d[:2, 2:].sum() == 0 and d[2:, :2].sum() == 0
    with pytest.raises(ValueError):
        gf2.block_diag([gf2.identity(2), gf2.identity(3)])


def test_transpose_perm_property():
    rng = np.random.default_rng(3)
    for rows, cols in [(2, 3), (4, 4), (5, 2), (1, 6)]:
        p = gf2.transpose_perm(rows, cols)
        y = rng.integers(0, 2, (rows, cols), dtype=np.uint8)
        assert (gf2.mat_mul(p, gf2.vec(y)) == gf2.vec(y.T)).all()


def test_perm_indices_round_trip():
    rng = np.random.default_rng(4)
    idx = rng.permutation(9)
    p = gf2.perm_matrix(idx)
    assert (gf2.perm_indices(p) == idx).all()
    x = rng.integers(0, 2, 9, dtype=np.uint8)
    assert (gf2.mat_mul(p, x) == x[idx]).all()
    inv = gf2.invert_indices(idx)
    assert (x[idx][inv] == x).all()
    with pytest.raises(ValueError):
        gf2.perm_indices(np.ones((2, 2), dtype=np.uint8))


def test_text_round_trip():
    rng = np.random.default_rng(5)
    a = rng.integers(0, 2, (4, 7), dtype=np.uint8)
    assert (gf2.from_text(gf2.to_text(a)) == a).all()
    with pytest.raises(ValueError):
        gf2.from_text("101\n10")
