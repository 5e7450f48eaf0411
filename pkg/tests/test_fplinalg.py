import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from centdet.fplinalg import (
    FpMatrix,
    FpSubspace,
    LinSolver,
    _rref_bits,
    _rref_generic,
    _pack_rows,
    _unpack_rows,
    image_basis,
    intersect,
    kernel_basis,
    kronecker,
    matmul_mod,
    rref,
    solve_preimage,
    subspace_sum,
)


def random_matrix(rng, p, rows, cols):
    return FpMatrix(p, rng.integers(0, p, size=(rows, cols), dtype=np.int64))


def test_rref_identity():
    m = FpMatrix.identity(2, 3)
    R, pivots, rank = rref(m)
    assert R == m
    assert rank == 3
    assert pivots == (0, 1, 2)


def test_rref_duplicate_rows():
    m = FpMatrix(2, [[1, 1], [1, 1]])
    R, pivots, rank = rref(m)
    assert rank == 1
    assert np.array_equal(R.arr, [[1, 1], [0, 0]])


def test_rref_idempotent():
    rng = np.random.default_rng(7)
    for p in (2, 3, 5):
        m = random_matrix(rng, p, 17, 23)
        R1, _, _ = rref(m)
        R2, _, _ = rref(R1)
        assert R1 == R2


def test_rank_nullity_random_50x70():
    rng = np.random.default_rng(0)
    m = random_matrix(rng, 2, 50, 70)
    _, _, rank = rref(m)
    ker = kernel_basis(m)
    assert rank + ker.dim == 70
    for row in ker.basis.arr:
        assert not matmul_mod(m.arr, row[:, None], 2).any()


def test_kernel_trivial_cases():
    zero = FpMatrix.zeros(2, 2, 3)
    assert kernel_basis(zero) == FpSubspace.full(2, 3)
    ident = FpMatrix.identity(2, 4)
    assert kernel_basis(ident).dim == 0
    m = FpMatrix(2, [[1, 1]])
    ker = kernel_basis(m)
    assert ker.dim == 1
    assert ker.contains(np.array([1, 1], dtype=np.uint8))


def test_image_basis():
    ident = FpMatrix.identity(2, 4)
    assert image_basis(ident) == FpSubspace.full(2, 4)
    zero = FpMatrix.zeros(2, 3, 2)
    assert image_basis(zero).dim == 0
    rng = np.random.default_rng(3)
    m = random_matrix(rng, 3, 12, 9)
    _, _, rank = rref(m)
    assert image_basis(m).dim == rank


def test_solve_preimage():
    rng = np.random.default_rng(5)
    m = random_matrix(rng, 2, 6, 8)
    full = FpSubspace.full(2, 6)
    assert solve_preimage(m, full) == FpSubspace.full(2, 8)
    zero = FpSubspace.zero(2, 6)
    assert solve_preimage(m, zero) == kernel_basis(m)
    ident = FpMatrix.identity(2, 6)
    tgt = FpSubspace.from_spanning(2, 6, rng.integers(0, 2, size=(2, 6)))
    assert solve_preimage(ident, tgt) == tgt


@given(
    p=st.sampled_from([2, 3]),
    rows=st.integers(0, 12),
    cols=st.integers(1, 12),
    seed=st.integers(0, 10_000),
)
@settings(max_examples=60, deadline=None)
def test_rank_nullity_property(p, rows, cols, seed):
    rng = np.random.default_rng(seed)
    m = random_matrix(rng, p, rows, cols)
    _, _, rank = rref(m)
    assert rank + kernel_basis(m).dim == cols


@given(seed=st.integers(0, 10_000), dim=st.integers(1, 8))
@settings(max_examples=40, deadline=None)
def test_intersect_sum_dimension_formula(seed, dim):
    rng = np.random.default_rng(seed)
    a = FpSubspace.from_spanning(2, dim, rng.integers(0, 2, size=(3, dim)))
    b = FpSubspace.from_spanning(2, dim, rng.integers(0, 2, size=(3, dim)))
    cap = intersect(a, b)
    cup = subspace_sum(a, b)
    assert a.dim + b.dim == cap.dim + cup.dim
    # brute force check by enumerating all vectors of the ambient space
    vectors = [np.array([(v >> i) & 1 for i in range(dim)], dtype=np.uint8)
               for v in range(2 ** dim)]
    n_cap = sum(1 for v in vectors if a.contains(v) and b.contains(v))
    assert n_cap == 2 ** cap.dim


def test_intersect_trivial():
    a = FpSubspace.from_spanning(2, 4, [[1, 0, 1, 0], [0, 1, 0, 0]])
    assert intersect(a, a) == a
    zero = FpSubspace.zero(2, 4)
    assert intersect(a, zero) == zero


def test_kronecker():
    i2 = FpMatrix.identity(2, 2)
    i3 = FpMatrix.identity(2, 3)
    assert kronecker(i2, i3) == FpMatrix.identity(2, 6)
    z = FpMatrix.zeros(2, 2, 2)
    assert not kronecker(i2, z).arr.any()
    rng = np.random.default_rng(11)
    a = random_matrix(rng, 2, 4, 4)
    b = random_matrix(rng, 2, 4, 4)
    _, _, ra = rref(a)
    _, _, rb = rref(b)
    _, _, rab = rref(kronecker(a, b))
    assert rab == ra * rb


@given(seed=st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_packed_agrees_with_generic(seed):
    rng = np.random.default_rng(seed)
    rows = int(rng.integers(1, 60))
    cols = int(rng.integers(1, 60))
    arr = rng.integers(0, 2, size=(rows, cols), dtype=np.int64)
    Rb, pb = _rref_bits(_pack_rows(arr.astype(np.uint8)), cols)
    Rg, pg = _rref_generic(arr, 2)
    assert pb == pg
    assert np.array_equal(_unpack_rows(Rb, cols), Rg)


def test_packed_agrees_with_generic_200x200():
    rng = np.random.default_rng(42)
    arr = rng.integers(0, 2, size=(200, 200), dtype=np.int64)
    Rb, pb = _rref_bits(_pack_rows(arr.astype(np.uint8)), 200)
    Rg, pg = _rref_generic(arr, 2)
    assert pb == pg
    assert np.array_equal(_unpack_rows(Rb, 200), Rg)


def test_pack_roundtrip():
    rng = np.random.default_rng(1)
    arr = rng.integers(0, 2, size=(5, 130), dtype=np.int64).astype(np.uint8)
    assert np.array_equal(_unpack_rows(_pack_rows(arr), 130), arr)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_linsolver_consistent_and_inconsistent(p):
    rng = np.random.default_rng(17)
    m = random_matrix(rng, p, 15, 11)
    solver = LinSolver(m)
    x_true = rng.integers(0, p, size=11, dtype=np.int64).astype(np.uint8)
    b = matmul_mod(m.arr, x_true[:, None], p)[:, 0]
    x = solver.solve(b)
    assert x is not None
    assert np.array_equal(matmul_mod(m.arr, x[:, None], p)[:, 0], b)
    # second solution also solves, and differs when the kernel is nontrivial
    x2 = solver.second_solution(b)
    assert np.array_equal(matmul_mod(m.arr, x2[:, None], p)[:, 0], b)
    if solver.nullity() > 0:
        assert not np.array_equal(x, x2)
    # kernel rows actually lie in the kernel
    for row in solver.kernel_rows():
        assert not matmul_mod(m.arr, row[:, None], p).any()
    assert solver.rank + len(solver.kernel_rows()) == 11


def test_linsolver_detects_inconsistency():
    m = FpMatrix(2, [[1, 0], [1, 0]])
    solver = LinSolver(m)
    assert solver.solve(np.array([1, 0], dtype=np.uint8)) is None


def test_subspace_hashable_and_equal():
    a = FpSubspace.from_spanning(2, 3, [[1, 1, 0], [0, 0, 1]])
    b = FpSubspace.from_spanning(2, 3, [[1, 1, 1], [0, 0, 1]])
    assert a == b
    assert hash(a) == hash(b)


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        FpMatrix(4, [[1]])
