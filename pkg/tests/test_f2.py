import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tpatch import f2
from tpatch.errors import DegreeOverflow, DependentBasis, DimensionMismatch, IndexOutOfRange
from tpatch.f2 import F2Matrix, UnionFind, WedgeVector, line_generator, pluecker, wedge


def brute_rank(rows, ncols):
    # size of the row span, by enumeration
    span = {0}
    for r in rows:
        span |= {s ^ r for s in span}
    return len(span).bit_length() - 1


def test_identity_rank_and_nullspace():
    M = F2Matrix.identity(3)
    assert f2.rank(M) == 3
    assert f2.nullspace(M) == []


def test_zero_matrix():
    M = F2Matrix.zeros(2, 3)
    assert f2.rank(M) == 0
    assert len(f2.nullspace(M)) == 3


def test_solve_small_example():
    M = F2Matrix.from_dense([[1, 1], [1, 1]])
    x, ns = f2.solve(M, f2.from_bits([1, 1]))
    assert M.mul_vec(x) == 0b11
    assert len(ns) == 1
    # exhaustive: exactly the two vectors with x0 + x1 = 1 solve it
    sols = [v for v in range(4) if M.mul_vec(v) == 0b11]
    assert sorted(sols) == [1, 2]
    assert f2.solve(M, f2.from_bits([1, 0])) is None


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        F2Matrix.from_dense([[1, 0], [1]])
    with pytest.raises(DimensionMismatch):
        f2.solve(F2Matrix.identity(2), 0b100)


matrices = st.integers(1, 12).flatmap(
    lambda c: st.tuples(st.just(c), st.lists(st.integers(0, 2 ** c - 1), min_size=1, max_size=12)))


@given(matrices)
def test_rank_matches_enumeration(data):
    ncols, rows = data
    assert f2.rank(F2Matrix(rows, ncols)) == brute_rank(rows, ncols)


@settings(max_examples=60)
@given(st.integers(1, 64), st.integers(1, 64), st.integers(0, 2 ** 32))
def test_rank_of_transpose(r, c, seed):
    rng = random.Random(seed)
    M = F2Matrix([rng.getrandbits(c) for _ in range(r)], c)
    assert f2.rank(M) == f2.rank(M.transpose())


@given(matrices, st.integers(0, 2 ** 12 - 1))
def test_solve_and_nullspace(data, b):
    ncols, rows = data
    M = F2Matrix(rows, ncols)
    b &= (1 << len(rows)) - 1
    res = f2.solve(M, b)
    reachable = any(M.mul_vec(x) == b for x in range(2 ** ncols))
    assert (res is not None) == reachable
    ns = f2.nullspace(M)
    assert len(ns) == ncols - f2.rank(M)
    for z in ns:
        assert M.mul_vec(z) == 0
    if res is not None:
        x, _ = res
        assert M.mul_vec(x) == b
        for z in ns:
            assert M.mul_vec(x ^ z) == b


def test_inverse():
    M = F2Matrix.from_dense([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    inv = f2.inverse(M)
    for i in range(3):
        for j in range(3):
            val = 0
            for k in range(3):
                val ^= M.entry(i, k) & inv.entry(k, j)
            assert val == (i == j)
    with pytest.raises(DependentBasis):
        f2.inverse(F2Matrix.from_dense([[1, 1], [1, 1]]))


def test_echelon_reduction_is_canonical():
    basis = f2.echelon_basis([0b110, 0b011])
    reps = {f2.reduce_mod(v, basis) for v in range(8)}
    assert len(reps) == 2
    for v in range(8):
        for w in (0, 0b110, 0b011, 0b101):
            assert f2.reduce_mod(v ^ w, basis) == f2.reduce_mod(v, basis)


def e(i, n=3):
    return WedgeVector.from_vector(1 << (i - 1), n)


def test_wedge_examples():
    assert wedge(e(1), e(2)).support == {(0, 1)}
    assert wedge(e(1), e(1)).is_zero()
    u = e(1) + e(2)
    v = e(2) + e(3)
    assert wedge(u, v) == WedgeVector(3, 2, [(0, 1), (0, 2), (1, 2)])
    with pytest.raises(DegreeOverflow):
        wedge(wedge(e(1), e(2)), wedge(e(2), e(3)))


def test_pluecker_examples():
    assert pluecker([0b01, 0b10], 2) == WedgeVector.top(2)
    assert pluecker([0b11, 0b11], 2).is_zero()
    w = pluecker([f2.from_bits([1, 0, 1]), f2.from_bits([0, 1, 1])], 3)
    assert w.support == {(0, 1), (0, 2), (1, 2)}


def test_colex_order():
    w = WedgeVector(3, 2, [(0, 2)])
    # colex order of 2-subsets of {1,2,3}: 12, 13, 23
    assert w.to_list() == [0, 1, 0]
    with pytest.raises(IndexOutOfRange):
        WedgeVector(3, 2, [(0, 3)])
    with pytest.raises(DegreeOverflow):
        WedgeVector(17, 1)


def test_line_generator_examples():
    assert line_generator([0b10], 2).support == {(1,)}
    assert line_generator([0b001, 0b010, 0b100], 3) == WedgeVector.top(3)
    with pytest.raises(DependentBasis):
        line_generator([0b11, 0b11], 2)


@settings(max_examples=80)
@given(st.integers(2, 7), st.integers(1, 7), st.integers(0, 2 ** 32))
def test_line_generator_basis_independent(n, k, seed):
    k = min(k, n)
    rng = random.Random(seed)
    basis = []
    while len(basis) < k:
        v = rng.getrandbits(n)
        if f2.independent(basis + [v]):
            basis.append(v)
    # random invertible change of basis
    while True:
        A = [rng.getrandbits(k) for _ in range(k)]
        if f2.rank_of_rows(A) == k:
            break
    other = []
    for row in A:
        v = 0
        for j in range(k):
            if (row >> j) & 1:
                v ^= basis[j]
        other.append(v)
    g = line_generator(basis, n)
    assert not g.is_zero()
    assert line_generator(other, n) == g


@given(st.integers(2, 6), st.lists(st.integers(0, 63), min_size=1, max_size=4))
def test_pluecker_zero_iff_dependent(n, vecs):
    vecs = [v & ((1 << n) - 1) for v in vecs]
    if len(vecs) > n:
        return
    assert pluecker(vecs, n).is_zero() == (not f2.independent(vecs))


def test_union_find_examples():
    uf = UnionFind(5)
    assert uf.count == 5
    uf.union(0, 1)
    uf.union(1, 2)
    assert uf.count == 3
    assert uf.find(0) == uf.find(2)
    with pytest.raises(IndexOutOfRange):
        uf.find(5)


@given(st.integers(1, 30), st.lists(st.tuples(st.integers(0, 29), st.integers(0, 29)), max_size=40))
def test_union_find_against_bfs(size, pairs):
    pairs = [(a % size, b % size) for a, b in pairs]
    uf = UnionFind(size)
    for a, b in pairs:
        uf.union(a, b)
    adj = {i: set() for i in range(size)}
    for a, b in pairs:
        adj[a].add(b)
        adj[b].add(a)
    seen, comps = set(), 0
    for s in range(size):
        if s in seen:
            continue
        comps += 1
        stack = [s]
        while stack:
            x = stack.pop()
            if x not in seen:
                seen.add(x)
                stack.extend(adj[x])
    assert uf.count == comps
    labels = uf.labels()
    for a, b in pairs:
        assert labels[a] == labels[b]


def test_bits_roundtrip():
    for bits in product([0, 1], repeat=4):
        assert f2.to_bits(f2.from_bits(bits), 4) == list(bits)
