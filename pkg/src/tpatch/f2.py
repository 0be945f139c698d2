"""Linear and exterior algebra over F2, plus a union-find.

Vectors are plain Python ints used as bitsets: bit ``i`` is coordinate
``i``. A matrix is a list of such ints (its rows) together with a column
count.
"""
from __future__ import annotations

from itertools import combinations

from .errors import DegreeOverflow, DependentBasis, DimensionMismatch, IndexOutOfRange

WEDGE_MAX_DIM = 16


def parity(x: int) -> int:
    return x.bit_count() & 1


def dot(u: int, v: int) -> int:
    """Standard pairing of two bit vectors."""
    return (u & v).bit_count() & 1


def from_bits(bits) -> int:
    out = 0
    for i, b in enumerate(bits):
        if int(b) & 1:
            out |= 1 << i
    return out


def to_bits(x: int, n: int) -> list[int]:
    return [(x >> i) & 1 for i in range(n)]


def from_coords(coords) -> int:
    """Reduce an integer vector mod 2."""
    out = 0
    for i, c in enumerate(coords):
        if c & 1:
            out |= 1 << i
    return out


class F2Matrix:
    """Dense matrix over F2 stored as bit rows."""

    def __init__(self, rows, ncols: int):
        self.rows = [int(r) for r in rows]
        self.ncols = ncols
        lim = 1 << ncols
        for r in self.rows:
            if r < 0 or r >= lim:
                raise DimensionMismatch(f"row {r:b} wider than {ncols} columns")

    @classmethod
    def from_dense(cls, dense, ncols: int | None = None):
        dense = [list(r) for r in dense]
        if ncols is None:
            ncols = len(dense[0]) if dense else 0
        for r in dense:
            if len(r) != ncols:
                raise DimensionMismatch("ragged matrix")
        return cls([from_bits(r) for r in dense], ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int):
        return cls([0] * nrows, ncols)

    @classmethod
    def identity(cls, n: int):
        return cls([1 << i for i in range(n)], n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def to_dense(self) -> list[list[int]]:
        return [to_bits(r, self.ncols) for r in self.rows]

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def transpose(self) -> F2Matrix:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return F2Matrix(cols, self.nrows)

    def mul_vec(self, x: int) -> int:
        """Return M x as a bit vector indexed by rows."""
        out = 0
        for i, r in enumerate(self.rows):
            if dot(r, x):
                out |= 1 << i
        return out

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __eq__(self, other):
        return (isinstance(other, F2Matrix) and self.ncols == other.ncols
                and self.rows == other.rows)

    def __repr__(self):
        return f"F2Matrix({self.nrows}x{self.ncols})"


def rank_of_rows(rows) -> int:
    """Rank of a collection of bit vectors (highest-bit pivoting)."""
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            h = r.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = r
                break
            r ^= p
    return len(pivots)


def rank(M: F2Matrix) -> int:
    return rank_of_rows(M.rows)


def _rref(rows, ncols):
    """Gauss-Jordan elimination restricted to the first ``ncols`` columns.

    Returns a list of (pivot column, row) with every pivot column cleared in
    all other rows, plus the list of rows reduced to zero on those columns
    (they may still carry bits above ``ncols``).
    """
    mask = (1 << ncols) - 1
    piv: list[tuple[int, int]] = []
    leftover = []
    for r in rows:
        for c, pr in piv:
            if (r >> c) & 1:
                r ^= pr
        low = r & mask
        if not low:
            leftover.append(r)
            continue
        c = (low & -low).bit_length() - 1
        for k, (c2, pr) in enumerate(piv):
            if (pr >> c) & 1:
                piv[k] = (c2, pr ^ r)
        piv.append((c, r))
    return piv, leftover


def nullspace(M: F2Matrix) -> list[int]:
    """Basis of {x : M x = 0}."""
    piv, _ = _rref(M.rows, M.ncols)
    pivcols = {c for c, _ in piv}
    basis = []
    for f in range(M.ncols):
        if f in pivcols:
            continue
        x = 1 << f
        for c, pr in piv:
            if (pr >> f) & 1:
                x |= 1 << c
        basis.append(x)
    return basis


def solve(M: F2Matrix, b: int):
    """Solve M x = b.

    Returns ``(x, nullspace basis)`` or None when b is not in the column
    space. ``b`` is a bit vector indexed by rows.
    """
    if b >> M.nrows:
        raise DimensionMismatch("right-hand side longer than the row count")
    n = M.ncols
    aug = [r | (((b >> i) & 1) << n) for i, r in enumerate(M.rows)]
    piv, leftover = _rref(aug, n)
    if any(r for r in leftover):
        return None
    x = 0
    for c, pr in piv:
        if (pr >> n) & 1:
            x |= 1 << c
    return x, nullspace(M)


def independent(vectors) -> bool:
    vectors = list(vectors)
    return rank_of_rows(vectors) == len(vectors)


def echelon_basis(vectors) -> list[int]:
    """Reduced echelon basis (each vector owns a lowest pivot bit that is
    zero in all the others)."""
    piv, _ = _rref(list(vectors), max([v.bit_length() for v in vectors] + [0]))
    return [r for _, r in sorted(piv)]


def reduce_mod(v: int, echelon: list[int]) -> int:
    """Canonical representative of v modulo the span of a reduced echelon
    basis: every pivot bit is cleared."""
    for e in echelon:
        low = e & -e
        if v & low:
            v ^= e
    return v


def annihilator(vectors, n: int) -> list[int]:
    """Basis of {x in F2^n : <v, x> = 0 for every v}."""
    return nullspace(F2Matrix(list(vectors), n))


def inverse(M: F2Matrix) -> F2Matrix:
    n = M.ncols
    if M.nrows != n:
        raise DimensionMismatch("inverse of a non-square matrix")
    aug = [r | (1 << (n + i)) for i, r in enumerate(M.rows)]
    piv, _ = _rref(aug, n)
    if len(piv) != n:
        raise DependentBasis("matrix is singular mod 2")
    out = [0] * n
    for c, pr in piv:
        out[c] = pr >> n
    return F2Matrix(out, n)


# exterior algebra

def _colex_key(s):
    return tuple(reversed(s))


class WedgeVector:
    """Element of the k-th exterior power of F2^n.

    Stored as the set of k-subsets (0-based sorted tuples) whose coefficient
    is 1.
    """

    __slots__ = ("n", "degree", "support")

    def __init__(self, n: int, degree: int, support=()):
        if n > WEDGE_MAX_DIM:
            raise DegreeOverflow(f"ambient dimension {n} above {WEDGE_MAX_DIM}")
        if degree < 0 or degree > n:
            raise DegreeOverflow(f"degree {degree} outside [0, {n}]")
        self.n = n
        self.degree = degree
        sup = set()
        for s in support:
            s = tuple(sorted(s))
            if len(s) != degree or (s and (s[0] < 0 or s[-1] >= n)):
                raise IndexOutOfRange(f"bad subset {s} for degree {degree}")
            sup ^= {s}
        self.support = frozenset(sup)

    @classmethod
    def from_vector(cls, v: int, n: int):
        return cls(n, 1, [(i,) for i in range(n) if (v >> i) & 1])

    @classmethod
    def top(cls, n: int):
        return cls(n, n, [tuple(range(n))])

    def subsets(self):
        return sorted(combinations(range(self.n), self.degree), key=_colex_key)

    def to_list(self) -> list[int]:
        """Coefficients in colexicographic subset order."""
        return [1 if s in self.support else 0 for s in self.subsets()]

    def is_zero(self) -> bool:
        return not self.support

    def __add__(self, other):
        if (self.n, self.degree) != (other.n, other.degree):
            raise DimensionMismatch("adding wedge vectors of different shape")
        return WedgeVector(self.n, self.degree, self.support ^ other.support)

    def scale(self, bit: int):
        return self if bit & 1 else WedgeVector(self.n, self.degree)

    def __eq__(self, other):
        return (isinstance(other, WedgeVector) and self.n == other.n
                and self.degree == other.degree and self.support == other.support)

    def __hash__(self):
        return hash((self.n, self.degree, self.support))

    def __repr__(self):
        terms = " + ".join("e" + "".join(str(i + 1) for i in s)
                           for s in sorted(self.support, key=_colex_key))
        return f"WedgeVector(n={self.n}, k={self.degree}, {terms or '0'})"


def wedge(u: WedgeVector, v: WedgeVector) -> WedgeVector:
    """Exterior product; no signs mod 2."""
    if u.n != v.n:
        raise DimensionMismatch("wedge of vectors in different dimensions")
    k = u.degree + v.degree
    if k > u.n:
        raise DegreeOverflow(f"degree {k} exceeds dimension {u.n}")
    acc: set = set()
    for a in u.support:
        sa = set(a)
        for b in v.support:
            if sa.isdisjoint(b):
                acc ^= {tuple(sorted(a + b))}
    return WedgeVector(u.n, k, acc)


def pluecker(vectors, n: int) -> WedgeVector:
    """Plücker coordinates of k bit vectors: the minor determinants mod 2."""
    vectors = list(vectors)
    k = len(vectors)
    sup = []
    for s in combinations(range(n), k):
        mask = 0
        for i in s:
            mask |= 1 << i
        if rank_of_rows([v & mask for v in vectors]) == k:
            sup.append(s)
    return WedgeVector(n, k, sup)


def line_generator(basis, n: int) -> WedgeVector:
    """The unique generator of the top exterior power of span(basis)."""
    basis = list(basis)
    if not independent(basis):
        raise DependentBasis("basis vectors are linearly dependent")
    return pluecker(basis, n)


class UnionFind:
    """Disjoint sets over 0..size-1 with path compression and union by size.

    Parameters
    ----------
    size : int
        Number of elements.
    """

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size
        self.count = size

    def _check(self, x):
        if x < 0 or x >= len(self.parent):
            raise IndexOutOfRange(f"element {x} outside 0..{len(self.parent) - 1}")

    def find(self, x: int) -> int:
        self._check(x)
        root = x
        parent = self.parent
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True

    def labels(self) -> list[int]:
        """Component label per element, numbered by first appearance."""
        seen: dict[int, int] = {}
        out = []
        for x in range(len(self.parent)):
            r = self.find(x)
            if r not in seen:
                seen[r] = len(seen)
            out.append(seen[r])
        return out
