"""Primitive triangulations of the dilated standard simplex.

Knudsen's hyperplane-cut triangulations, Viro sums of a triangulation of a
simplex of size d with one of a facet of size d+1, the two recursive
families built from them, and restriction to a coordinate face.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product

from .errors import DimensionMismatch, InvalidIndexSet, SizeMismatch
from .lattice import LatticePolytope, PrimitiveComplex, complex_from_simplices

FAMILIES = ("knudsen", "viro", "itenberg-viro")


def simplex_size(K: PrimitiveComplex) -> int:
    """The d such that K triangulates the standard simplex of size d."""
    return max(sum(p) for p in K.points)


def segment(d: int) -> PrimitiveComplex:
    """The unique primitive triangulation of [0, d]."""
    pts = [(i,) for i in range(d + 1)]
    return PrimitiveComplex(pts, [(i, i + 1) for i in range(d)],
                            LatticePolytope.standard_simplex(1, d))


def unit_simplex(n: int) -> PrimitiveComplex:
    P = LatticePolytope.standard_simplex(n, 1)
    pts = sorted(P.vertices)
    return PrimitiveComplex(pts, [tuple(range(n + 1))], P)


def _from_prefix(s):
    return tuple(s[0:1]) + tuple(s[k] - s[k - 1] for k in range(1, len(s)))


def knudsen(n: int, d: int) -> PrimitiveComplex:
    """Chambers of the arrangement {x_i + ... + x_j = k} inside P^n_d.

    In prefix-sum coordinates s_j = x_1 + ... + x_j this arrangement is
    {s_j - s_i in Z} and its chambers are the Freudenthal simplices
    a, a + e_p1, a + e_p1 + e_p2, ...; the polytope becomes
    0 <= s_1 <= ... <= s_n <= d.
    """
    if n < 1 or d < 1:
        raise SizeMismatch("knudsen needs n >= 1 and d >= 1")
    simplices = []
    for a in product(range(d), repeat=n):
        if any(a[k] > a[k + 1] for k in range(n - 1)):
            continue
        for perm in permutations(range(n)):
            cur = list(a)
            verts = [tuple(cur)]
            for p in perm:
                cur[p] += 1
                verts.append(tuple(cur))
            if all(v[0] >= 0 and v[-1] <= d and all(v[k] <= v[k + 1] for k in range(n - 1))
                   for v in verts):
                simplices.append([_from_prefix(v) for v in verts])
    return complex_from_simplices(simplices, LatticePolytope.standard_simplex(n, d))


def _in_face(p, S, d) -> bool:
    """Is p in conv{d e_i : i in S} (with e_0 = 0)?"""
    for j, c in enumerate(p):
        if c != 0 and (j + 1) not in S:
            return False
    if 0 not in S and sum(p) != d:
        return False
    return True


def face_simplices(K: PrimitiveComplex, S) -> list[tuple]:
    """Simplices of K of dimension |S|-1 lying in the face spanned by S,
    each returned as a tuple of coordinates."""
    S = set(S)
    d = simplex_size(K)
    k = len(S) - 1
    inside = {v for v, p in enumerate(K.points) if _in_face(p, S, d)}
    return [tuple(K.points[v] for v in s) for s in K.faces[k] if inside.issuperset(s)]


def viro_sum(K: PrimitiveComplex, L: PrimitiveComplex, eta: int = 0) -> PrimitiveComplex:
    """K + L (eta = 0) or K + (-1)L (eta = 1).

    K triangulates P^{n+1}_d and L triangulates P^n_{d+1}. The result
    triangulates P^{n+1}_{d+1}: above height 1 it is K shifted up by one,
    and the slab 0 <= x_{n+1} <= 1 is filled with joins of a face of the
    shifted K with a face of L.
    """
    n = L.dim
    if K.dim != n + 1:
        raise DimensionMismatch(f"K has dimension {K.dim}, expected {n + 1}")
    d = simplex_size(K)
    if simplex_size(L) != d + 1:
        raise SizeMismatch(f"L has size {simplex_size(L)}, expected {d + 1}")

    def up(p):
        return p[:n] + (p[n] + 1,)

    def flat(p):
        return tuple(p) + (0,)

    simplices = [[up(p) for p in K.coords(s)] for s in K.maximal]
    for i in range(n + 1):
        if eta % 2 == 0:
            top, bottom = range(0, i + 1), range(i, n + 1)
        else:
            top, bottom = range(i, n + 1), range(0, i + 1)
        tops = face_simplices(K, top)
        bottoms = face_simplices(L, bottom)
        for a in tops:
            for b in bottoms:
                simplices.append([up(p) for p in a] + [flat(p) for p in b])
    return complex_from_simplices(simplices, LatticePolytope.standard_simplex(n + 1, d + 1))


@lru_cache(maxsize=None)
def _recursive(n: int, d: int, alternate: bool) -> PrimitiveComplex:
    if n == 1:
        return segment(d)
    if d == 1:
        return unit_simplex(n)
    eta = (d - 1) % 2 if alternate else 0
    return viro_sum(_recursive(n, d - 1, alternate), _recursive(n - 1, d, alternate), eta)


def itenberg_viro(n: int, d: int) -> PrimitiveComplex:
    """IV^n_d, with IV^{n+1}_{d+1} = IV^{n+1}_d + (-1)^d IV^n_{d+1}."""
    if n < 1 or d < 1:
        raise SizeMismatch("itenberg_viro needs n >= 1 and d >= 1")
    return _recursive(n, d, True)


def viro_family(n: int, d: int) -> PrimitiveComplex:
    """V^n_d, the same recursion with every sign positive."""
    if n < 1 or d < 1:
        raise SizeMismatch("viro_family needs n >= 1 and d >= 1")
    return _recursive(n, d, False)


def restrict_to_face(K: PrimitiveComplex, I) -> PrimitiveComplex:
    """Restriction of a triangulation of P^n_d to conv{d e_i : i in I}.

    The face is identified with P^k_d (k = |I| - 1) by sending d e_{i_0} to
    the origin and d e_{i_j} to d e_j, where i_0 < i_1 < ... < i_k.
    """
    n = K.dim
    I = sorted(set(I))
    if len(I) < 2 or I[0] < 0 or I[-1] > n:
        raise InvalidIndexSet(f"index set {I} must have at least 2 elements in 0..{n}")
    d = simplex_size(K)
    k = len(I) - 1

    def chart(p):
        return tuple(p[i - 1] for i in I[1:])

    simplices = [[chart(p) for p in s] for s in face_simplices(K, I)]
    return complex_from_simplices(simplices, LatticePolytope.standard_simplex(k, d))


def build_family(family: str, n: int, d: int) -> PrimitiveComplex:
    if family == "knudsen":
        return knudsen(n, d)
    if family == "viro":
        return viro_family(n, d)
    if family in ("itenberg-viro", "iv"):
        return itenberg_viro(n, d)
    raise ValueError(f"unknown family {family!r}")


def simplex_set(K: PrimitiveComplex) -> set:
    """Maximal simplices as frozensets of coordinates, for comparisons."""
    return {frozenset(K.coords(s)) for s in K.maximal}
