"""The cubical model of the real toric variety and T-hypersurfaces in it.

A cell is a triple (lower, upper, arg): a cube [lower; upper] of the
cubical subdivision of K together with an argument, a bit mask in F2^n
reduced modulo the sedentarity of the smallest face of P containing the
upper simplex.
"""
from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import f2
from .calculus import first_derivative
from .errors import SedDimensionMismatch, TooManyCells, UnsupportedDimension, ValidationError
from .f2 import UnionFind
from .lattice import PrimitiveComplex

MAX_CELLS = 2 ** 24


def sedentarity(K: PrimitiveComplex, s) -> list[int]:
    """Reduced echelon basis of the mod 2 span of the normals of the facets
    containing s."""
    if K.polytope is None:
        raise ValidationError("sedentarity needs the polytope")
    store = K.cache.setdefault("sed", {})
    s = tuple(s)
    if s not in store:
        P = K.polytope
        tight = P.tight_facets(K.coords(s))
        normals = [f2.from_coords(P.facets[i][0]) for i in tight]
        if f2.rank_of_rows(normals) != len(tight):
            raise SedDimensionMismatch(f"normals of the facets through {s} are dependent mod 2")
        store[s] = f2.echelon_basis(normals)
    return store[s]


def divisor_mask(K: PrimitiveComplex, s) -> int:
    """Bit j set when s lies in facet j of P."""
    m = 0
    for j in K.polytope.tight_facets(K.coords(s)):
        m |= 1 << j
    return m


class RealComplex:
    """A regular cell complex given by its cells and codim-1 face lists.

    ``ambient`` maps each cell to its index in the ambient real complex when
    this complex is a T-hypersurface; it is None for the ambient itself.
    """

    def __init__(self, K, cells, faces, ambient=None):
        self.K = K
        self.cells = cells
        self.faces = faces
        self.ambient = ambient
        self.dims = [len(up) - len(low) for low, up, _ in cells]
        self.is_subcomplex_of_RK = ambient is not None

    def __len__(self):
        return len(self.cells)

    @property
    def dim(self) -> int:
        return max(self.dims) if self.cells else -1

    def cells_of_dim(self, k) -> list[int]:
        return [i for i, d in enumerate(self.dims) if d == k]

    def counts(self) -> list[int]:
        out = [0] * (self.dim + 1)
        for d in self.dims:
            out[d] += 1
        return out

    def to_json(self) -> dict:
        n = self.K.dim
        return {
            "cells": [{"dim": d, "cube": [list(low), list(up)], "arg": f2.to_bits(v, n)}
                      for d, (low, up, v) in zip(self.dims, self.cells)],
            "faces": [[i, j] for i, fs in enumerate(self.faces) for j in fs],
        }

    def __repr__(self):
        return f"RealComplex(cells={self.counts()}, sub={self.is_subcomplex_of_RK})"


class _RKData:
    """Numpy views of the ambient complex used for fast membership tests."""

    def __init__(self, RK: RealComplex):
        K = RK.K
        self.n = K.dim
        self.nverts = len(K.points)
        self.parity = np.array([[f2.dot(f2.from_coords(p), v) for v in range(2 ** self.n)]
                                for p in K.points], dtype=np.uint8)
        groups: dict[int, list] = {}
        for i, (low, up, v) in enumerate(RK.cells):
            if len(low) >= 2:
                groups.setdefault(len(low), []).append((i, low, v))
        self.groups = []
        for size, items in sorted(groups.items()):
            ids = np.array([i for i, _, _ in items], dtype=np.int64)
            verts = np.array([low for _, low, _ in items], dtype=np.int64)
            args = np.array([v for _, _, v in items], dtype=np.int64)
            self.groups.append((ids, verts, args))
        src, dst = [], []
        for i, fs in enumerate(RK.faces):
            for j in fs:
                src.append(i)
                dst.append(j)
        self.src = np.array(src, dtype=np.int64)
        self.dst = np.array(dst, dtype=np.int64)
        self.ncells = len(RK.cells)

    def membership(self, eps) -> np.ndarray:
        signs = self.parity ^ np.asarray(eps, dtype=np.uint8)[:, None]
        member = np.zeros(self.ncells, dtype=bool)
        for ids, verts, args in self.groups:
            vals = signs[verts, args[:, None]]
            member[ids] = vals.min(axis=1) != vals.max(axis=1)
        return member


def build_RK(K: PrimitiveComplex) -> RealComplex:
    cached = K.cache.get("RK")
    if cached is not None:
        return cached
    n = K.dim
    total = 0
    args_of = {}
    for q in range(n + 1):
        for up in K.faces[q]:
            sed = sedentarity(K, up)
            args_of[up] = [v for v in range(2 ** n) if f2.reduce_mod(v, sed) == v]
            total += (2 ** (q + 1) - 1) * len(args_of[up])
    if total > MAX_CELLS:
        raise TooManyCells(f"{total} cells exceed the cap of {MAX_CELLS}")
    cells = []
    for k in range(n + 1):
        for low, up in K.cubical_cells(k):
            for v in args_of[up]:
                cells.append((low, up, v))
    index = {c: i for i, c in enumerate(cells)}
    faces = []
    for low, up, v in cells:
        fs = []
        lowset = set(low)
        for x in up:
            if x in lowset:
                continue
            fs.append(index[(tuple(sorted(low + (x,))), up, v)])
            smaller = tuple(y for y in up if y != x)
            fs.append(index[(low, smaller, f2.reduce_mod(v, sedentarity(K, smaller)))])
        faces.append(fs)
    RK = RealComplex(K, cells, faces)
    RK.index = index
    K.cache["RK"] = RK
    return RK


def _rk_data(K) -> _RKData:
    data = K.cache.get("RKdata")
    if data is None:
        data = _RKData(build_RK(K))
        K.cache["RKdata"] = data
    return data


def tx_membership(K: PrimitiveComplex, eps) -> np.ndarray:
    """Boolean mask over the cells of build_RK(K) selecting the T-hypersurface."""
    if len(eps) != len(K.points):
        raise ValueError("sign distribution does not match the vertex count")
    return _rk_data(K).membership(eps)


def build_TX(K: PrimitiveComplex, eps) -> RealComplex:
    RK = build_RK(K)
    member = tx_membership(K, eps)
    ids = [int(i) for i in np.flatnonzero(member)]
    local = {g: j for j, g in enumerate(ids)}
    cells = [RK.cells[g] for g in ids]
    faces = [[local[h] for h in RK.faces[g]] for g in ids]
    return RealComplex(K, cells, faces, ambient=ids)


def components(X: RealComplex):
    """(count, component id per cell, divisor incidence per component).

    Incidence is a sorted list of facet indices of P per component.
    """
    uf = UnionFind(len(X.cells))
    for i, fs in enumerate(X.faces):
        for j in fs:
            uf.union(i, j)
    labels = uf.labels()
    count = uf.count
    masks = [0] * count
    K = X.K
    store = K.cache.setdefault("divisors", {})
    for lab, (_, up, _) in zip(labels, X.cells):
        if up not in store:
            store[up] = divisor_mask(K, up)
        masks[lab] |= store[up]
    nf = len(K.polytope.facets)
    incidence = [[j for j in range(nf) if (m >> j) & 1] for m in masks]
    return count, labels, incidence


def b0_fast(K: PrimitiveComplex, eps) -> int:
    """Number of connected components of the T-hypersurface, via a sparse
    graph search on the ambient cell graph."""
    data = _rk_data(K)
    member = data.membership(eps)
    keep = member[data.src]
    src, dst = data.src[keep], data.dst[keep]
    m = data.ncells
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(m, m)).tocsr()
    _, labels = connected_components(graph, directed=False)
    return int(len(np.unique(labels[member])))


def boundary_columns(X: RealComplex, k: int):
    """Columns of the k-th boundary map as bit masks over the (k-1)-cells."""
    pos = {}
    for i, d in enumerate(X.dims):
        if d == k - 1:
            pos[i] = len(pos)
    cols = []
    for i, d in enumerate(X.dims):
        if d == k:
            c = 0
            for j in X.faces[i]:
                c ^= 1 << pos[j]
            cols.append(c)
    return cols


def betti(X: RealComplex) -> list[int]:
    top = X.dim
    if top < 0:
        return []
    counts = X.counts()
    ranks = [0] * (top + 2)
    for k in range(1, top + 1):
        ranks[k] = f2.rank_of_rows(boundary_columns(X, k))
    return [counts[k] - ranks[k] - ranks[k + 1] for k in range(top + 1)]


def subcomplex(X: RealComplex, keep) -> RealComplex:
    """Restriction to a set of cells closed under taking faces."""
    ids = sorted(keep)
    local = {g: j for j, g in enumerate(ids)}
    cells = [X.cells[g] for g in ids]
    faces = [[local[h] for h in X.faces[g]] for g in ids]
    amb = [X.ambient[g] for g in ids] if X.ambient is not None else ids
    return RealComplex(X.K, cells, faces, ambient=amb)


def component_betti(X: RealComplex, comp: int, labels=None) -> list[int]:
    if labels is None:
        labels = components(X)[1]
    return betti(subcomplex(X, [i for i, lab in enumerate(labels) if lab == comp]))


def _kernel_in_ambient(X: RealComplex, amb_pos) -> list[int]:
    """Basis of the 1-cycles of X written over the ambient 1-cells."""
    zero = {i: j for j, i in enumerate(X.cells_of_dim(0))}
    ones = X.cells_of_dim(1)
    rows = [0] * len(zero)
    for col, i in enumerate(ones):
        for j in X.faces[i]:
            rows[zero[j]] ^= 1 << col
    basis = f2.nullspace(f2.F2Matrix(rows, len(ones)))
    out = []
    for z in basis:
        v = 0
        col = 0
        while z:
            if z & 1:
                v ^= 1 << amb_pos[X.ambient[ones[col]]]
            z >>= 1
            col += 1
        out.append(v)
    return out


def h1_inclusion_surjective(K: PrimitiveComplex, eps) -> bool:
    """Does H1 of the T-hypersurface map onto H1 of the ambient complex?"""
    if K.dim != 3:
        raise UnsupportedDimension("the H1 surjectivity test is implemented for n = 3")
    RK = build_RK(K)
    X = build_TX(K, eps)
    amb_pos = {i: j for j, i in enumerate(RK.cells_of_dim(1))}
    bd1 = boundary_columns(RK, 1)
    bd2 = boundary_columns(RK, 2)
    z1 = len(bd1) - f2.rank_of_rows(bd1)
    cycles = _kernel_in_ambient(X, amb_pos)
    return f2.rank_of_rows(bd2 + cycles) == z1


def manifold_check(X: RealComplex) -> bool:
    """Every codim-1 cell of the hypersurface has exactly two cofaces."""
    n = X.K.dim
    count = [0] * len(X.cells)
    for i, d in enumerate(X.dims):
        if d == n - 1:
            for j in X.faces[i]:
                count[j] += 1
    return all(count[i] == 2 for i, d in enumerate(X.dims) if d == n - 2)


def avoided_lift_check(K: PrimitiveComplex, eps, X: RealComplex | None = None) -> bool:
    """Each maximal simplex has exactly one lift missed by the hypersurface,
    and its argument is the first derivative of eps there."""
    if X is None:
        X = build_TX(K, eps)
    hit = {(up, v) for _, up, v in X.cells if len(up) == K.dim + 1}
    for s in K.maximal:
        missed = [v for v in range(2 ** K.dim) if (s, v) not in hit]
        if missed != [first_derivative(K, eps, s)]:
            return False
    return True
