"""Non-singular lattice polytopes and their primitive triangulations."""
from __future__ import annotations

import json
import math
from collections import deque
from itertools import combinations, product

from .errors import (DanglingFace, DimensionMismatch, NonPrimitiveSimplex,
                     SingularPolytope, UnknownSimplex, ValidationError,
                     VolumeMismatch)


def int_det(rows) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def edge_vectors(coords):
    """Edge vectors v_i - v_0 of a simplex given by vertex coordinates."""
    base = coords[0]
    return [tuple(a - b for a, b in zip(c, base)) for c in coords[1:]]


class LatticePolytope:
    """P = {x : <normal, x> >= offset for every facet}, with its vertices.

    Construction validates primitivity of the normals and non-singularity at
    every vertex.
    """

    def __init__(self, dim: int, vertices, facets):
        self.dim = dim
        self.vertices = sorted(tuple(int(c) for c in v) for v in vertices)
        self.facets = [(tuple(int(c) for c in nrm), int(off)) for nrm, off in facets]
        self._validate()

    @classmethod
    def standard_simplex(cls, n: int, d: int):
        """Convex hull of 0 and d*e_i."""
        verts = [tuple([0] * n)]
        for i in range(n):
            v = [0] * n
            v[i] = d
            verts.append(tuple(v))
        facets = []
        for i in range(n):
            nrm = [0] * n
            nrm[i] = 1
            facets.append((tuple(nrm), 0))
        facets.append((tuple([-1] * n), -d))
        return cls(n, verts, facets)

    @classmethod
    def from_facets(cls, dim: int, facets, candidates):
        """Build from facet data, taking as vertices the candidate points that
        lie in P and are tight on at least ``dim`` facets."""
        facets = [(tuple(nrm), off) for nrm, off in facets]
        verts = set()
        for p in candidates:
            vals = [sum(a * b for a, b in zip(nrm, p)) - off for nrm, off in facets]
            if min(vals) >= 0 and sum(1 for v in vals if v == 0) >= dim:
                verts.add(tuple(p))
        return cls(dim, verts, facets)

    def _validate(self):
        n = self.dim
        if n < 1:
            raise DimensionMismatch("polytope dimension must be at least 1")
        for nrm, _ in self.facets:
            if len(nrm) != n:
                raise DimensionMismatch(f"facet normal {nrm} has wrong length")
            if math.gcd(*nrm) != 1:
                raise SingularPolytope(f"facet normal {nrm} is not primitive")
        if len(self.vertices) < n + 1:
            raise SingularPolytope("polytope has fewer than n+1 vertices")
        for v in self.vertices:
            if len(v) != n:
                raise DimensionMismatch(f"vertex {v} has wrong length")
            tight = []
            for nrm, off in self.facets:
                val = self.evaluate(nrm, v) - off
                if val < 0:
                    raise ValidationError(f"vertex {v} violates facet {nrm} >= {off}")
                if val == 0:
                    tight.append(nrm)
            if len(tight) != n or abs(int_det(tight)) != 1:
                raise SingularPolytope(f"polytope is singular at vertex {v}")

    @staticmethod
    def evaluate(normal, x) -> int:
        return sum(a * b for a, b in zip(normal, x))

    def contains(self, x) -> bool:
        return all(self.evaluate(nrm, x) >= off for nrm, off in self.facets)

    def tight_facets(self, pts) -> list[int]:
        """Indices of the facets whose inequality is an equality on all pts."""
        return [i for i, (nrm, off) in enumerate(self.facets)
                if all(self.evaluate(nrm, p) == off for p in pts)]

    def lattice_points(self) -> list[tuple]:
        lo = [min(v[i] for v in self.vertices) for i in range(self.dim)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.dim)]
        box = product(*[range(a, b + 1) for a, b in zip(lo, hi)])
        return [p for p in box if self.contains(p)]

    def interior_lattice_points(self) -> list[tuple]:
        return [p for p in self.lattice_points()
                if all(self.evaluate(nrm, p) > off for nrm, off in self.facets)]

    def normalized_volume(self) -> int:
        """n! times the Euclidean volume, computed exactly."""
        n = self.dim
        if n == 1:
            return self.vertices[-1][0] - self.vertices[0][0]
        if len(self.vertices) == n + 1:
            return abs(int_det(edge_vectors(self.vertices)))
        from scipy.spatial import Delaunay
        tri = Delaunay(self.vertices)
        total = 0
        for s in tri.simplices:
            total += abs(int_det(edge_vectors([self.vertices[i] for i in s])))
        return total

    def __repr__(self):
        return f"LatticePolytope(dim={self.dim}, vertices={len(self.vertices)}, facets={len(self.facets)})"


def interior_lattice_points(P: LatticePolytope) -> list[tuple]:
    return P.interior_lattice_points()


class PrimitiveComplex:
    """A primitive triangulation K of a lattice polytope.

    Simplices are sorted tuples of point indices. Everything derived (faces,
    cofaces, boundary, enlarged boundaries) is computed and validated at
    construction time; the object is read-only afterwards.

    ``polytope`` may be None for small local fixtures. In that case the
    tiling and facet checks are skipped and nothing that needs the polytope
    (sedentarity, the real complex) is available.
    """

    def __init__(self, points, maximal_simplices, polytope: LatticePolytope | None):
        self.points = [tuple(int(c) for c in p) for p in points]
        self.polytope = polytope
        if polytope is not None:
            self.dim = polytope.dim
        elif self.points:
            self.dim = len(self.points[0])
        else:
            raise DimensionMismatch("empty point set")
        n = self.dim
        for p in self.points:
            if len(p) != n:
                raise DimensionMismatch(f"point {p} does not have {n} coordinates")
        if len(set(self.points)) != len(self.points):
            raise ValidationError("repeated point")
        maxs = []
        for s in maximal_simplices:
            t = tuple(sorted(int(i) for i in s))
            if len(t) != n + 1 or len(set(t)) != n + 1:
                raise DimensionMismatch(f"maximal simplex {s} does not have {n + 1} distinct vertices")
            if t[0] < 0 or t[-1] >= len(self.points):
                raise UnknownSimplex(f"maximal simplex {s} uses an invalid point index")
            maxs.append(t)
        if len(set(maxs)) != len(maxs):
            raise ValidationError("repeated maximal simplex")
        self.maximal = sorted(maxs)
        self._check_primitive()
        self._build_faces()
        self._check_pseudomanifold()
        if polytope is not None:
            self._check_tiling()
        self._build_boundaries()
        self._adjacency = None
        self._dist_cache: dict[int, dict[int, int]] = {}
        self.cache: dict = {}

    # construction helpers

    def _check_primitive(self):
        for s in self.maximal:
            det = int_det(edge_vectors([self.points[i] for i in s]))
            if abs(det) != 1:
                raise NonPrimitiveSimplex(f"simplex {s} has determinant {det}")

    def _build_faces(self):
        n = self.dim
        faces: list[set] = [set() for _ in range(n + 1)]
        for s in self.maximal:
            for k in range(1, n + 2):
                faces[k - 1].update(combinations(s, k))
        self.faces = [sorted(f) for f in faces]
        self.index = [{s: i for i, s in enumerate(f)} for f in self.faces]
        cof: dict[tuple, list] = {}
        for k in range(1, n + 1):
            for s in self.faces[k]:
                for j in range(len(s)):
                    cof.setdefault(s[:j] + s[j + 1:], []).append(s)
        self.cofaces = {s: sorted(c) for s, c in cof.items()}
        used = {v for s in self.maximal for v in s}
        if len(used) != len(self.points):
            raise ValidationError("some points are not vertices of the triangulation")

    def _check_pseudomanifold(self):
        n = self.dim
        for s in self.faces[n - 1]:
            c = len(self.cofaces.get(s, ()))
            if c not in (1, 2):
                raise DanglingFace(f"{n - 1}-simplex {s} has {c} cofaces")

    def _check_tiling(self):
        P = self.polytope
        for p in self.points:
            if not P.contains(p):
                raise VolumeMismatch(f"point {p} lies outside the polytope")
        vol = P.normalized_volume()
        if vol != len(self.maximal):
            raise VolumeMismatch(f"{len(self.maximal)} primitive simplices for normalized volume {vol}")
        for s in self.faces[self.dim - 1]:
            if len(self.cofaces[s]) == 1 and not P.tight_facets(self.coords(s)):
                raise VolumeMismatch(f"free face {s} is not contained in a facet")

    def _build_boundaries(self):
        n = self.dim
        free = [s for s in self.faces[n - 1] if len(self.cofaces[s]) == 1]
        bd = set()
        for s in free:
            for k in range(1, len(s) + 1):
                bd.update(combinations(s, k))
        self.boundary = frozenset(bd)
        bverts = {s[0] for s in bd if len(s) == 1}
        self.boundary_vertices = frozenset(bverts)
        self.interior_vertices = [v for v in range(len(self.points)) if v not in bverts]
        b0, b1, ap = set(), set(), {}
        for faces in self.faces:
            for s in faces:
                if all(v in bverts for v in s):
                    b0.add(s)
                    b1.add(s)
                    continue
                ok = True
                for j, v in enumerate(s):
                    if v in bverts:
                        continue
                    rest = s[:j] + s[j + 1:]
                    if rest and rest not in bd:
                        ok = False
                        break
                if ok:
                    b1.add(s)
                    ap[s] = next(v for v in s if v not in bverts)
        self.B0 = frozenset(b0)
        self.B1 = frozenset(b1)
        self.apex = ap

    # queries

    def coords(self, s):
        return [self.points[i] for i in s]

    def f_vector(self) -> list[int]:
        return [len(f) for f in self.faces]

    def all_simplices(self):
        for f in self.faces:
            yield from f

    def contains(self, s) -> bool:
        s = tuple(s)
        return 1 <= len(s) <= self.dim + 1 and s in self.index[len(s) - 1]

    def require(self, s) -> tuple:
        s = tuple(sorted(s))
        if not self.contains(s):
            raise UnknownSimplex(f"{s} is not a simplex of the complex")
        return s

    def is_interior(self, s) -> bool:
        return tuple(s) not in self.boundary

    def interior_faces(self, p: int) -> list[tuple]:
        if p < 0 or p > self.dim:
            return []
        return [s for s in self.faces[p] if s not in self.boundary]

    def maximal_cofaces(self, s) -> list[tuple]:
        s = set(s)
        return [m for m in self.maximal if s.issubset(m)]

    def star_link(self, s):
        """Closed star and link of a simplex, each as a set of simplices."""
        s = self.require(s)
        star = set()
        for m in self.maximal_cofaces(s):
            for k in range(1, len(m) + 1):
                star.update(combinations(m, k))
        verts = set(s)
        link = {t for t in star if verts.isdisjoint(t)}
        return star, link

    def cubical_cells(self, k: int) -> list[tuple]:
        """All pairs (lower, upper) with lower a face of upper and
        dim upper - dim lower = k."""
        out = []
        for q in range(k, self.dim + 1):
            for up in self.faces[q]:
                for low in combinations(up, q - k + 1):
                    out.append((low, up))
        return out

    def adjacency(self) -> list[list[int]]:
        if self._adjacency is None:
            adj = [[] for _ in self.points]
            for a, b in self.faces[1]:
                adj[a].append(b)
                adj[b].append(a)
            self._adjacency = adj
        return self._adjacency

    def vertex_distances(self, v: int) -> dict[int, int]:
        if v not in self._dist_cache:
            adj = self.adjacency()
            dist = {v: 0}
            queue = deque([v])
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        queue.append(y)
            self._dist_cache[v] = dist
        return self._dist_cache[v]

    def simplex_distance(self, s, t) -> int:
        s, t = self.require(s), self.require(t)
        best = None
        for u in s:
            d = self.vertex_distances(u)
            for v in t:
                if v in d and (best is None or d[v] < best):
                    best = d[v]
        return best

    def to_json(self) -> dict:
        if self.polytope is None:
            raise ValidationError("cannot serialize a complex without its polytope")
        return {
            "dim": self.dim,
            "points": [list(p) for p in self.points],
            "facets": [{"normal": list(nrm), "offset": off} for nrm, off in self.polytope.facets],
            "maximal_simplices": [list(s) for s in self.maximal],
        }

    def __repr__(self):
        return f"PrimitiveComplex(dim={self.dim}, f={self.f_vector()})"


def build_complex(points, maximal_simplices, polytope) -> PrimitiveComplex:
    return PrimitiveComplex(points, maximal_simplices, polytope)


def complex_from_simplices(simplices, polytope) -> PrimitiveComplex:
    """Build a complex from maximal simplices given by coordinates, indexing
    the vertices lexicographically."""
    pts = sorted({tuple(p) for s in simplices for p in s})
    idx = {p: i for i, p in enumerate(pts)}
    return PrimitiveComplex(pts, [[idx[tuple(p)] for p in s] for s in simplices], polytope)


def complex_from_json(doc) -> PrimitiveComplex:
    if isinstance(doc, str):
        doc = json.loads(doc)
    n = int(doc["dim"])
    points = [tuple(p) for p in doc["points"]]
    facets = [(tuple(f["normal"]), f["offset"]) for f in doc["facets"]]
    P = LatticePolytope.from_facets(n, facets, points)
    return PrimitiveComplex(points, doc["maximal_simplices"], P)


def load_complex(path) -> PrimitiveComplex:
    with open(path) as fh:
        return complex_from_json(json.load(fh))


def save_complex(K: PrimitiveComplex, path):
    with open(path, "w") as fh:
        json.dump(K.to_json(), fh)
        fh.write("\n")
