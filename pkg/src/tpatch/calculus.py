"""Mod 2 discrete calculus on a primitive triangulation.

A sign distribution is a list of bits indexed by the vertices of K. All
vectors of t(F2) are bit masks (bit i is coordinate i). Quantities that
live on the normal line N(s) of an interior wall s are stored as a single
bit, the coefficient of the unique nonzero vector of that line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import f2
from .errors import (BoundarySimplex, NotAVertexOf, NotInLine, NotRhoUniform,
                     UnknownSimplex, WrongDimension)
from .f2 import F2Matrix, WedgeVector
from .lattice import PrimitiveComplex, edge_vectors

KAPPA_EXACT_LIMIT = 40


# frames

class Wall:
    """Data attached to an interior (n-1)-simplex."""

    __slots__ = ("simplex", "plus", "minus", "apex_plus", "apex_minus",
                 "normal", "rho", "relevant")

    def __init__(self, simplex, plus, minus, apex_plus, apex_minus, normal, rho, relevant):
        self.simplex = simplex
        self.plus = plus
        self.minus = minus
        self.apex_plus = apex_plus
        self.apex_minus = apex_minus
        self.normal = normal
        self.rho = rho
        self.relevant = relevant

    def __repr__(self):
        return f"Wall({self.simplex}, rho={self.rho})"


class SimplexFrame:
    """Dual vectors of every maximal simplex and the wall data of every
    interior (n-1)-simplex. Built once per complex by :func:`frames`."""

    def __init__(self, K: PrimitiveComplex):
        self.n = K.dim
        self.dual: dict[tuple, dict[int, int]] = {}
        for s in K.maximal:
            self.dual[s] = dual_vectors(K, s)
        self.walls: dict[tuple, Wall] = {}
        for s in K.interior_faces(self.n - 1):
            plus, minus = K.cofaces[s]
            ap = next(v for v in plus if v not in s)
            am = next(v for v in minus if v not in s)
            basis = f2.annihilator(_mod2_edges(K, s), self.n)
            normal = basis[0]
            ep, em = self.dual[plus], self.dual[minus]
            rho = {}
            for a in s:
                diff = ep[a] ^ em[a]
                if diff not in (0, normal):
                    raise NotInLine(f"rho of {a} on {s} is off the normal line")
                rho[a] = 1 if diff else 0
            relevant = []
            for j, a in enumerate(s):
                rest = s[:j] + s[j + 1:]
                if a not in K.boundary_vertices and rest and rest not in K.boundary:
                    relevant.append(a)
            self.walls[s] = Wall(s, plus, minus, ap, am, normal, rho, tuple(relevant))


def _mod2_edges(K, s):
    return [f2.from_coords(v) for v in edge_vectors(K.coords(s))]


def dual_vectors(K: PrimitiveComplex, s) -> dict[int, int]:
    """e_s(a) for every vertex a of a maximal simplex s.

    With base vertex a0, the vectors e(b), b != a0, form the dual basis of the
    edge vectors b - a0 mod 2; e(a0) is the sum of the others.
    """
    n = K.dim
    rows = _mod2_edges(K, s)
    inv = f2.inverse(F2Matrix(rows, n)).transpose()
    out = {}
    total = 0
    for j, b in enumerate(s[1:]):
        out[b] = inv.rows[j]
        total ^= inv.rows[j]
    out[s[0]] = total
    return out


def frames(K: PrimitiveComplex) -> SimplexFrame:
    fr = K.cache.get("frames")
    if fr is None:
        fr = SimplexFrame(K)
        K.cache["frames"] = fr
    return fr


def omega(K: PrimitiveComplex, s) -> WedgeVector:
    """Plücker vector of the edge vectors of s mod 2 (degree dim s)."""
    s = K.require(s)
    return f2.pluecker(_mod2_edges(K, s), K.dim)


def _wall(K, s) -> Wall:
    s = K.require(s)
    if len(s) != K.dim:
        raise WrongDimension(f"{s} is not an (n-1)-simplex")
    w = frames(K).walls.get(s)
    if w is None:
        raise BoundarySimplex(f"{s} lies on the boundary")
    return w


def _check_signs(K, eps):
    if len(eps) != len(K.points):
        raise ValueError(f"sign distribution has {len(eps)} values for {len(K.points)} vertices")


# derivatives

def first_derivative(K: PrimitiveComplex, eps, s) -> int:
    s = K.require(s)
    if len(s) != K.dim + 1:
        raise UnknownSimplex(f"{s} is not a maximal simplex")
    e = frames(K).dual[s]
    out = 0
    for a in s:
        if eps[a] & 1:
            out ^= e[a]
    return out


def second_derivative(K: PrimitiveComplex, eps, s) -> int:
    w = _wall(K, s)
    return _d2(w, eps)


def _d2(w: Wall, eps) -> int:
    b = eps[w.apex_plus] ^ eps[w.apex_minus]
    for a, r in w.rho.items():
        if r:
            b ^= eps[a] & 1
    return b & 1


def second_derivatives(K: PrimitiveComplex, eps) -> dict[tuple, int]:
    """|D2 eps| on every interior wall."""
    return {s: _d2(w, eps) for s, w in frames(K).walls.items()}


def second_derivative_matrix(K: PrimitiveComplex) -> F2Matrix:
    """The linear map eps -> (|D2 eps_s|)_s over all interior walls."""
    rows = []
    for w in frames(K).walls.values():
        r = (1 << w.apex_plus) ^ (1 << w.apex_minus)
        for a, bit in w.rho.items():
            if bit:
                r ^= 1 << a
        rows.append(r)
    return F2Matrix(rows, len(K.points))


def twist(K: PrimitiveComplex, eps, s, beta) -> int:
    w = _wall(K, s)
    if beta not in w.rho:
        raise NotAVertexOf(f"{beta} is not a vertex of {w.simplex}")
    return _d2(w, eps) ^ w.rho[beta]


# rho uniformity

def rho_uniformity(K: PrimitiveComplex):
    """(uniform?, walls where |rho| is not constant on the relevant vertices)."""
    failing = []
    for s, w in frames(K).walls.items():
        vals = {w.rho[a] for a in w.relevant}
        if len(vals) > 1:
            failing.append(s)
    return not failing, failing


def rho_chain(K: PrimitiveComplex) -> dict[tuple, int]:
    """The cycle rho relative to B0K, one bit per wall outside B0K."""
    cached = K.cache.get("rho_chain")
    if cached is not None:
        return cached
    ok, failing = rho_uniformity(K)
    if not ok:
        raise NotRhoUniform(f"{len(failing)} walls fail rho-uniformity")
    chain = {}
    for s, w in frames(K).walls.items():
        if s in K.B0:
            continue
        if s in K.B1:
            chain[s] = w.rho[K.apex[s]]
        else:
            chain[s] = w.rho[w.relevant[0]]
    bad = chain_boundary_defects(K, chain)
    if bad:
        raise NotInLine(f"rho chain is not a cycle at {bad[:3]}")
    K.cache["rho_chain"] = chain
    return chain


def chain_boundary_defects(K: PrimitiveComplex, chain) -> list[tuple]:
    """(n-2)-simplices outside B0K where the boundary of a normal-valued
    (n-1)-chain does not vanish."""
    walls = frames(K).walls
    acc: dict[tuple, int] = {}
    for s, bit in chain.items():
        if not bit:
            continue
        for j in range(len(s)):
            t = s[:j] + s[j + 1:]
            if t and t not in K.B0:
                acc[t] = acc.get(t, 0) ^ walls[s].normal
    return sorted(t for t, v in acc.items() if v)


# intersection numbers

def _case3_terms(K: PrimitiveComplex, beta, tau):
    key = (beta, tau)
    store = K.cache.setdefault("case3", {})
    if key not in store:
        n = K.dim
        fr = frames(K)
        gen = f2.line_generator(f2.annihilator(_mod2_edges(K, tau), n), n)
        terms = []
        for s in K.cofaces.get(tau, ()):
            w = fr.walls[s]
            rep = min(w.plus, w.minus)
            e = WedgeVector.from_vector(fr.dual[rep][beta], n)
            terms.append((w, f2.wedge(e, WedgeVector.from_vector(w.normal, n))))
        store[key] = (gen, terms)
    return store[key]


def _line_coefficient(total: WedgeVector, gen: WedgeVector) -> int:
    if total.is_zero():
        return 0
    if total == gen:
        return 1
    raise NotInLine(f"{total} is not a multiple of {gen}")


def intersection_number(K: PrimitiveComplex, eps, beta: int, tau, d2=None) -> int:
    """(beta; tau)_eps for an interior vertex beta and interior
    (n-2)-simplex tau. ``d2`` may carry precomputed second derivatives."""
    n = K.dim
    if n < 2:
        raise WrongDimension("intersection numbers need n >= 2")
    tau = K.require(tau)
    if len(tau) != n - 1:
        raise WrongDimension(f"{tau} is not an (n-2)-simplex")
    if beta in K.boundary_vertices:
        raise BoundarySimplex(f"vertex {beta} lies on the boundary")
    if tau in K.boundary:
        raise BoundarySimplex(f"{tau} lies on the boundary")
    fr = frames(K)
    if beta in tau:
        gen, terms = _case3_terms(K, beta, tau)
        total = WedgeVector(n, 2)
        for w, wv in terms:
            bit = (d2[w.simplex] if d2 is not None else _d2(w, eps)) ^ w.rho[beta]
            if bit:
                total = total + wv
        return _line_coefficient(total, gen)
    joined = tuple(sorted(tau + (beta,)))
    if joined in fr.walls:
        w = fr.walls[joined]
        return (d2[joined] if d2 is not None else _d2(w, eps)) ^ w.rho[beta]
    return 0


def strange_formula_sides(K: PrimitiveComplex, beta, tau):
    """Both sides of sum e(beta) ^ rho(beta) = sum e(beta) ^ rho(opposite)
    over the walls containing tau, for beta a vertex of tau."""
    n = K.dim
    fr = frames(K)
    left = WedgeVector(n, 2)
    right = WedgeVector(n, 2)
    _, terms = _case3_terms(K, beta, tau)
    for w, wv in terms:
        opp = next(v for v in w.simplex if v not in tau)
        if w.rho[beta]:
            left = left + wv
        if w.rho[opp]:
            right = right + wv
    return left, right


def m0_columns(K: PrimitiveComplex) -> list[tuple]:
    return K.interior_faces(K.dim - 2)


def matrix_M0(K: PrimitiveComplex, eps) -> F2Matrix:
    """Rows: interior vertices. Columns: interior (n-2)-simplices."""
    _check_signs(K, eps)
    d2 = second_derivatives(K, eps)
    cols = m0_columns(K)
    rows = []
    for beta in K.interior_vertices:
        r = 0
        for j, tau in enumerate(cols):
            if intersection_number(K, eps, beta, tau, d2):
                r |= 1 << j
        rows.append(r)
    return F2Matrix(rows, len(cols))


def laplacian(K: PrimitiveComplex, eps) -> F2Matrix:
    if K.dim != 2:
        raise WrongDimension("the Laplacian is defined for n = 2 only")
    return matrix_M0(K, eps)


def laplacian_nullity(K: PrimitiveComplex, eps) -> int:
    L = laplacian(K, eps)
    return L.ncols - f2.rank(L)


# kappa

def _max_independent(nodes: int, conflict: list[int]) -> int:
    best = 0

    def grow(cand: int, size: int):
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        if size + cand.bit_count() <= best:
            return
        v = (cand & -cand).bit_length() - 1
        grow(cand & ~conflict[v] & ~(1 << v), size + 1)
        if conflict[v] & cand:
            grow(cand & ~(1 << v), size)

    grow((1 << nodes) - 1, 0)
    return best


def kappa_bound(K: PrimitiveComplex):
    """(kappa, exact). Exact by branch and bound up to KAPPA_EXACT_LIMIT
    failing walls, a greedy lower bound beyond that."""
    _, failing = rho_uniformity(K)
    m = len(failing)
    conflict = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            if K.simplex_distance(failing[i], failing[j]) < 2:
                conflict[i] |= 1 << j
                conflict[j] |= 1 << i
    if m <= KAPPA_EXACT_LIMIT:
        return _max_independent(m, conflict), True
    chosen = 0
    blocked = 0
    for i in sorted(range(m), key=lambda i: conflict[i].bit_count()):
        if not (blocked >> i) & 1:
            chosen += 1
            blocked |= conflict[i] | (1 << i)
    return chosen, False


def kappa(K: PrimitiveComplex) -> int:
    return kappa_bound(K)[0]


# maximality criteria

@dataclass
class HaasReport:
    cond1_rho_uniform: bool
    cond1_failing: list = field(default_factory=list)
    cond2_ell: bool | None = None
    cond2_status: str = "not-needed"
    cond3_D2_eq_rho: bool | None = None
    cond3_violations: list = field(default_factory=list)
    cond4_B1_pairing: bool = True
    cond4_violations: list = field(default_factory=list)
    predicted_maximal: str = "no"

    def to_json(self) -> dict:
        return {
            "cond1_rho_uniform": self.cond1_rho_uniform,
            "cond1_failing": [list(s) for s in self.cond1_failing],
            "cond2_ell": self.cond2_ell,
            "cond2_status": self.cond2_status,
            "cond3_D2_eq_rho": self.cond3_D2_eq_rho,
            "cond3_violations": [list(s) for s in self.cond3_violations],
            "cond4_B1_pairing": self.cond4_B1_pairing,
            "cond4_violations": [list(s) for s in self.cond4_violations],
            "predicted_maximal": self.predicted_maximal,
        }


def haas_check(K: PrimitiveComplex, eps, compute_cond2: bool = True) -> HaasReport:
    n = K.dim
    if n < 2:
        raise WrongDimension("the maximality criterion needs n >= 2")
    _check_signs(K, eps)
    ok1, failing = rho_uniformity(K)
    rep = HaasReport(cond1_rho_uniform=ok1, cond1_failing=failing)
    d2 = second_derivatives(K, eps)
    if ok1:
        chain = rho_chain(K)
        viol = [s for s in frames(K).walls if s not in K.B1 and d2[s] != chain[s]]
        rep.cond3_D2_eq_rho = not viol
        rep.cond3_violations = viol
    viol4 = []
    for tau in K.faces[n - 2]:
        if tau in K.B1 and tau not in K.B0:
            if intersection_number(K, eps, K.apex[tau], tau, d2):
                viol4.append(tau)
    rep.cond4_B1_pairing = not viol4
    rep.cond4_violations = viol4
    if n == 3 and compute_cond2:
        from .patchwork import h1_inclusion_surjective
        rep.cond2_ell = h1_inclusion_surjective(K, eps)
        rep.cond2_status = "computed"
    elif n >= 3:
        rep.cond2_status = "not-computed"
    if not ok1 or rep.cond3_D2_eq_rho is False or not rep.cond4_B1_pairing:
        rep.predicted_maximal = "no"
    elif n == 2 or rep.cond2_ell is True:
        rep.predicted_maximal = "yes"
    elif rep.cond2_ell is False:
        rep.predicted_maximal = "no"
    else:
        rep.predicted_maximal = "needs-cond2"
    return rep


def simple_harnack_system(K: PrimitiveComplex):
    """Rows |D2 eps_s| = rho(s) for every wall s outside B0K.

    Returns (matrix over the vertex bits, right-hand side bits, walls)."""
    chain = rho_chain(K)
    fr = frames(K)
    walls = sorted(chain)
    rows = []
    rhs = 0
    for i, s in enumerate(walls):
        w = fr.walls[s]
        r = (1 << w.apex_plus) ^ (1 << w.apex_minus)
        for a, bit in w.rho.items():
            if bit:
                r ^= 1 << a
        rows.append(r)
        if chain[s]:
            rhs |= 1 << i
    return F2Matrix(rows, len(K.points)), rhs, walls


def solve_simple_harnack(K: PrimitiveComplex):
    """A sign distribution solving the simple integrability system, or None."""
    if not rho_uniformity(K)[0]:
        return None
    M, rhs, _ = simple_harnack_system(K)
    sol = f2.solve(M, rhs)
    if sol is None:
        return None
    return f2.to_bits(sol[0], len(K.points))


def sphere_indicators(K: PrimitiveComplex, eps) -> set[int]:
    """Interior vertices b with |D2 eps_s| = |rho_s(b)| on every wall s
    containing b."""
    d2 = second_derivatives(K, eps)
    fr = frames(K)
    good = set(K.interior_vertices)
    for s, w in fr.walls.items():
        for b in s:
            if b in good and d2[s] != w.rho[b]:
                good.discard(b)
    return good


# sign distributions

_VAR = re.compile(r"x(\d+)|([xyz])")


def _parse_monomial(mono: str) -> list[int]:
    mono = mono.strip()
    if mono in ("", "1"):
        return []
    idx = []
    for m in _VAR.finditer(mono):
        if m.group(1):
            idx.append(int(m.group(1)) - 1)
        else:
            idx.append("xyz".index(m.group(2)))
    if not idx:
        raise ValueError(f"cannot parse monomial {mono!r}")
    return idx


def polynomial_signs(K: PrimitiveComplex, coeffs: dict) -> list[int]:
    """Evaluate a polynomial mod 2 at each vertex.

    Keys are monomials such as "1", "x1", "x1*x2" (or "x", "y", "xy" for
    the first three variables), values are coefficients.
    """
    terms = [(_parse_monomial(k), int(v) & 1) for k, v in coeffs.items()]
    out = []
    for p in K.points:
        val = 0
        for idx, c in terms:
            if c:
                prod = 1
                for i in idx:
                    prod &= p[i] & 1
                val ^= prod
        out.append(val)
    return out


def harnack_signs(K: PrimitiveComplex) -> list[int]:
    n = K.dim
    out = []
    for p in K.points:
        v = 0
        for i in range(n):
            for j in range(i + 1, n):
                v ^= p[i] & p[j] & 1
        out.append(v)
    return out


def affine_signs(K: PrimitiveComplex, const: int, linear: int) -> list[int]:
    """const + <linear, x> mod 2, with ``linear`` a bit mask."""
    return [(const ^ f2.dot(f2.from_coords(p), linear)) & 1 for p in K.points]


def random_signs(count: int, seed: int, stream: int = 0) -> list[int]:
    """Uniform bits from the Philox counter-based generator keyed by
    (seed, stream)."""
    ss = np.random.SeedSequence([int(seed) & (2**64 - 1), int(stream)])
    rng = np.random.Generator(np.random.Philox(ss))
    return [int(b) for b in rng.integers(0, 2, size=count)]


def named_distribution(kind: str, K: PrimitiveComplex, coeffs=None, value: int = 0,
                       seed: int = 0, stream: int = 0) -> list[int]:
    if kind == "harnack":
        return harnack_signs(K)
    if kind == "quadratic":
        if coeffs is None:
            coeffs = {"x1": 1, "x2": 1, "x1*x2": 1}
        return polynomial_signs(K, coeffs)
    if kind == "constant":
        return [int(value) & 1] * len(K.points)
    if kind == "random":
        return random_signs(len(K.points), seed, stream)
    raise ValueError(f"unknown distribution {kind!r}")


def signs_from_json(doc, K: PrimitiveComplex) -> list[int]:
    if "values" in doc:
        vals = [int(v) & 1 for v in doc["values"]]
        _check_signs(K, vals)
        return vals
    kind = doc.get("formula")
    if kind == "quadratic":
        return named_distribution("quadratic", K, coeffs=doc.get("coeffs"))
    if kind == "constant":
        return named_distribution("constant", K, value=doc.get("value", 0))
    if kind == "random":
        return named_distribution("random", K, seed=doc.get("seed", 0), stream=doc.get("stream", 0))
    return named_distribution(kind, K)
