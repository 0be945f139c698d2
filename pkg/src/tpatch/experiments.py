"""Expectation experiments, exhaustive sweeps, SVG drawings and reports."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import calculus as calc
from . import f2
from .errors import TooManyVertices, WrongDimension
from .lattice import PrimitiveComplex
from .patchwork import (avoided_lift_check, b0_fast, betti, build_TX, components,
                        manifold_check)

EXHAUSTIVE_MAX_VERTICES = 20


@dataclass
class ExperimentResult:
    complex_id: str
    trials: int
    seed: int
    mean_b0: Fraction
    var_b0: Fraction
    max_b0: int
    ratio: Fraction
    records: list = field(default_factory=list)

    @property
    def std_b0(self) -> float:
        return math.sqrt(self.var_b0)

    @property
    def stderr(self) -> float:
        return self.std_b0 / math.sqrt(self.trials)

    def to_json(self) -> dict:
        return {
            "complex": self.complex_id,
            "trials": self.trials,
            "seed": self.seed,
            "generator": "philox",
            "mean_b0": float(self.mean_b0),
            "mean_b0_exact": str(self.mean_b0),
            "std_b0": self.std_b0,
            "max_b0": self.max_b0,
            "ratio": float(self.ratio),
            "records": self.records,
        }


def complex_id(K: PrimitiveComplex) -> str:
    return f"dim{K.dim}-f{'-'.join(map(str, K.f_vector()))}"


def _summary(values):
    m = len(values)
    mean = Fraction(sum(values), m)
    if m > 1:
        var = sum((Fraction(v) - mean) ** 2 for v in values) / (m - 1)
    else:
        var = Fraction(0)
    return mean, var


def monte_carlo_b0(K: PrimitiveComplex, trials: int, seed: int, keep_records: bool = False,
                   label: str | None = None) -> ExperimentResult:
    """Mean number of components over uniformly random sign distributions.

    Trial i draws its signs from the Philox stream (seed, i), so any subset
    of trials can be reproduced on its own.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    values = []
    for i in range(trials):
        eps = calc.random_signs(len(K.points), seed, i)
        values.append(b0_fast(K, eps))
    mean, var = _summary(values)
    bound = 1 + len(K.polytope.interior_lattice_points())
    return ExperimentResult(label or complex_id(K), trials, seed, mean, var, max(values),
                            mean / bound, values if keep_records else [])


@dataclass
class ExhaustiveResult:
    histogram: dict
    maximal: list
    mean_b0: Fraction
    total: int


def exhaustive_b0(K: PrimitiveComplex) -> ExhaustiveResult:
    """b0 for every sign distribution. ``maximal`` lists the distributions
    (as vertex bit masks) reaching 1 + #interior points."""
    nv = len(K.points)
    if nv > EXHAUSTIVE_MAX_VERTICES:
        raise TooManyVertices(f"{nv} vertices, the exhaustive sweep allows {EXHAUSTIVE_MAX_VERTICES}")
    bound = 1 + len(K.polytope.interior_lattice_points())
    hist: dict[int, int] = {}
    maximal = []
    total = 0
    for m in range(2 ** nv):
        b = b0_fast(K, f2.to_bits(m, nv))
        hist[b] = hist.get(b, 0) + 1
        total += b
        if b == bound:
            maximal.append(m)
    return ExhaustiveResult(dict(sorted(hist.items())), maximal, Fraction(total, 2 ** nv), 2 ** nv)


# drawing

_COLORS = ["#c0392b", "#2471a3", "#1e8449", "#7d3c98", "#b9770e", "#117a65",
           "#a93226", "#2e4053", "#6c3483", "#196f3d"]


def _fmt(x: Fraction) -> str:
    return f"{float(x):.3f}"


def _reflect(p, v):
    return tuple(-c if (v >> i) & 1 else c for i, c in enumerate(p))


def _center(K, s):
    pts = K.coords(s)
    return tuple(Fraction(sum(c), len(pts)) for c in zip(*pts))


def render_svg(K: PrimitiveComplex, eps, path=None, scale: int = 40) -> str:
    """Draw the four reflected copies of K and the curve, one SVG group per
    connected component. Returns the SVG text and writes it when ``path``
    is given."""
    if K.dim != 2:
        raise WrongDimension("only 2-dimensional patchworks can be drawn")
    X = build_TX(K, eps)
    count, labels, _ = components(X)
    R = max(abs(c) for p in K.points for c in p) + 1
    side = 2 * R * scale
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{-R * scale} {-R * scale} {side} {side}" '
        f'width="{side}" height="{side}">',
        f'<rect x="{-R * scale}" y="{-R * scale}" width="{side}" height="{side}" fill="white"/>',
        '<g id="triangulation" stroke="#bbbbbb" stroke-width="1" fill="none">',
    ]

    def pt(p):
        # screen y grows downwards
        return _fmt(p[0] * scale), _fmt(-p[1] * scale)

    def xy(p):
        return ",".join(pt(p))

    for v in range(4):
        for a, b in K.faces[1]:
            x1, y1 = pt(_reflect(K.points[a], v))
            x2, y2 = pt(_reflect(K.points[b], v))
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")
    segs: list[list[str]] = [[] for _ in range(count)]
    for i, (low, up, v) in enumerate(X.cells):
        if len(low) == 2 and len(up) == 3:
            a = _reflect(_center(K, low), v)
            b = _reflect(_center(K, up), v)
            segs[labels[i]].append(f'<polyline points="{xy(a)} {xy(b)}"/>')
    for c in range(count):
        color = _COLORS[c % len(_COLORS)]
        out.append(f'<g id="component-{c}" stroke="{color}" stroke-width="3" fill="none" '
                   f'stroke-linecap="round">')
        out.extend(sorted(segs[c]))
        out.append("</g>")
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


# reports

def report(K: PrimitiveComplex, eps, compute_cond2: bool = True) -> dict:
    """Everything known about (K, eps) in one JSON-ready document."""
    interior = K.polytope.interior_lattice_points()
    uniform, failing = calc.rho_uniformity(K)
    kap, exact = calc.kappa_bound(K)
    X = build_TX(K, eps)
    count, _, incidence = components(X)
    spheres = sorted(calc.sphere_indicators(K, eps))
    rs = 1 + len(interior)
    sharp = rs - kap
    doc = {
        "dim": K.dim,
        "f_vector": K.f_vector(),
        "interior_points": len(interior),
        "rho_uniform": uniform,
        "rho_failing": [list(s) for s in failing],
        "kappa": kap,
        "kappa_exact": exact,
        "b0": count,
        "betti": betti(X),
        "divisor_incidence": incidence,
        "sphere_indicators": spheres,
        "manifold": manifold_check(X),
        "avoided_lifts": avoided_lift_check(K, eps, X),
        "bounds": {
            "upper": rs,
            "upper_attained": count == rs,
            "upper_kappa": sharp,
            "upper_kappa_attained": count == sharp,
            "lower_spheres": 1 + len(spheres),
            "lower_spheres_attained": count == 1 + len(spheres),
        },
    }
    if K.dim >= 2:
        doc["haas"] = calc.haas_check(K, eps, compute_cond2).to_json()
    if K.dim == 2:
        doc["laplacian_nullity"] = calc.laplacian_nullity(K, eps)
    return doc


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)
