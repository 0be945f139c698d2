"""Command line interface.

Exit codes: 0 on success, 2 when an input fails validation, 3 when a
resource cap is hit.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import calculus as calc
from . import experiments as exp
from .errors import PatchworkError
from .families import FAMILIES, build_family
from .lattice import load_complex, save_complex
from .patchwork import betti, build_TX, components


def _write(doc, out):
    text = exp.dumps(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _signs(args, K):
    with open(args.signs) as fh:
        return calc.signs_from_json(json.load(fh), K)


def cmd_generate(args):
    K = build_family(args.family, args.dim, args.size)
    if args.output:
        save_complex(K, args.output)
    else:
        print(json.dumps(K.to_json()))


def cmd_validate(args):
    K = load_complex(args.complex)
    print(f"valid: dim {K.dim}, f-vector {K.f_vector()}")


def cmd_analyze(args):
    K = load_complex(args.complex)
    uniform, failing = calc.rho_uniformity(K)
    kap, exact = calc.kappa_bound(K)
    doc = {
        "dim": K.dim,
        "f_vector": K.f_vector(),
        "interior_points": len(K.polytope.interior_lattice_points()),
        "boundary_simplices": len(K.boundary),
        "B0_simplices": len(K.B0),
        "B1_simplices": len(K.B1),
        "rho_uniform": uniform,
        "rho_failing": [list(s) for s in failing],
        "kappa": kap,
        "kappa_exact": exact,
    }
    _write(doc, args.out)


def cmd_sign(args):
    K = load_complex(args.complex)
    coeffs = json.loads(args.coeffs) if args.coeffs else None
    eps = calc.named_distribution(args.formula, K, coeffs=coeffs, value=args.value, seed=args.seed)
    _write({"values": eps}, args.out)


def cmd_build_tx(args):
    K = load_complex(args.complex)
    X = build_TX(K, _signs(args, K))
    if args.dump:
        with open(args.dump, "w") as fh:
            json.dump(X.to_json(), fh)
    count, _, incidence = components(X)
    _write({"cells": X.counts(), "b0": count, "betti": betti(X),
            "divisor_incidence": incidence}, args.out)


def cmd_haas_check(args):
    K = load_complex(args.complex)
    rep = calc.haas_check(K, _signs(args, K), compute_cond2=not args.skip_cond2)
    _write(rep.to_json(), args.out)


def cmd_solve_harnack(args):
    K = load_complex(args.complex)
    eps = calc.solve_simple_harnack(K)
    _write({"simply_integrable": eps is not None, "values": eps}, args.out)


def cmd_expect_b0(args):
    K = load_complex(args.complex)
    if args.exhaustive:
        res = exp.exhaustive_b0(K)
        doc = {"histogram": {str(k): v for k, v in res.histogram.items()},
               "mean_b0": float(res.mean_b0), "mean_b0_exact": str(res.mean_b0),
               "maximal_count": len(res.maximal), "total": res.total}
    else:
        doc = exp.monte_carlo_b0(K, args.trials, args.seed).to_json()
    _write(doc, args.out)


def cmd_render(args):
    K = load_complex(args.complex)
    text = exp.render_svg(K, _signs(args, K), args.out)
    if not args.out:
        sys.stdout.write(text)


def cmd_report(args):
    K = load_complex(args.complex)
    eps = _signs(args, K)
    if args.format == "svg":
        text = exp.render_svg(K, eps, args.out)
        if not args.out:
            sys.stdout.write(text)
        return
    _write(exp.report(K, eps), args.out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tpatch", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a family triangulation")
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--size", type=int, required=True)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    def with_complex(name, func, help_, signs=False):
        s = sub.add_parser(name, help=help_)
        s.add_argument("complex", help="triangulation JSON file")
        if signs:
            s.add_argument("signs", help="sign distribution JSON file")
        s.add_argument("--out", help="write the result here instead of stdout")
        s.set_defaults(func=func)
        return s

    with_complex("validate", cmd_validate, "check a triangulation file")
    with_complex("analyze", cmd_analyze, "combinatorial invariants of a triangulation")
    s = with_complex("sign", cmd_sign, "write a named sign distribution")
    s.add_argument("--formula", choices=["harnack", "quadratic", "constant", "random"],
                   default="harnack")
    s.add_argument("--coeffs", help='polynomial coefficients, e.g. {"x1":1,"x1*x2":1}')
    s.add_argument("--value", type=int, default=0)
    s.add_argument("--seed", type=int, default=0)
    s = with_complex("build-tx", cmd_build_tx, "build the T-hypersurface", signs=True)
    s.add_argument("--dump", help="write the cell complex JSON here")
    s = with_complex("haas-check", cmd_haas_check, "evaluate the maximality criterion", signs=True)
    s.add_argument("--skip-cond2", action="store_true")
    with_complex("solve-harnack", cmd_solve_harnack, "solve the simple integrability system")
    s = with_complex("expect-b0", cmd_expect_b0, "expected number of components")
    s.add_argument("--trials", type=int, default=256)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--exhaustive", action="store_true")
    with_complex("render", cmd_render, "draw a 2-dimensional patchwork as SVG", signs=True)
    s = with_complex("report", cmd_report, "full report for a triangulation and signs", signs=True)
    s.add_argument("--format", choices=["json", "svg"], default="json")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except PatchworkError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return err.exit_code
    except (OSError, ValueError, KeyError, TypeError, IndexError) as err:
        # malformed input files
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
