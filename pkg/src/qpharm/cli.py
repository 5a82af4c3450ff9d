"""Batch command-line front end.

Subcommands mirror the module layer: analyze, chain, continuous, count,
fit, verify, decompose.  Outputs are deterministic (canonical forms,
sorted keys); exit codes are 0 success, 2 validation failure, 3 failed
precondition, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import errors
from .algebra import RatFunc2, canonical_ratfunc1_str, canonical_ratfunc2_str
from .model import StepModel, builtin_model, builtin_names, kernel, load_model, theta_info
from .curve import group_orbit, parametrize
from .conformal import harmonic_basis, omega_rational
from .pipelines import (
    PHF,
    chain_verifies,
    closed_form_pi2,
    decompose_in_basis,
    extract_grid,
    lift_chain_rational,
    lift_chain_series,
    poly_to_gf,
    verify_polyharmonic,
)
from .laplace import cont_chain, cont_kernel, inverse_laplace, scaling_limit
from .oracle import count_walks, extract_asymptotics, simple_walk_exact
from .pitheta2 import circle_data, finite_criterion_pi2, p_position


def _load(spec: str) -> StepModel:
    if spec in builtin_names():
        return builtin_model(spec)
    return load_model(spec)


def _precision_default() -> int:
    return int(os.environ.get("QPHARM_PRECISION_BITS", "256"))


def cmd_analyze(args):
    m = _load(args.model)
    kd = kernel(m)
    ti = theta_info(m)
    g = group_orbit(m, bound=args.bound)
    out = {
        "model": m.name or args.model,
        "kernel": canonical_ratfunc2_str(RatFunc2.from_poly(kd.K)),
        "sigma": [str(ti.sigma11), str(ti.sigma12), str(ti.sigma22)],
        "cos_theta_squared": str(ti.cos_theta_squared),
        "pi_over_theta": ti.pi_over_theta,
        "theta": ti.theta_numeric,
        "group": {"finite": g.finite, "order": g.order, "bound": g.bound},
    }
    if ti.pi_over_theta == 2:
        out["pi2_symmetry"] = finite_criterion_pi2(m)
        cd = circle_data(m)
        out["circle"] = {"center": str(cd.center), "radius": str(cd.radius), "p": str(cd.p)}
    if args.format == "json":
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print(f"model: {out['model']}")
        print(f"kernel: {out['kernel']}")
        print(f"sigma: ({out['sigma'][0]}, {out['sigma'][1]}, {out['sigma'][2]})")
        po = out["pi_over_theta"]
        print(f"pi/theta: {po if po is not None else f'non-integer (theta={ti.theta_numeric:.6f})'}")
        if g.finite:
            print(f"group: finite, order {g.order}")
        else:
            print(f"group: infinite (bound {g.bound})")
        if "pi2_symmetry" in out:
            print(f"pi/theta=2 symmetry: {out['pi2_symmetry']}")
            c = out["circle"]
            print(f"circle: center {c['center']}, radius {c['radius']}, p {c['p']}")
    return 0


def cmd_chain(args):
    m = _load(args.model)
    if args.pipeline == "rational":
        g = group_orbit(m)
        if not g.finite:
            raise errors.GroupInfinite("rational pipeline needs a finite group")
        chain = lift_chain_rational(m, k=args.k, n=args.n, g=g)
    elif args.pipeline == "series":
        order = args.order or (2 * (args.k * 3 + 2 * args.n) + 4)
        chain = lift_chain_series(m, k=args.k, n=args.n, order=order)
    elif args.pipeline == "pi2":
        chain = [
            PHF(rep=closed_form_pi2(m, nn, args.k), n=nn, k=args.k, provenance="pi2", model=m)
            for nn in range(1, args.n + 1)
        ]
    else:
        raise ValueError(args.pipeline)
    for item in chain:
        label = f"H_{item.n}^{item.k}"
        if item.is_rational:
            print(f"{label} = {canonical_ratfunc2_str(item.rep)}")
        else:
            terms = sorted(item.rep.terms.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0][0]))
            head = " + ".join(f"({c})*x^{i}*y^{j}" for (i, j), c in terms[:8])
            print(f"{label} (series to order {item.rep.order}) = {head} + ...")
        if item.pair is not None:
            print(f"  F_{item.n-1} = {canonical_ratfunc1_str(item.pair.F)}")
            print(f"  G_{item.n-1} = {canonical_ratfunc1_str(item.pair.G, var='y')}")
    ok = chain_verifies(chain, m, window=args.window)
    print(f"verification: {'PASS' if ok else 'FAIL'} (Delta-chain on {args.window}x{args.window})")
    return 0 if ok else 4


def cmd_continuous(args):
    m = _load(args.model)
    ck = cont_kernel(m)
    if ck.pi_over_theta is None:
        raise errors.NotIntegerAngle("continuous chain needs integer pi/theta")
    chain = cont_chain(m, args.k, args.n)
    for idx, (L, f) in enumerate(chain):
        n = idx + 1
        print(f"L(h_{n}^{args.k}) = {L.render()}")
        if f is not None:
            print(f"  decoupler f_{n-1} = ({f.beta}) * x^({f.exponent})")
        try:
            inv = inverse_laplace(L)
            from .algebra import canonical_poly2_str

            print(f"  inverse transform (s,t): {canonical_poly2_str(inv)}")
        except errors.NonIntegerExponent:
            print("  inverse transform: not available (exponent < 1)")
    if args.limits:
        from .conformal import harmonic_basis

        H1 = harmonic_basis(m, args.k)
        order, lf = scaling_limit(H1)
        scalar = lf.proportional_scalar(chain[0][0])
        print(f"scaling limit H_1^{args.k}: order {order}, alpha_(1,{args.k}) = {scalar}")
    return 0


def cmd_count(args):
    m = _load(args.model)
    wc = count_walks(m, args.nmax, exact=not args.float)
    if args.format == "csv":
        print("i,j,q")
        layer = wc.table[args.nmax] if wc.exact else None
        if wc.exact:
            for (i, j) in sorted(layer):
                print(f"{i},{j},{Fraction(layer[(i,j)], wc.scale_denominator**args.nmax)}")
        else:
            import numpy as np

            nz = list(zip(*[a.tolist() for a in wc.table.nonzero()]))
            for (i, j) in sorted(nz):
                print(f"{i},{j},{wc.table[i, j]!r}")
    else:
        total = wc.layer_mass(args.nmax) if wc.exact else None
        print(f"n = {args.nmax}: q(0,(0,0);n) = {wc.q(0,0,args.nmax) if wc.exact else wc.table[0,0]}")
        if total is not None:
            print(f"total mass: {total}")
    return 0


def cmd_fit(args):
    m = _load(args.model)
    i, j = (int(v) for v in args.target.split(","))
    targets = [(0, 0), (i, j)]
    wc = count_walks(m, args.nmax, exact=False, targets=targets)
    exps = [3 + p for p in range(args.terms)]
    fit = extract_asymptotics(wc, targets, exponents=exps)
    v0 = fit.estimates[(0, 0)][0]
    vt = fit.estimates[(i, j)][0]
    print(f"v1({i},{j})/v1(0,0) = {vt / v0:.6f}")
    print(f"residual rms: {fit.residuals[(i, j)]:.3e}")
    return 0


def cmd_decompose(args):
    m = _load(args.model)
    if m.name != "simple":
        raise errors.PreconditionError("built-in decompositions are defined for the simple walk")
    from .tables import simple_walk_v_decomposition

    which = args.what.upper()
    coeffs, basis_labels = simple_walk_v_decomposition(which)
    print(f"{which} = " + " + ".join(f"({c})*{b}" for c, b in zip(coeffs, basis_labels)))
    return 0


def cmd_verify(args):
    m = _load(args.model)
    g = group_orbit(m)
    window = args.window
    report_lines = []
    ok_all = True
    if g.finite:
        chain = lift_chain_rational(m, k=args.k, n=args.n, g=g)
        ok = chain_verifies(chain, m, window=window)
        report_lines.append(("Delta-chain (rational)", ok))
        ok_all &= ok
        grid = extract_grid(chain[-1], window)
        rep = verify_polyharmonic(grid, m, degree=args.n, window=window - args.n)
        report_lines.append((f"Delta^{args.n} = 0", rep.passed))
        ok_all &= rep.passed
    order = 2 * window + 2
    schain = lift_chain_series(m, k=args.k, n=min(args.n, 2), order=order)
    ok = chain_verifies(schain, m, window=min(window, order // 2))
    report_lines.append(("Delta-chain (series)", ok))
    ok_all &= ok
    for name, ok in report_lines:
        print(f"{'PASS' if ok else 'FAIL'}: {name}")
    return 0 if ok_all else 4


def build_parser():
    ap = argparse.ArgumentParser(
        prog="qpharm",
        description="Exact workbench for quarter-plane walk polyharmonic functions",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="kernel, covariance, angle, group")
    p.add_argument("model")
    p.add_argument("--bound", type=int, default=12)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("chain", help="construct H_1^k .. H_n^k")
    p.add_argument("model")
    p.add_argument("--pipeline", choices=["rational", "series", "pi2"], required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--window", type=int, default=10)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("continuous", help="continuous Laplace-transform chain")
    p.add_argument("model")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--limits", action="store_true")
    p.set_defaults(func=cmd_continuous)

    p = sub.add_parser("count", help="excursion counting")
    p.add_argument("model")
    p.add_argument("--nmax", type=int, default=20)
    p.add_argument("--float", action="store_true")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("fit", help="asymptotic coefficient fit")
    p.add_argument("model")
    p.add_argument("--nmax", type=int, default=400)
    p.add_argument("--target", default="1,1")
    p.add_argument("--terms", type=int, default=4)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("decompose", help="decompose printed V_p over the basis")
    p.add_argument("model")
    p.add_argument("what", choices=["V2", "V3", "v2", "v3"])
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="run invariant checks")
    p.add_argument("model")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--window", type=int, default=12)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except errors.ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except errors.PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 3
    except errors.InternalInvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
