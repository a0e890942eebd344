"""Command-line driver: construct, inspect, and verify Shapovalov elements.

Exit codes: 0 success/PASS, 1 usage error, 2 verification FAIL, 3 internal
assertion failure.  All output is deterministic for a fixed invocation.
"""

from __future__ import annotations

import argparse
import json
import sys

from sympy.polys.domains import QQ

from .chevalley import build_structure_constants
from .exact import format_poly, format_rational, format_ratfun, RatFun
from .oracle import (
    NonGenericConstructionError,
    bruteforce_singular,
    gram_kernel,
    oracle_compare,
    verify_extremal_symbolic,
)
from .rootsys import (
    AlgebraType,
    RootSystem,
    build_root_system,
    fundamental_coords,
    hasse_b_minus,
    interval_indices,
)
from .shapelem import admissible_choices, default_choice, theta_m
from .verma import format_monomial


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_root(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad root coordinates: {text!r}")


def _parse_lambda(text):
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        try:
            if "/" in piece:
                p, q = piece.split("/")
                out.append(QQ(int(p), int(q)))
            else:
                out.append(QQ(int(piece)))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad rational coordinate: {piece!r}")
    return tuple(out)


def _label(rs: RootSystem) -> str:
    return f"{rs.type.family}{rs.type.rank}"


def _root_system(name) -> RootSystem:
    try:
        return build_root_system(AlgebraType.parse(name))
    except ValueError as e:
        raise UsageError(str(e))


def _choice(rs, beta, alpha):
    if not rs.is_positive_root(beta):
        raise UsageError(f"{','.join(map(str, beta))} is not a positive "
                         f"root of the algebra")
    if alpha is None:
        return default_choice(rs, beta)
    for ch in admissible_choices(rs, beta):
        if ch.alpha == alpha:
            return ch
    raise UsageError(f"alpha index {alpha} does not enter beta")


def _node_name(node):
    kind, data = node
    if kind == "h":
        return f"h[{data + 1}]"
    return f"f[{','.join(map(str, data))}]"


def cmd_roots(args, out):
    rs = _root_system(args.algebra)
    print(f"algebra {_label(rs)} rank {rs.rank}", file=out)
    print(f"positive roots ({len(rs.positive_roots)}):", file=out)
    for i, g in enumerate(rs.positive_roots):
        print(f"  {i}: ({','.join(map(str, g))})  height {sum(g)}", file=out)
    print("rho (fundamental coords): ("
          + ",".join(format_rational(QQ.convert(c)) for c in
                     fundamental_coords(rs, rs.rho)) + ")", file=out)
    print("gram matrix of simple roots:", file=out)
    for row in rs.gram:
        print("  [" + ", ".join(format_rational(c) for c in row) + "]",
              file=out)
    return 0


def cmd_hasse(args, out):
    rs = _root_system(args.algebra)
    diagram = hasse_b_minus(rs)
    nodes, edges = diagram.nodes, diagram.edges
    if args.interval:
        alpha_root = _parse_root(args.interval[0])
        beta = _parse_root(args.interval[1])
        if not rs.is_positive_root(beta) or sum(alpha_root) != 1:
            raise UsageError("interval wants a simple root and a root")
        a = alpha_root.index(1)
        try:
            idxs = interval_indices(rs, a, beta)
        except ValueError as e:
            raise UsageError(str(e))
        keep = {("f", rs.positive_roots[i]) for i in idxs}
        nodes = tuple(n for n in diagram.nodes if n in keep)
        edges = tuple(e for e in diagram.edges
                      if e[0] in keep and e[1] in keep)
    if args.dot:
        print("digraph hasse {", file=out)
        for n in nodes:
            print(f'  "{_node_name(n)}";', file=out)
        for src, dst, a in edges:
            print(f'  "{_node_name(src)}" -> "{_node_name(dst)}" '
                  f'[label="e{a + 1}"];', file=out)
        print("}", file=out)
        return 0
    print(f"nodes ({len(nodes)}), by row (height):", file=out)
    by_height = {}
    for n in nodes:
        h = 0 if n[0] == "h" else sum(n[1])
        by_height.setdefault(h, []).append(_node_name(n))
    for h in sorted(by_height):
        print(f"  row {h}: " + "  ".join(by_height[h]), file=out)
    print(f"edges ({len(edges)}):", file=out)
    for src, dst, a in edges:
        print(f"  {_node_name(src)} -> {_node_name(dst)}  [e{a + 1}]",
              file=out)
    return 0


def _theta_json(rs, theta):
    terms = []
    for mono, coeff in theta.element.sorted_terms():
        parts = [[list(rs.positive_roots[i]), e]
                 for i, e in enumerate(mono) if e]
        if isinstance(coeff, RatFun):
            num, den = format_poly(coeff.num), format_poly(coeff.den)
        else:
            num, den = format_rational(coeff), "1"
        terms.append({"monomial": parts, "num": num, "den": den})
    return {
        "algebra": _label(rs),
        "beta": list(theta.beta),
        "m": theta.m,
        "alpha": theta.choice.alpha,
        "terms": terms,
    }


def cmd_theta(args, out):
    rs = _root_system(args.algebra)
    sc = build_structure_constants(rs)
    ch = _choice(rs, _parse_root(args.beta), args.alpha)
    theta = theta_m(rs, sc, ch, args.m)
    if args.json:
        print(json.dumps(_theta_json(rs, theta), indent=2), file=out)
    else:
        print(f"theta beta=({args.beta}) m={args.m} "
              f"alpha={ch.alpha + 1}", file=out)
        print(theta.element.render(), file=out)
    return 0


def cmd_verify(args, out):
    rs = _root_system(args.algebra)
    sc = build_structure_constants(rs)
    ch = _choice(rs, _parse_root(args.beta), args.alpha)
    theta = theta_m(rs, sc, ch, args.m)
    sym = verify_extremal_symbolic(rs, sc, theta)
    cases = oracle_compare(rs, sc, theta, samples=args.samples)
    passed = sym.passed and all(c.passed for c in cases)
    if args.json:
        print(json.dumps({
            "algebra": _label(rs),
            "symbolic": sym.to_json(),
            "samples": [c.to_json() for c in cases],
            "status": "PASS" if passed else "FAIL",
        }, indent=2), file=out)
    else:
        print(f"symbolic extremality on H_beta,m: "
              f"{'PASS' if sym.passed else 'FAIL'}", file=out)
        for a, res in sym.failures:
            print(f"  residual for e_{a + 1}: {res}", file=out)
        for c in cases:
            pt = ",".join(format_rational(x) for x in c.point)
            print(f"sample ({pt}): kernel dims "
                  f"{c.kernel_dim_bruteforce}/{c.kernel_dim_gram}, "
                  f"scalar {c.scalar if c.scalar is not None else '-'}"
                  f" -> {'PASS' if c.passed else 'FAIL ' + c.mismatch}",
                  file=out)
        print("PASS" if passed else "FAIL", file=out)
    return 0 if passed else 2


def cmd_gram(args, out):
    rs = _root_system(args.algebra)
    sc = build_structure_constants(rs)
    lam = _parse_lambda(args.lam)
    if len(lam) != rs.rank:
        raise UsageError("lambda needs one coordinate per simple root")
    mu = _parse_root(args.mu)
    gram, kern = gram_kernel(rs, sc, lam, mu)
    sing = bruteforce_singular(rs, sc, lam, mu)
    if args.json:
        print(json.dumps({
            "algebra": _label(rs),
            "lambda": [format_rational(x) for x in lam],
            "mu": list(mu),
            "gram": [[format_rational(x) for x in row] for row in gram],
            "kernel_dim": len(kern),
            "singular_dim": len(sing.basis),
        }, indent=2), file=out)
    else:
        print(f"gram matrix at weight lambda-({args.mu}), "
              f"size {len(gram)}:", file=out)
        for row in gram:
            print("  [" + ", ".join(format_rational(x) for x in row) + "]",
                  file=out)
        print(f"kernel dimension {len(kern)}; extremal dimension "
              f"{len(sing.basis)}", file=out)
        for v in kern:
            print("  kernel: " + v.render(), file=out)
    return 0


def cmd_oracle_compare(args, out):
    rs = _root_system(args.algebra)
    sc = build_structure_constants(rs)
    ch = _choice(rs, _parse_root(args.beta), args.alpha)
    theta = theta_m(rs, sc, ch, args.m)
    cases = oracle_compare(rs, sc, theta, samples=args.samples)
    passed = all(c.passed for c in cases)
    if args.json:
        print(json.dumps({
            "algebra": _label(rs), "beta": list(theta.beta), "m": theta.m,
            "alpha": ch.alpha, "cases": [c.to_json() for c in cases],
            "status": "PASS" if passed else "FAIL",
        }, indent=2), file=out)
    else:
        for c in cases:
            pt = ",".join(format_rational(x) for x in c.point)
            print(f"({pt}): dims {c.kernel_dim_bruteforce}/"
                  f"{c.kernel_dim_gram} scalar "
                  f"{c.scalar if c.scalar is not None else '-'} "
                  f"{'PASS' if c.passed else 'FAIL ' + c.mismatch}", file=out)
        print("PASS" if passed else "FAIL", file=out)
    return 0 if passed else 2


def build_parser() -> _Parser:
    p = _Parser(prog="shapovalov", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, beta=True):
        sp.add_argument("algebra", help="algebra label, e.g. A2, B3, G2")
        if beta:
            sp.add_argument("--beta", required=True,
                            help="positive root, simple-root coords: 1,2")
            sp.add_argument("-m", type=int, default=1, help="degree (>= 1)")
            sp.add_argument("--alpha", type=int, default=None,
                            help="1-based simple-root index (default: auto)")
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--threads", type=int, default=1,
                        help="accepted for interface compatibility")

    sp = sub.add_parser("roots", help="positive roots, rho, gram matrix")
    common(sp, beta=False)
    sp = sub.add_parser("hasse", help="Hasse diagram of the negative Borel")
    common(sp, beta=False)
    sp.add_argument("--interval", nargs=2, metavar=("ALPHA", "BETA"),
                    help="restrict to the interval [alpha, beta]")
    sp.add_argument("--dot", action="store_true",
                    help="emit a graph description")
    sp = sub.add_parser("theta", help="construct theta_{beta,m}")
    common(sp)
    sp = sub.add_parser("verify", help="symbolic + sampled verification")
    common(sp)
    sp.add_argument("--samples", type=int, default=3)
    sp = sub.add_parser("gram", help="Gram matrix and kernel at numeric "
                                     "lambda")
    common(sp, beta=False)
    sp.add_argument("--lambda", dest="lam", required=True,
                    help="fundamental coords, rationals: 1/3,-4/3")
    sp.add_argument("--mu", required=True,
                    help="weight in the root lattice: 1,1")
    sp = sub.add_parser("oracle-compare",
                        help="compare against brute-force oracles")
    common(sp)
    sp.add_argument("--samples", type=int, default=3)
    return p


_COMMANDS = {
    "roots": cmd_roots,
    "hasse": cmd_hasse,
    "theta": cmd_theta,
    "verify": cmd_verify,
    "gram": cmd_gram,
    "oracle-compare": cmd_oracle_compare,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "alpha", None) is not None:
            if args.alpha < 1:
                raise UsageError("--alpha is a 1-based simple-root index")
            args.alpha -= 1
        if getattr(args, "m", 1) < 1:
            raise UsageError("degree m must be >= 1")
        return _COMMANDS[args.command](args, out)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        print(parser.format_usage(), file=sys.stderr, end="")
        return 1
    except (NonGenericConstructionError, AssertionError) as e:
        print(f"internal assertion: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
