"""Command-line front end: ``grpdlab <group> <command> [files] [options]``.

JSON goes to stdout (or ``-o``). Exit codes: 0 success, 1 usage error,
2 validation failure, 3 refuted-with-witness.
"""

import argparse
import json
import os
import sys

import numpy as np

from grpdlab import algebra, config, pnorm, rigidity, sft, thompson
from grpdlab import groupoid as gmod

EXIT_USAGE, EXIT_INVALID, EXIT_REFUTED = 1, 2, 3


class Invalid(Exception):
    """Input parsed but failed validation."""


def _load(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _plain(obj):
    """Make numpy scalars, tuples and arrays JSON-friendly."""
    if isinstance(obj, dict):
        return {gmod._id(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    if isinstance(obj, np.ndarray):
        return pnorm.matrix_to_json(obj) if np.iscomplexobj(obj) else obj.tolist()
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _text(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, dict) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    return f"{pad}{obj}"


# --- loaders -----------------------------------------------------------------------

def _groupoid(path):
    g = gmod.groupoid_from_json(_load(path))
    rep = gmod.validate_groupoid(g)
    if not rep.valid:
        raise Invalid(f"{path}: {rep.violations[0][1]}")
    return g


def _element(path, groupoid=None):
    obj = _load(path)
    ref = obj.get("groupoid")
    if groupoid is None:
        if isinstance(ref, str):
            ref = os.path.join(os.path.dirname(path), ref)
            groupoid = _groupoid(ref)
        else:
            groupoid = gmod.groupoid_from_json(ref)
            rep = gmod.validate_groupoid(groupoid)
            if not rep.valid:
                raise Invalid(f"{path}: {rep.violations[0][1]}")
    unknown = set(obj["coeffs"]) - set(groupoid.arrows)
    if unknown:
        raise Invalid(f"{path}: coefficients on unknown arrows {sorted(unknown)}")
    return algebra.element_from_json(obj, groupoid)


def _bisection(path):
    try:
        return sft.bisection_from_json(_load(path))
    except (TypeError, ValueError) as e:
        raise Invalid(f"{path}: {e}") from e


def _table(path, check=True):
    t = thompson.table_from_json(_load(path))
    if check:
        rep = thompson.validate_table(t)
        if not rep.valid:
            raise Invalid(f"{path}: {rep.violations[0][1]}")
    return t


def _matrix(path):
    a = pnorm.matrix_from_json(_load(path))
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise Invalid(f"{path}: expected a square matrix")
    return a


# --- groupoid ------------------------------------------------------------------------

def cmd_groupoid(args):
    if args.command == "germ":
        action = gmod.action_from_json(_load(args.files[0]))
        rep = action.validate()
        if not rep.valid:
            raise Invalid(rep.violations[0][1])
        return gmod.groupoid_to_json(gmod.germ_groupoid(action)), 0
    if args.command == "validate":
        rep = gmod.validate_groupoid(gmod.groupoid_from_json(_load(args.files[0])))
        return rep.to_dict(), 0 if rep.valid else EXIT_INVALID
    g = _groupoid(args.files[0])
    if args.command == "decompose":
        try:
            return gmod.decompose_elementary(g, merge=args.merge).to_json(), 0
        except gmod.NotPrincipalError as e:
            raise Invalid(f"not principal: isotropy arrow {gmod._id(e.arrow)}") from e
    v = gmod.condition_w_check(g)
    return {"holds": bool(v.value), "note": v.note,
            "witnesses": {gmod._id(x): None if a is None else gmod._id(a)
                          for x, a in v.detail.items()}}, 0


# --- sft ---------------------------------------------------------------------------------

def cmd_sft(args):
    if args.command == "extend":
        obj = _load(args.files[0])
        try:
            alphabets, a = sft.cylinder_from_json(obj)
            S = sft.extend_to_full_group_bisection(a, alphabets)
        except (TypeError, ValueError) as e:
            raise Invalid(str(e)) from e
        return sft.bisection_to_json(S), 0
    S = _bisection(args.files[0])
    if args.command == "invert":
        return sft.bisection_to_json(sft.bisection_inverse(S)), 0
    if args.command == "fullgroup":
        dom, dm = sft.domain_boxes(S)
        _, rm = sft.range_boxes(S)
        return {"full_group_element": sft.is_full_group_element(S),
                "domain_measure": str(dm), "range_measure": str(rm)}, 0
    T = _bisection(args.files[1])
    try:
        return sft.bisection_to_json(sft.bisection_product(S, T)), 0
    except ValueError as e:
        raise Invalid(str(e)) from e


# --- table ----------------------------------------------------------------------------------

def _point(text, m):
    parts = text.split(",")
    if len(parts) != m:
        raise Invalid(f"point needs {m} comma-separated words, got {text!r}")
    return tuple(parts)


def cmd_table(args):
    if args.command == "validate":
        rep = thompson.validate_table(_table(args.files[0], check=False))
        return rep.to_dict(), 0 if rep.valid else EXIT_INVALID
    t = _table(args.files[0])
    if args.command == "invert":
        return thompson.table_to_json(thompson.invert(t)), 0
    if args.command == "reduce":
        return thompson.table_to_json(thompson.reduce(t)), 0
    if args.command == "to-bisection":
        return sft.bisection_to_json(thompson.table_to_bisection(t)), 0
    if args.command == "apply":
        if args.point is None:
            raise argparse.ArgumentError(None, "table apply needs --point")
        try:
            image = thompson.apply(t, _point(args.point, t.m))
        except ValueError as e:
            raise Invalid(str(e)) from e
        return {"point": args.point.split(","), "image": list(image)}, 0
    s = _table(args.files[1])
    if s.alphabets != t.alphabets:
        raise Invalid(f"alphabet mismatch: {t.alphabets} vs {s.alphabets}")
    if args.command == "compose":
        return thompson.table_to_json(thompson.compose(t, s)), 0
    out = {"equal": thompson.equals(t, s)}
    if args.depth is not None:
        depth = tuple(max(args.depth, a, b) for a, b in zip(t.max_v_depth(), s.max_v_depth()))
        out["equal_on_grid"] = thompson.equals_by_grid(t, s, depth)
    return out, 0


# --- algebra --------------------------------------------------------------------------------

def _cocycle(args, g):
    if args.cocycle is None:
        return None
    c = algebra.cocycle_from_json(_load(args.cocycle), g)
    rep = algebra.validate_cocycle(c)
    if not rep.valid:
        raise Invalid(f"{args.cocycle}: {rep.violations[0][1]}")
    return c


def cmd_algebra(args):
    f = _element(args.files[0])
    g = f.groupoid
    c = _cocycle(args, g)
    if args.command == "convolve":
        h = _element(args.files[1], g)
        return algebra.element_to_json(algebra.convolve(f, h, c)), 0
    if args.command == "expect":
        return algebra.element_to_json(algebra.expectation(f)), 0
    if args.command == "norm":
        rep = algebra.reduced_norm(f, args.p, c, seed=args.seed)
        out = rep.to_json()
        out["fiber"] = gmod._id(out["fiber"])
        return out, 0
    if args.command == "lambda":
        units = g.unit_list if args.unit is None else [args.unit]
        out = {}
        for x in units:
            if x not in g.units:
                raise Invalid(f"{x!r} is not a unit")
            r = algebra.lambda_matrix(f, x, c)
            out[gmod._id(x)] = {"basis": [gmod._id(a) for a in r.basis],
                                "matrix": pnorm.matrix_to_json(r.matrix)}
        return out, 0
    b = _element(args.files[1], g)
    beta = _load(args.files[2])
    beta = beta.get("beta", beta)
    tol = config.ALGEBRA_TOL if args.tol is None else args.tol
    try:
        v = algebra.verify_admissible_pair(f, b, beta, tol=tol)
    except ValueError as e:
        raise Invalid(str(e)) from e
    return {"admissible": bool(v.value), **v.detail}, 0


# --- pnorm ------------------------------------------------------------------------------------

def cmd_pnorm(args):
    a = _matrix(args.files[0])
    if args.command == "norm":
        return pnorm.p_operator_norm(a, args.p, seed=args.seed).to_json(), 0
    if args.command == "herm":
        v = pnorm.hermitian_test(a, args.p, seed=args.seed)
        return {"hermitian": bool(v.value), "note": v.note, "t_max": v.detail.t_max,
                "norm_max": v.detail.norm_max, "p": args.p}, 0
    if args.command == "isometry":
        v = pnorm.is_invertible_isometry(a, args.p)
        return {"invertible_isometry": bool(v.value), "note": v.note}, 0
    if len(args.files) < 2:
        raise argparse.ArgumentError(None, "pnorm mp needs two matrices")
    v = pnorm.is_mp_partial_isometry(a, _matrix(args.files[1]), args.p)
    return {"mp_partial_isometry": bool(v.value), "note": v.note, **v.detail}, 0


# --- check -------------------------------------------------------------------------------------

def cmd_check(args):
    try:
        if args.command == "witness":
            w = rigidity.non_abelian_witness([int(k) for k in args.alphabets.split(",")])
            return w.to_json(), 0
        if args.command == "af":
            rep = rigidity.af_embeddability_report(_groupoid(args.files[0]), args.p, seed=args.seed)
        else:
            fn = {"core": rigidity.core_diagonal_check,
                  "isometries": rigidity.isometry_classification_check,
                  "tfg": rigidity.tfg_quotient_check}[args.command]
            kw = {} if args.samples is None else {"samples": args.samples}
            rep = fn(args.n, args.p, seed=args.seed, **kw)
    except ValueError as e:
        raise Invalid(str(e)) from e
    return rep.to_json(), EXIT_REFUTED if rep.refuted else 0


# --- parser -------------------------------------------------------------------------------------

GROUPS = {
    "groupoid": (cmd_groupoid, {"validate": 1, "germ": 1, "decompose": 1, "condw": 1}),
    "sft": (cmd_sft, {"product": 2, "invert": 1, "fullgroup": 1, "extend": 1}),
    "table": (cmd_table, {"validate": 1, "compose": 2, "invert": 1, "apply": 1, "equals": 2,
                          "reduce": 1, "to-bisection": 1}),
    "algebra": (cmd_algebra, {"convolve": 2, "norm": 1, "expect": 1, "lambda": 1, "admissible": 3}),
    "pnorm": (cmd_pnorm, {"norm": 1, "herm": 1, "mp": 2, "isometry": 1}),
    "check": (cmd_check, {"core": 0, "isometries": 0, "tfg": 0, "af": 1, "witness": 0}),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _common(p):
    p.add_argument("--p", type=float, default=3.0, help="exponent p >= 1 (default 3)")
    p.add_argument("--depth", type=int, default=None, help="evaluation depth, at most 8")
    p.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=None, help="override the comparison slack")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--text", dest="format", action="store_const", const="text")
    p.set_defaults(format="json")
    p.add_argument("-o", "--output", default=None, help="write output here instead of stdout")


def build_parser():
    parser = _Parser(prog="grpdlab", description="Finite groupoids, Brin-Thompson tables and l^p norms.")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    for name, (fn, commands) in GROUPS.items():
        gp = groups.add_parser(name)
        sub = gp.add_subparsers(dest="command", required=True, parser_class=_Parser)
        for cmd, nfiles in commands.items():
            sp = sub.add_parser(cmd)
            if nfiles:
                sp.add_argument("files", nargs=nfiles, metavar="FILE")
            _common(sp)
            sp.set_defaults(func=fn)
        if name == "groupoid":
            sub.choices["decompose"].add_argument("--merge", action="store_true",
                                                  help="group orbits of equal size into one block")
        if name == "table":
            sub.choices["apply"].add_argument("--point", help="comma-separated words, one per coordinate")
        if name == "algebra":
            for cmd in commands:
                sub.choices[cmd].add_argument("--cocycle", default=None, help="cocycle JSON file")
            sub.choices["lambda"].add_argument("--unit", default=None)
        if name == "check":
            for cmd in ("core", "isometries", "tfg"):
                sub.choices[cmd].add_argument("--n", type=int, default=2)
                sub.choices[cmd].add_argument("--samples", type=int, default=None)
            sub.choices["witness"].add_argument("--alphabets", default="2",
                                                help="comma-separated alphabet sizes")
    return parser


def _check_ranges(args):
    if not args.p >= 1:
        raise argparse.ArgumentError(None, "--p must be >= 1")
    if args.depth is not None and not 0 <= args.depth <= 8:
        raise argparse.ArgumentError(None, "--depth must be between 0 and 8")
    samples = getattr(args, "samples", None)
    if samples is not None and not 1 <= samples <= 10**6:
        raise argparse.ArgumentError(None, "--samples must be between 1 and 10^6")
    if args.tol is not None and not args.tol > 0:
        raise argparse.ArgumentError(None, "--tol must be positive")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    saved_tol = config.NORM_TOL
    try:
        _check_ranges(args)
        if args.tol is not None:
            config.NORM_TOL = args.tol
        out, code = args.func(args)
    except argparse.ArgumentError as e:
        print(f"grpdlab: error: {e.message}", file=sys.stderr)
        return EXIT_USAGE
    except Invalid as e:
        print(f"grpdlab: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        # malformed or mistyped input files
        print(f"grpdlab: cannot read input: {e}", file=sys.stderr)
        return EXIT_INVALID
    finally:
        config.NORM_TOL = saved_tol
    out = _plain(out)
    text = json.dumps(out, sort_keys=True, indent=2) if args.format == "json" else _text(out)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
