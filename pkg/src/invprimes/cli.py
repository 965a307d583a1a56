"""Command-line front end: ``invprimes <area> <command> [flags]``.

Output is JSON by default (``--format table`` for a plain listing), sorted and
stable so that repeated runs are byte-identical.  Domain errors exit with
status 1 and a JSON object on stderr; usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import acceptance as acc
from .abgroup import FgAbGroup, enumerate_subgroups, quotient_map
from .fgl.laws import (
    additive,
    fgl_axioms_check,
    fgl_height,
    honda,
    multiplicative,
    n_series,
    reduce_mod_In,
    universal_p_typical,
)
from .fgl.level import LevelData, blueshift_report, gm_c2, level_vbar, psi
from .fgl.rings import Integers, NotDivisible, PrimeField
from .spectrum import (
    CircleContext,
    closure,
    find_violation,
    fmt_height,
    fn_from_json,
    includes,
    parse_point,
    point_json,
    specialization_order,
)
from .support import (
    balmer_compare,
    geom_fixed_points,
    random_types,
    smash,
    support_of,
    type_from_json,
    type_to_json,
    type_violation,
    wedge,
)
from .witness import interval_json, realize, to_json, verify_realization, witness_heights


class DomainError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def _context(args):
    text = args.group.strip()
    if text.upper() in ("T", "S1", "1;"):
        return CircleContext(args.prime, args.max_height)
    try:
        A = FgAbGroup.parse(text)
    except ValueError as err:
        raise DomainError(f"bad group descriptor {text!r}: {err}") from None
    if A.rank:
        if A.rank == 1 and not A.torsion:
            return CircleContext(args.prime, args.max_height)
        raise DomainError("only finite groups and the circle are supported")
    from .spectrum import SpecContext

    return SpecContext(A, args.prime, args.max_height, use_cache=not args.no_cache)


def _payload(text: str | None, what: str):
    """Inline JSON, or a path to a JSON file."""
    if text is None:
        raise DomainError(f"missing {what}")
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise DomainError(f"{what} is not valid JSON: {err}") from None


def _fn(ctx, args):
    return fn_from_json(ctx, _payload(args.input, "--input function"))


def _trunc(args) -> int:
    return 8 if args.trunc is None else args.trunc


def _series_json(s) -> dict:
    R = s.ring
    return {"trunc": s.trunc, "ring": repr(R), "series": str(s),
            "constant_term": R.fmt(s.coeff(0)),
            "terms": [{"degree": e[0], "coeff": R.fmt(c)} for e, c in sorted(s.terms.items())]}


def _law(name: str, p: int, n: int | None, D: int):
    if name == "multiplicative":
        return multiplicative(PrimeField(p), D)
    if name == "additive":
        return additive(PrimeField(p), D)
    if name == "honda":
        return honda(p, n or 1, D)
    if name == "p-typical":
        N = 1
        while p ** (N + 1) <= D:
            N += 1
        return universal_p_typical(p, D, N)
    raise DomainError(f"unknown law {name!r}")


# ---------------------------------------------------------------------------
# commands


def cmd_group_subgroups(args):
    ctx = _context(args)
    if ctx.circle:
        keys = ctx.keys(args.window)
        return [{"id": i, "label": ctx.label(k)} for i, k in enumerate(keys)]
    return [{"id": i, "label": ctx.labels[i], "structure": s.structure().to_json(), "order": s.structure().order,
             "lattice": [list(r) for r in s.lattice]} for i, s in enumerate(ctx.subgroups)]


def cmd_group_quotient(args):
    ctx = _context(args)
    if ctx.circle:
        raise DomainError("quotients are only tabulated for finite groups")
    b = ctx.resolve(args.sub)
    Q, _ = quotient_map(ctx.subgroups[b])
    return {"subgroup": ctx.labels[b], "quotient": Q.to_json(), "name": Q.name(),
            "subgroups": len(enumerate_subgroups(Q, use_cache=not args.no_cache))}


def cmd_spec_includes(args):
    ctx = _context(args)
    P, Q = parse_point(ctx, args.src), parse_point(ctx, args.dst)
    return {"includes": includes(ctx, P, Q)}


def cmd_spec_closure(args):
    ctx = _context(args)
    pts = [parse_point(ctx, t) for t in args.points.split(",") if t.strip()]
    V = closure(ctx, pts, args.max_height)
    return {"boundary": V.boundary.to_json(ctx)}


def cmd_spec_admissible(args):
    ctx = _context(args)
    v = find_violation(ctx, _fn(ctx, args))
    if v is None:
        return {"admissible": True}
    return {"admissible": False, "violation": {"smaller": ctx.label(v.smaller), "larger": ctx.label(v.larger),
                                               "deficit": fmt_height(v.deficit)}}


def cmd_spec_order(args):
    ctx = _context(args)
    if ctx.circle:
        raise DomainError("the order is only tabulated for finite groups")
    pts, rel = specialization_order(ctx, args.max_height)
    pairs = [[i, j] for i in range(len(pts)) for j in range(len(pts)) if i != j and rel[i, j]]
    return {"points": [point_json(ctx, P) for P in pts], "includes": pairs}


def cmd_witness_realize(args):
    ctx = _context(args)
    f = _fn(ctx, args)
    v = find_violation(ctx, f)
    if v is not None:
        raise DomainError(f"function is not admissible at {ctx.label(v.smaller)} <= {ctx.label(v.larger)}")
    W = realize(ctx, f)
    h = witness_heights(ctx, W)
    out = {"elements": [str(x) for x in W.elements], "ast": [to_json(x) for x in W.elements],
           "verified": verify_realization(ctx, f, W) is None}
    if not ctx.circle:
        out["heights"] = {ctx.labels[i]: interval_json(iv) for i, iv in enumerate(h)}
    return out


def cmd_fgl_pseries(args):
    F = _law(args.law, args.prime, args.n, _trunc(args))
    if args.mod_I is not None:
        F = reduce_mod_In(F, args.mod_I)
    fail = fgl_axioms_check(F) if args.check else None
    out = {"law": F.name, **_series_json(n_series(F, args.m or args.prime))}
    if args.check:
        out["axioms"] = "ok" if fail is None else {"axiom": fail.axiom, "witness": list(fail.witness)}
    return out


def cmd_fgl_psi(args):
    s = psi(args.prime, args.n, args.k, _trunc(args), top=args.top if args.top else args.n + 1)
    return {"p": args.prime, "n": args.n, "k": args.k, **_series_json(s)}


def cmd_fgl_blueshift(args):
    rep = blueshift_report(args.prime, args.n, args.k, args.trunc)
    return rep._asdict()


def cmd_fgl_gm_c2(args):
    F, e = gm_c2(args.sign, _trunc(args))
    vbar = level_vbar(F, LevelData(2, 1, {(0,): Integers().zero(), (1,): e}))
    return {"e_V": e, "quotient_order": abs(e), "vbar": _series_json(vbar)}


def cmd_fgl_height(args):
    D = args.trunc or max(8, args.prime ** (args.n or 1))
    F = _law(args.law, args.prime, args.n, D)
    r = fgl_height(F, args.prime)
    return {"law": F.name, "height": fmt_height(r.height), "truncation_limited": r.truncation_limited}


def _types(ctx, args):
    t1 = type_from_json(ctx, _payload(args.input, "--input type function"))
    t2 = type_from_json(ctx, _payload(args.input2, "--input2 type function")) if getattr(args, "input2", None) else None
    for t in (t1, t2):
        bad = None if t is None else type_violation(ctx, t)
        if bad is not None:
            raise DomainError(f"type function is not realizable along {ctx.label(bad[0])} <= {ctx.label(bad[1])}")
    return t1, t2


def _support_json(ctx, t, H):
    S = support_of(ctx, t, H)
    pts = sorted(S.points(ctx, H), key=lambda P: (P.sub, P.n))
    return {"boundary": S.boundary.to_json(ctx), "points": [point_json(ctx, P) for P in pts]}


def _finite(ctx):
    if ctx.circle:
        raise DomainError("supports are only tabulated for finite groups")
    return ctx


def cmd_support_of(args):
    ctx = _finite(_context(args))
    t, _ = _types(ctx, args)
    return _support_json(ctx, t, args.max_height)


def cmd_support_smash(args):
    ctx = _finite(_context(args))
    t1, t2 = _types(ctx, args)
    if t2 is None:
        raise DomainError("smash needs --input2")
    op = wedge if args.wedge else smash
    t = op(t1, t2)
    return {"type": type_to_json(ctx, t), **_support_json(ctx, t, args.max_height)}


def cmd_support_phi(args):
    ctx = _finite(_context(args))
    t, _ = _types(ctx, args)
    qctx, tq = geom_fixed_points(ctx, t, ctx.resolve(args.sub))
    return {"quotient": qctx.group.to_json(), "type": type_to_json(qctx, tq)}


def cmd_support_random(args):
    ctx = _finite(_context(args))
    ts = random_types(ctx, args.max_height, args.count, args.seed)
    return [type_to_json(ctx, t) for t in ts]


def cmd_support_compare(args):
    ctx = _finite(_context(args))
    cert = balmer_compare(ctx, args.max_height)
    bad = [[point_json(ctx, P), point_json(ctx, Q)]
           for i, P in enumerate(cert.points) for j, Q in enumerate(cert.points)
           if cert.inclusions[i, j] != cert.balmer[i, j]]
    return {"reversed_ok": cert.reversed_ok, "points": len(cert.points), "mismatches": bad}


def cmd_acceptance(args):
    outcomes = []
    for c in acc.select(args.filter):
        o = acc.run_criterion(c)
        outcomes.append(o)
        if args.format == "table":
            print(o.line(), flush=True)
    args._exit = 0 if all(o.passed for o in outcomes) else 1
    if args.format == "table":
        args._printed = True
        return None
    return {"criteria": [o.to_json() for o in outcomes], "passed": all(o.passed for o in outcomes)}


# ---------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--prime", "--p", type=int, default=2)
    p.add_argument("--group", default="0;2", help='"r;d1,d2,..." (rank; invariant factors) or "T"')
    p.add_argument("--max-height", type=int, default=5)
    p.add_argument("--trunc", type=int, default=None, help="truncation degree (default 8)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--no-cache", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="invprimes", description=__doc__.splitlines()[0],
                                     allow_abbrev=False)
    areas = parser.add_subparsers(dest="area", required=True)

    def add(sub, name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_, allow_abbrev=False)
        p.set_defaults(fn=fn)
        return p

    g = areas.add_parser("group", help="subgroup lattices").add_subparsers(dest="cmd", required=True)
    add(g, "subgroups", cmd_group_subgroups, "list subgroups").add_argument("--window", type=int, default=12)
    add(g, "quotient", cmd_group_quotient, "quotient by a subgroup").add_argument("--sub", required=True)

    s = areas.add_parser("spec", help="points, inclusions, closed sets").add_subparsers(dest="cmd", required=True)
    p = add(s, "includes", cmd_spec_includes, "test I_P <= I_Q")
    p.add_argument("--from", dest="src", required=True, help='point "SUBGROUP:HEIGHT"')
    p.add_argument("--to", dest="dst", required=True)
    add(s, "closure", cmd_spec_closure, "closure of points").add_argument("--points", required=True)
    add(s, "admissible", cmd_spec_admissible, "check a function").add_argument("--input")
    add(s, "order", cmd_spec_order, "the inclusion order")

    w = areas.add_parser("witness", help="realize height functions").add_subparsers(dest="cmd", required=True)
    add(w, "realize", cmd_witness_realize, "elements with a given height").add_argument("--input")

    f = areas.add_parser("fgl", help="formal group laws").add_subparsers(dest="cmd", required=True)
    laws = ("p-typical", "multiplicative", "additive", "honda")
    p = add(f, "pseries", cmd_fgl_pseries, "[m]-series of a law")
    p.add_argument("--law", choices=laws, default="p-typical")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int, help="series index (default: the prime)")
    p.add_argument("--mod-I", type=int, help="reduce modulo I_n")
    p.add_argument("--check", action="store_true", help="also check the axioms")
    p = add(f, "psi", cmd_fgl_psi, "psi_{p^k} mod I_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--top", type=int, help="invert v_top (default n + 1)")
    p = add(f, "blueshift", cmd_fgl_blueshift, "height of geometric fixed points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    add(f, "gm-c2", cmd_fgl_gm_c2, "multiplicative law with C2 level").add_argument(
        "--sign", type=int, choices=(1, -1), default=1)
    p = add(f, "height", cmd_fgl_height, "height over a field")
    p.add_argument("--law", choices=laws[1:], default="multiplicative")
    p.add_argument("--n", type=int)

    u = areas.add_parser("support", help="supports of finite spectra").add_subparsers(dest="cmd", required=True)
    add(u, "of", cmd_support_of, "support of a type function").add_argument("--input")
    p = add(u, "smash", cmd_support_smash, "smash (or --wedge) of two")
    p.add_argument("--input")
    p.add_argument("--input2")
    p.add_argument("--wedge", action="store_true")
    p = add(u, "phi", cmd_support_phi, "geometric fixed points")
    p.add_argument("--input")
    p.add_argument("--sub", required=True)
    add(u, "random", cmd_support_random, "seeded random type functions").add_argument(
        "--count", type=int, default=10)
    add(u, "compare", cmd_support_compare, "compare with the Balmer order")

    p = areas.add_parser("acceptance", parents=[common], help="run the acceptance suite", allow_abbrev=False)
    p.add_argument("filter", nargs="?", default=None)
    p.set_defaults(fn=cmd_acceptance)
    return parser


def _table(out) -> str:
    if isinstance(out, list):
        return "\n".join(_table(x) for x in out)
    if isinstance(out, dict):
        return "\t".join(f"{k}={json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}"
                         for k, v in out.items())
    return str(out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.fn(args)
    except (DomainError, ValueError, KeyError, NotDivisible, ArithmeticError) as err:
        msg = err.args[0] if isinstance(err, KeyError) and err.args else str(err)
        json.dump({"error": type(err).__name__, "message": str(msg)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    if not getattr(args, "_printed", False):
        if args.format == "table":
            print(_table(out))
        else:
            print(json.dumps(out, indent=2, sort_keys=True, default=str))
    return getattr(args, "_exit", 0)


if __name__ == "__main__":
    sys.exit(main())
