"""Command-line front end.

One verb per computation; inputs come from a sectioned text document
(see inputdoc).  Exit codes: 0 success, 1 invalid input or a failed
verification, 2 a computation limit was hit.
"""
from __future__ import annotations

import argparse
import os
import sys
import time

from .catalog import DEFAULT_P
from .cmapprox import fid_hull, fundamental_module, mcm_approx_cm
from .deform import (
    ext_vanishing_report,
    lift_module,
    lifting_difference,
    ob_regular_quotient,
    regular_quotient_extension,
    ring_extension,
    splits_pibar,
    tangent_sigma,
    torsor_act,
    trivial_family,
    coefficient_extension,
    obstruction,
    omap_check,
    _ring_space,
)
from .errors import ComputationLimit, ValidationError
from .field import Field
from .homalg import ExtClass, canonical_module, ext, ext_window
from .inputdoc import Environment, parse_input
from .mf import eisenbud_resolution, knorrer, mf_stats
from .modules import PModMap, PresentedModule, generic_rank
from .resolution import BettiTable, certify_resolution, depth, is_mcm, resolve
from .report import Report

LIMIT_DEFAULTS = {"steps": 6, "window": 12, "brute_dim": 8}


def _field_from_spec(spec: str) -> Field:
    s = spec.strip().upper()
    if s in ("Q", "QQ", "0"):
        return Field.rationals()
    try:
        p = int(s)
    except ValueError:
        raise ValidationError(f"bad field spec {spec!r} (a prime, or QQ)")
    return Field.gf(p)


def _field_desc(f: Field) -> str:
    return "QQ" if f.p is None else f"GF({f.p})"


def _resolve_overrides(args):
    fspec = args.field or os.environ.get("CMKIT_FIELD")
    ospec = args.order or os.environ.get("CMKIT_ORDER")
    field = _field_from_spec(fspec) if fspec else None
    return field, ospec


def _env(args) -> Environment:
    if not args.input:
        raise ValidationError("this command needs --input FILE")
    doc = parse_input(args.input)
    field, ospec = _resolve_overrides(args)
    return Environment(doc, field=field, order=ospec)


def _new_report(args, env: Environment | None) -> Report:
    if env is not None:
        fdesc = _field_desc(env.field)
        odesc = env.order.kind
    else:
        field, ospec = _resolve_overrides(args)
        fdesc = _field_desc(field) if field else f"GF({DEFAULT_P})"
        odesc = ospec or "grevlex"
    return Report(args.command_echo, fdesc, odesc)


def _poly_rows(rows) -> list:
    return [[str(p) for p in row] for row in rows]


def _vec_rows(vecs) -> list:
    return [[str(p) for p in v.entries()] for v in vecs]


def _module_section(sec, m: PresentedModule):
    sec.add("generators", list(m.gen_degrees))
    sec.add("relations", _vec_rows(m.relations))


def _flat_certs(sec, certs: dict):
    for key, v in sorted(certs.items()):
        if isinstance(v, dict):
            if "exact" in v:
                sec.add(key, {"exact": v["exact"], "window": v.get("window")})
            else:
                sec.add(key, {kk: vv for kk, vv in v.items() if not isinstance(vv, list)})
        else:
            sec.add(key, v)


# -- verb handlers ----------------------------------------------------------------


def cmd_gb(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    if args.module:
        m = env.module(args.module)
        sec = rep.section(f"groebner basis of the relations of {args.module}")
        gb = m.rel_gb().gb.reduced()
        sec.add("vectors", _vec_rows(gb))
    else:
        r = env.ring(args.ring)
        sec = rep.section(f"reduced groebner basis of the ideal of {args.ring}")
        sec.add("generators", [str(g) for g in r.ideal_groebner()])
    return rep


def cmd_resolve(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    m = env.module(args.module)
    res = resolve(m, args.steps)
    sec = rep.section(f"minimal free resolution of {args.module}")
    sec.add("steps", res.length)
    bt = BettiTable.of(res)
    sec.add("betti totals", [bt.total(i) for i in range(res.length + 1)])
    sec.block("betti table", bt.render().splitlines())
    cert = certify_resolution(res, extra=args.window - LIMIT_DEFAULTS["window"])
    rep.section("certificate").add("window", cert["window"]).add("exact", cert["exact"])
    return rep


def cmd_betti(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    m = env.module(args.module)
    bt = BettiTable.of(resolve(m, args.steps))
    sec = rep.section(f"graded betti numbers of {args.module}")
    sec.add("totals", [bt.total(i) for i in range(bt.max_step() + 1)])
    sec.block("table", bt.render().splitlines())
    return rep


def cmd_ext(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    m = env.module(getattr(args, "from"))
    n = env.module(args.to)
    sp = ext(args.i, m, n)
    sec = rep.section(f"Ext^{args.i}({getattr(args, 'from')}, {args.to})")
    sec.add("finite", sp.finite)
    if sp.finite:
        sec.add("dim", sp.total_dim)
        sec.add("dims by degree", dict(sorted(sp.dims_by_degree.items())))
    else:
        degs = sp.presentation.gen_degrees
        lo = min(degs) if degs else 0
        sec.add("dims on a window", dict(sorted(
            sp.presentation.hilbert_function(lo, lo + args.window).items())))
    return rep


def cmd_depth(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    m = env.module(args.module)
    sec = rep.section(f"depth of {args.module}")
    sec.add("depth", depth(m))
    sec.add("dim", m.krull_dim())
    sec.add("maximal Cohen-Macaulay", is_mcm(m))
    return rep


def cmd_dim(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    if args.module:
        m = env.module(args.module)
        rep.section(f"dimension of {args.module}").add("dim", m.krull_dim())
    else:
        r = env.ring(args.ring)
        rep.section(f"dimension of {args.ring}").add("dim", r.dim())
    return rep


def cmd_canonical(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    r = env.ring(args.ring)
    w = canonical_module(r)
    sec = rep.section(f"canonical module of {args.ring}")
    _module_section(sec, w)
    sec.add("type", w.mu())
    return rep


def _approx_triple(env, args):
    m = env.module(args.module)
    c = m.ring.dim() - m.krull_dim()
    return mcm_approx_cm(m, c, canonical_module(m.ring)), c


def cmd_mcm_approx(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    trip, c = _approx_triple(env, args)
    rep.section("input").add("module", args.module).add("codimension", c)
    sec = rep.section("maximal Cohen-Macaulay part M")
    _module_section(sec, trip.m)
    sec.add("mu", trip.m.mu())
    sec2 = rep.section("finite-injective-dimension kernel L")
    lmin, _, _ = trip.l.minimalize()
    _module_section(sec2, lmin)
    rep.section("flags").add("triple minimal", trip.minimal)
    _flat_certs(rep.section("certificates"), trip.certificates)
    return rep


def cmd_fid_hull(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    trip, c = _approx_triple(env, args)
    hull = fid_hull(trip)
    rep.section("input").add("module", args.module).add("codimension", c)
    sec = rep.section("finite-injective-dimension hull L'")
    lp, _, _ = hull.l_prime.minimalize()
    _module_section(sec, lp)
    sec2 = rep.section("cokernel M'")
    mp, _, _ = hull.m_prime.minimalize()
    _module_section(sec2, mp)
    _flat_certs(rep.section("certificates"), hull.certificates)
    return rep


def cmd_fundamental(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    r = env.ring(args.ring)
    e_mod, _iota, _pi, _mm, cls = fundamental_module(r)
    sec = rep.section(f"fundamental module of {args.ring}")
    _module_section(sec, e_mod)
    sec.add("mu", e_mod.mu())
    sec.add("rank", generic_rank(e_mod))
    sec.add("extension class", list(cls.coords))
    return rep


def cmd_knorrer(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    mf = env.mf(args.mf)
    kn = knorrer(mf)
    sec = rep.section(f"quadratic suspension of {args.mf}")
    sec.add("f", str(kn.f))
    sec.add("variables", list(kn.q.names))
    sec.add("degrees", list(kn.q.degrees))
    sec.add("phi", _poly_rows(kn.phi))
    sec.add("psi", _poly_rows(kn.psi))
    sec.add("row degrees", list(kn.degs0))
    sec.add("column degrees", list(kn.degs1))
    stats = mf_stats(kn)
    rep.section("statistics").add("size", stats["n"]).add(
        "multiplicity", stats["e"]).add("rank", stats["rank"])
    return rep


def cmd_eisenbud(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    mf = env.mf(args.mf)
    res = eisenbud_resolution(mf, args.steps, over_base=args.over_base)
    where = "B = Q/(f)" if args.over_base else "A = Q[t]/(f + t^2)"
    sec = rep.section(f"periodic resolution from {args.mf} over {where}")
    bt = BettiTable.of(res)
    sec.add("betti totals", [bt.total(i) for i in range(res.length + 1)])
    sec.block("betti table", bt.render().splitlines())
    cert = certify_resolution(res, extra=args.window - LIMIT_DEFAULTS["window"])
    rep.section("certificate").add("window", cert["window"]).add("exact", cert["exact"])
    return rep


def _lifting_problem(env, args):
    """The two input forms: an Artin small extension, or A with J generators."""
    if args.extension and args.ring:
        raise ValidationError("give either --extension or --ring with --j, not both")
    n = env.module(args.module)
    if args.extension:
        se = env.small_extension(args.extension)
        pr = ring_extension(se.upstairs.ring, se.downstairs.ring)
        return pr, n, None
    if args.ring:
        if not args.j:
            raise ValidationError("--ring needs at least one --j generator")
        a = env.ring(args.ring)
        return None, n, (a, list(args.j))
    raise ValidationError("give --extension NAME, or --ring NAME with --j")


def cmd_obstruction(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    pr, n, quot = _lifting_problem(env, args)
    if quot is not None:
        a, jgens = quot
        cls = ob_regular_quotient(a, jgens, n)
        rep.section("input").add("ring", args.ring).add("J", jgens).add(
            "module", args.module)
    else:
        cls = obstruction(pr, n)
        rep.section("input").add("extension", args.extension).add(
            "module", args.module)
    sec = rep.section("obstruction class")
    sec.add("vanishes", cls.is_zero)
    sec.add("kernel basis", list(cls.labels))
    sec.add("kernel degrees", list(cls.degrees))
    sec.add("coordinates", [list(co) for co in cls.coords()])
    return rep


def cmd_lift(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    pr, n, quot = _lifting_problem(env, args)
    if quot is not None:
        a, jgens = quot
        pr = regular_quotient_extension(a, jgens)
        rep.section("input").add("ring", args.ring).add("J", jgens).add(
            "module", args.module)
    else:
        rep.section("input").add("extension", args.extension).add(
            "module", args.module)
    res = lift_module(pr, n)
    sec = rep.section("lifting")
    sec.add("status", res.status)
    if res.status == "lifted":
        sec.add("lifted relations", _vec_rows(res.lifting.module.relations))
        _flat_certs(rep.section("certificates"), res.lifting.certificates)
    else:
        ob = res.obstruction
        sec.add("obstruction coordinates", [list(co) for co in ob.coords()])
        sec.add("kernel basis", list(ob.labels))
    return rep


def cmd_torsor(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    se = env.small_extension(args.extension)
    pr = ring_extension(se.upstairs.ring, se.downstairs.ring)
    n = env.module(args.module)
    res = lift_module(pr, n)
    if res.status != "lifted":
        raise ValidationError("the module is obstructed; there is no lifting to act on")
    sp = _ring_space(pr, n, 1)
    rep.section("input").add("extension", args.extension).add(
        "module", args.module).add("tangent dim", sp.total_dim)
    raw = [c.strip() for c in args.coords.split(",")] if args.coords else []
    if len(raw) != sp.total_dim:
        raise ValidationError(
            f"--coords needs {sp.total_dim} comma-separated integers, got {len(raw)}")
    f = pr.field
    xi = ExtClass(sp, tuple(f.coerce(int(c)) for c in raw))
    acted = torsor_act(res.lifting, xi)
    sec = rep.section("action")
    sec.add("base relations", _vec_rows(res.lifting.module.relations))
    sec.add("acted relations", _vec_rows(acted.module.relations))
    diff = lifting_difference(acted, res.lifting)
    sec.add("difference coordinates", list(diff.ring_class.coords))
    sec.add("difference equals the class", diff.ring_class.coords == xi.coords)
    return rep


def cmd_splits(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    a = env.ring(args.ring)
    n = env.module(args.module)
    if not args.j:
        raise ValidationError("--ring needs at least one --j generator")
    cls = ob_regular_quotient(a, list(args.j), n)
    ok, _nu, sp_rep = splits_pibar(cls.report["triple"],
                                   [a.parse(s) for s in args.j], n)
    rep.section("input").add("ring", args.ring).add("J", list(args.j)).add(
        "module", args.module)
    sec = rep.section("splitting of the deformed approximation")
    sec.add("pibar splits", ok)
    sec.add("obstruction vanishes", cls.is_zero)
    sec.add("agreement", ok == cls.is_zero)
    for key, v in sorted(sp_rep.items()):
        sec.add(key, v)
    return rep


def cmd_tangent_sigma(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    a = env.ring(args.ring)
    n = env.module(args.module)
    if not args.j:
        raise ValidationError("--ring needs at least one --j generator")
    sig = tangent_sigma(a, list(args.j), n)
    rep.section("input").add("ring", args.ring).add("J", list(args.j)).add(
        "module", args.module)
    sec = rep.section("tangent comparison map sigma")
    sec.add("source dim", sig.source_dim)
    sec.add("target dim", sig.target_dim)
    sec.add("rank", sig.rank)
    sec.add("injective", sig.rank == sig.source_dim)
    sec.add("cokernel dim", sig.coker_dim)
    sec.add("cokernel matches Ext^2 of the fiber", sig.coker_matches_ext2)
    return rep


def _parse_map_entries(ring, text: str):
    rows = []
    for row in text.split(";"):
        rows.append([ring.parse(s.strip()) for s in row.split(",")])
    return rows


def cmd_omap_check(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    g = env.ring(args.geometry)
    se = env.small_extension(args.extension)
    pr = coefficient_extension(g, se)
    m_inner = env.module(getattr(args, "from"))
    m_outer = env.module(args.to)
    fam_inner = trivial_family(g, se.downstairs, m_inner)
    fam_outer = trivial_family(g, se.downstairs, m_outer)
    t = fam_inner.ring
    entries = _parse_map_entries(t, args.map)
    fmap = PModMap(fam_inner.module, fam_outer.module, entries)
    out = omap_check(pr, fam_inner, fam_outer, fmap, kind=args.kind)
    rep.section("input").add("geometry", args.geometry).add(
        "extension", args.extension).add("from", getattr(args, "from")).add(
        "to", args.to).add("kind", args.kind)
    sec = rep.section("obstruction functoriality")
    sec.add("lhs", [list(co) for co in out["lhs"]])
    sec.add("rhs", [list(co) for co in out["rhs"]])
    sec.add("equal", out["equal"])
    sec.add("third term flat", out["third term flat"])
    return rep


def cmd_hypotheses(args) -> Report:
    env = _env(args)
    rep = _new_report(args, env)
    m = env.module(args.module)
    trip, c = _approx_triple(env, args)
    hull = fid_hull(trip)
    out = ext_vanishing_report(m.ring, m, trip, hull)
    rep.section("input").add("module", args.module).add("codimension", c)
    sec = rep.section("vanishing hypotheses")
    for key, v in out.items():
        if isinstance(v, dict):
            sec.add(key, {kk: vv for kk, vv in v.items() if kk != "by degree"})
        else:
            sec.add(key, v)
    return rep


def cmd_verify(args) -> tuple[Report, bool]:
    from .verify import SUITES
    field, _ = _resolve_overrides(args)
    rep = _new_report(args, None)
    suite = SUITES.get(args.suite)
    if suite is None:
        raise ValidationError(f"unknown suite {args.suite!r} "
                              f"(veronese, knorrer, obstruction, omap)")
    ok, lines = suite(m=args.m, case=args.case, field=field)
    sec = rep.section(f"verification suite: {args.suite}")
    sec.add("identities", len(lines))
    sec.add("all hold", ok)
    sec.block("evaluations", lines)
    return rep, ok


HANDLERS = {
    "gb": cmd_gb,
    "resolve": cmd_resolve,
    "betti": cmd_betti,
    "ext": cmd_ext,
    "depth": cmd_depth,
    "dim": cmd_dim,
    "canonical": cmd_canonical,
    "mcm-approx": cmd_mcm_approx,
    "fid-hull": cmd_fid_hull,
    "fundamental": cmd_fundamental,
    "knorrer": cmd_knorrer,
    "eisenbud": cmd_eisenbud,
    "obstruction": cmd_obstruction,
    "lift": cmd_lift,
    "torsor": cmd_torsor,
    "splits": cmd_splits,
    "tangent-sigma": cmd_tangent_sigma,
    "omap-check": cmd_omap_check,
    "hypotheses": cmd_hypotheses,
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="sectioned input file")
    common.add_argument("--field", help="coefficient field: a prime, or QQ")
    common.add_argument("--order", help="monomial order: grevlex, lex, weighted:...")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--timing", action="store_true",
                        help="append wall time (breaks byte-determinism)")
    common.add_argument("--steps", type=int, default=LIMIT_DEFAULTS["steps"],
                        help="resolution steps (default 6)")
    common.add_argument("--window", type=int, default=LIMIT_DEFAULTS["window"],
                        help="degree window for certificates (default 12)")

    p = argparse.ArgumentParser(prog="cmkit",
                                description="exact graded commutative algebra")
    sub = p.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("gb", parents=[common], help="reduced Groebner basis")
    sp.add_argument("--ring")
    sp.add_argument("--module")

    for verb in ("resolve", "betti"):
        sp = sub.add_parser(verb, parents=[common], help=f"{verb} a module")
        sp.add_argument("--module", required=True)

    sp = sub.add_parser("ext", parents=[common], help="Ext between modules")
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--from", required=True)
    sp.add_argument("--to", required=True)

    sp = sub.add_parser("depth", parents=[common], help="depth and MCM test")
    sp.add_argument("--module", required=True)

    sp = sub.add_parser("dim", parents=[common], help="Krull dimension")
    sp.add_argument("--ring")
    sp.add_argument("--module")

    sp = sub.add_parser("canonical", parents=[common], help="canonical module")
    sp.add_argument("--ring", required=True)

    for verb in ("mcm-approx", "fid-hull", "hypotheses"):
        sp = sub.add_parser(verb, parents=[common])
        sp.add_argument("--module", required=True)

    sp = sub.add_parser("fundamental", parents=[common], help="fundamental module")
    sp.add_argument("--ring", required=True)

    for verb in ("knorrer", "eisenbud"):
        sp = sub.add_parser(verb, parents=[common])
        sp.add_argument("--mf", required=True)
        if verb == "eisenbud":
            sp.add_argument("--over-base", action="store_true",
                            help="resolve over B = Q/(f) instead of the suspension")

    for verb in ("obstruction", "lift"):
        sp = sub.add_parser(verb, parents=[common])
        sp.add_argument("--extension", help="a [small-extension] block")
        sp.add_argument("--ring", help="ambient ring A, with --j generators of J")
        sp.add_argument("--j", action="append", help="a generator of J (repeatable)")
        sp.add_argument("--module", required=True)

    sp = sub.add_parser("torsor", parents=[common], help="act on a lifting")
    sp.add_argument("--extension", required=True)
    sp.add_argument("--module", required=True)
    sp.add_argument("--coords", required=True,
                    help="comma-separated coordinates of the tangent class")

    for verb in ("splits", "tangent-sigma"):
        sp = sub.add_parser(verb, parents=[common])
        sp.add_argument("--ring", required=True)
        sp.add_argument("--j", action="append", required=True)
        sp.add_argument("--module", required=True)

    sp = sub.add_parser("omap-check", parents=[common],
                        help="functoriality of the obstruction along a map")
    sp.add_argument("--geometry", required=True, help="the base ring block")
    sp.add_argument("--extension", required=True)
    sp.add_argument("--from", required=True)
    sp.add_argument("--to", required=True)
    sp.add_argument("--map", required=True,
                    help="entries, rows by ';', entries by ',' (rows = target gens)")
    sp.add_argument("--kind", choices=("quot", "sub"), required=True)

    sp = sub.add_parser("verify", parents=[common], help="run an identity suite")
    sp.add_argument("suite", choices=("veronese", "knorrer", "obstruction", "omap"))
    sp.add_argument("--m", type=int, default=2, help="veronese: the cone A(m)")
    sp.add_argument("--case", choices=("node", "cusp"), default="node",
                    help="knorrer: which seed")

    return p


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    args.command_echo = "cmkit " + " ".join(argv)
    t0 = time.monotonic()
    try:
        if args.verb == "verify":
            rep, ok = cmd_verify(args)
        else:
            rep = HANDLERS[args.verb](args)
            ok = True
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ComputationLimit as e:
        print(f"limit: {e}", file=sys.stderr)
        return 2
    if args.timing:
        rep.timing_ms = int((time.monotonic() - t0) * 1000)
    sys.stdout.write(rep.render_json() if args.json else rep.render_text())
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
