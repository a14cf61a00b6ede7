"""Command-line entry point: ``k3mono <command> <action> [options]``.

Output is JSON (sorted keys, so a fixed configuration gives identical
bytes) or a plain table with ``--format table``.  Exit status is 0 on
success, 1 when a check fails and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import checks, groups, lattice, modular, moduli, monodromy, pencil

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    action: str | None
    tol: float
    seed: int
    bound: int
    format: str


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, complex):
        if x != x or abs(x) == float("inf"):
            return "inf"
        return [x.real, x.imag]
    if isinstance(x, float):
        return x
    if hasattr(x, "to_json"):
        return _jsonable(x.to_json())
    return str(x)


def parse_number(text: str):
    """Exact Fraction when possible (e.g. "1/2", "3"), otherwise a Python complex."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise InputError(f"not a number: {text!r}") from None


def _emit(data: Any, cfg: RunConfig, out) -> None:
    data = _jsonable(data)
    if cfg.format == "json":
        out.write(json.dumps(data, sort_keys=True, ensure_ascii=False) + "\n")
        return
    rows = data if isinstance(data, list) else [data]
    for row in rows:
        if isinstance(row, dict):
            width = max((len(k) for k in row), default=0)
            for k in sorted(row):
                v = row[k]
                out.write(f"{k:<{width}}  {v if isinstance(v, str) else json.dumps(v, ensure_ascii=False)}\n")
            if len(rows) > 1:
                out.write("\n")
        else:
            out.write(f"{row}\n")


# --------------------------------------------------------------------------
# command handlers; each returns (payload, passed)


def cmd_lattice(args, cfg):
    if args.lattice:
        lat = lattice.load_lattice(args.lattice)
    elif args.n is not None:
        lat = lattice.m_n_perp_twisted(args.n) if args.twisted else lattice.m_n_perp(args.n)
    else:
        raise InputError("give --lattice FILE or --n N")
    form = lattice.discriminant_form(lat)
    payload = {
        "label": lat.label,
        "rank": lat.rank,
        "det": lat.det,
        "signature": list(lat.signature),
        "even": lat.is_even,
        "invariant_factors": list(form.invariant_factors),
        "order": form.order,
        "q_generators": list(form.quadratic) if form.quadratic is not None else None,
        "b_generators": [list(r) for r in form.bilinear],
    }
    return payload, True


def cmd_groups(args, cfg):
    if args.action == "identify":
        if args.n not in groups.MNG_EXPECTED:
            raise InputError("--n must be in 1..4")
        gid = groups.identify(groups.mng_group(args.n))
        order, name = groups.MNG_EXPECTED[args.n]
        return gid.to_json(), gid.order == order and gid.name == groups.canonical_name(name)
    lat = lattice.load_lattice(args.lattice)
    form = lattice.discriminant_form(lat)
    aut = groups.full_aut(form, preserve=args.preserve)
    return groups.identify(aut).to_json(), True


def cmd_modular(args, cfg):
    if args.action == "data":
        try:
            g = modular.CongruenceSubgroup.parse(args.group)
        except (KeyError, ValueError) as exc:
            raise InputError(str(exc)) from None
        return modular.curve_data(g).to_json(), True
    if args.action == "verify-rn":
        rep = modular.verify_modular_lemma(args.n, cfg.bound)
        return rep.to_json(), rep.ok
    fx = modular.cover_fixtures(args.n)
    return fx.to_json(), fx.composite == fx.composite_fixture


def cmd_k3(args, cfg):
    if args.action in ("sigma-pi", "roots"):
        p = moduli.MPoint(parse_number(args.a), parse_number(args.b), parse_number(args.d))
        if args.action == "sigma-pi":
            s, pi, js = moduli.sigma_pi(p)
            return {"sigma": s, "pi": pi, "j": list(js), "degenerate": moduli.is_degenerate(p)}, True
        r = moduli.alternate_fibre_roots(p)
        return {
            "roots_minus": list(r.roots_minus),
            "roots_plus": list(r.roots_plus),
            "degenerate": r.degenerate,
            "residual": moduli.residuals(p, r),
        }, True
    if args.action == "ramify":
        fi = moduli.FunctionalInvariant(args.i, args.j, A=parse_number(args.A))
        return moduli.ramification_profile(fi).to_json(), True
    rows = moduli.catalog(args.file)
    if not args.check_thin:
        return [
            {"lattice": r.lattice, "threefold": r.threefold, "toric": r.toric, "i": r.i, "j": r.j,
             "classification": r.classification}
            for r in rows
        ], True
    res = moduli.check_thin(rows, toric_only=args.toric_only)
    payload = [
        {"lattice": c.row.lattice, "threefold": c.row.threefold, "i": c.row.i, "j": c.row.j,
         "table": c.row.classification, "predicted": c.predicted, "agrees": c.agrees}
        for c in res
    ]
    return payload, all(c.agrees for c in res)


def cmd_monodromy(args, cfg):
    loops = monodromy.load_loops(args.loops)
    rep = monodromy.fundamental_group_run(loops, cfg.tol)
    return rep.to_json(), True


def cmd_pencil(args, cfg):
    perms = pencil.load_perms(args.perm)
    reports = [dict(pencil.check_monodromy_constraints(p).to_json(), perm=pencil.format_cycles(p)) for p in perms]
    return reports, all(r["accepted"] for r in reports)


def cmd_paper_check(args, cfg):
    sections = args.section or None
    try:
        results = checks.run_checks(sections, checks.CheckConfig(seed=cfg.seed, tol=cfg.tol, bound=cfg.bound))
    except KeyError as exc:
        raise InputError(str(exc)) from None
    ok = all(r.passed for r in results)
    if cfg.format == "table":
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.section:<14} {r.label:<48} {r.detail}".rstrip() for r in results]
        return lines, ok
    return [r.to_json() for r in results], ok


HANDLERS = {
    "lattice": cmd_lattice,
    "groups": cmd_groups,
    "modular": cmd_modular,
    "k3": cmd_k3,
    "monodromy": cmd_monodromy,
    "pencil": cmd_pencil,
    "paper-check": cmd_paper_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="numerical tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomised checks")
    common.add_argument("--bound", type=int, default=argparse.SUPPRESS, help="entry bound for the R_n lemma box")
    common.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="k3mono", parents=[common], description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    lat = sub.add_parser("lattice", parents=[common], help="lattice invariants and discriminant form")
    lat.add_argument("action", choices=("disc",))
    lat.add_argument("--lattice", help="JSON file with a 'gram' matrix")
    lat.add_argument("--n", type=int, help="use H + <-2n> instead of a file")
    lat.add_argument("--twisted", action="store_true", help="with --n: use H(2) + <-4n>")

    grp = sub.add_parser("groups", parents=[common], help="monodromy groups of M_n and automorphism groups")
    gsub = grp.add_subparsers(dest="action", required=True)
    g_id = gsub.add_parser("identify", parents=[common])
    g_id.add_argument("--n", type=int, required=True)
    g_aut = gsub.add_parser("full-aut", parents=[common])
    g_aut.add_argument("--lattice", required=True)
    g_aut.add_argument("--preserve", choices=("quadratic", "bilinear"), default="quadratic")

    mod = sub.add_parser("modular", parents=[common], help="congruence subgroups, R_n lemma, cover data")
    msub = mod.add_subparsers(dest="action", required=True)
    m_data = msub.add_parser("data", parents=[common])
    m_data.add_argument("--group", required=True, help="e.g. gamma0:8, gamma:2, gamma2cap0:8, cm:4")
    for name in ("verify-rn", "covers"):
        m = msub.add_parser(name, parents=[common])
        m.add_argument("--n", type=int, required=True, choices=(1, 2, 3, 4))

    k3 = sub.add_parser("k3", parents=[common], help="moduli points, roots, functional invariants")
    ksub = k3.add_subparsers(dest="action", required=True)
    for name in ("sigma-pi", "roots"):
        k = ksub.add_parser(name, parents=[common])
        k.add_argument("--a", required=True)
        k.add_argument("--b", required=True)
        k.add_argument("--d", default="1")
    k_ram = ksub.add_parser("ramify", parents=[common])
    k_ram.add_argument("--i", type=int, required=True)
    k_ram.add_argument("--j", type=int, required=True)
    k_ram.add_argument("--A", default="1")
    k_cat = ksub.add_parser("catalog", parents=[common])
    k_cat.add_argument("--file", help="catalog JSON-lines file (default: packaged table)")
    k_cat.add_argument("--check-thin", action="store_true")
    k_cat.add_argument("--toric-only", action="store_true")

    mon = sub.add_parser("monodromy", parents=[common], help="track roots around loops")
    mon_sub = mon.add_subparsers(dest="action", required=True)
    tr = mon_sub.add_parser("track", parents=[common])
    tr.add_argument("--loops", required=True)

    pen = sub.add_parser("pencil", parents=[common], help="check permutations against the pencil constraints")
    psub = pen.add_subparsers(dest="action", required=True)
    pc = psub.add_parser("check", parents=[common])
    pc.add_argument("--perm", required=True, help="JSON file with cycle-notation permutations")

    chk = sub.add_parser("paper-check", parents=[common], help="run the reproducibility checks")
    chk.add_argument("--section", action="append", choices=list(checks.REGISTRY))
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(
        command=args.command,
        action=getattr(args, "action", None),
        tol=getattr(args, "tol", monodromy.DEFAULT_TOL),
        seed=getattr(args, "seed", checks.CheckConfig.seed),
        bound=getattr(args, "bound", checks.CheckConfig.bound),
        format=getattr(args, "format", "table" if args.command == "paper-check" else "json"),
    )
    try:
        payload, passed = HANDLERS[args.command](args, cfg)
    except (InputError, ValueError, KeyError, OSError, json.JSONDecodeError, ZeroDivisionError) as exc:
        err.write(f"k3mono: error: {exc}\n")
        return EXIT_INPUT
    except monodromy.TrackingError as exc:
        err.write(f"k3mono: tracking failed: {exc}\n")
        return EXIT_FAIL
    _emit(payload, cfg, out)
    return EXIT_OK if passed else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
