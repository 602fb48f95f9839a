"""Command-line front end.

Exit status: 0 on success (a NOT_SIMPLE verdict is a success), 2 when the
input is well formed but mathematically unsuitable, 1 on usage or parse
errors.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from . import catalog
from .classifier import NOT_SIMPLE, GermClass, UnsupportedError, classify
from .jet_algebra import GermSyntaxError, parse_poly
from .local_algebra import INFINITE, IndeterminateError, codimension, determinacy_bound
from .unfoldings import LAGRANGIAN, LEGENDRIAN, GeneratingFamily, build_versal, stability_verdict, versality_report

__all__ = ["main", "run", "build_parser"]


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _add_common(p, germ=True, family=False, mode_choices=("R", "Rplus", "K"), default_mode=None):
    if germ:
        p.add_argument("expr", nargs="?" if family else None, help="germ or family expression")
    p.add_argument("--r", type=int, help="number of corner variables x1..xr")
    p.add_argument("--k", type=int, help="number of internal variables y1..yk")
    p.add_argument("--mode", choices=mode_choices, default=default_mode)
    p.add_argument("--json", action="store_true", help="JSON output (the default)")
    p.add_argument("--text", action="store_true", help="human-readable output")
    if family:
        p.add_argument("--n", type=int, help="number of parameters q1..qn")
        p.add_argument("--legendrian", action="store_true", help="family carries the contact parameter z")
        p.add_argument("--catalog", metavar="KEY", help="use a catalog family instead of an expression")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="reticular", description="Germs on an r-corner: classification, unfoldings, caustics.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("classify", help="recognize the simple class of a germ")
    _add_common(p, default_mode="R")
    p = sub.add_parser("codim", help="codimension and quotient basis")
    _add_common(p, default_mode="Rplus")
    p.add_argument("--cap", type=int, default=12)
    p = sub.add_parser("determinacy", help="sufficient determinacy degree")
    _add_common(p, default_mode="R")
    p.add_argument("--l-max", type=int, default=12)
    p = sub.add_parser("unfold", help="miniversal unfolding from the quotient basis")
    _add_common(p, default_mode="Rplus")
    p.add_argument("--legendrian", action="store_true")
    for name, helptext in (("versal", "infinitesimal versality of a family"),
                           ("stability", "stability verdict for the map of a family")):
        p = sub.add_parser(name, help=helptext)
        _add_common(p, family=True, mode_choices=("Rplus", "K"))
    for name in ("caustic", "wavefront"):
        p = sub.add_parser(name, help=f"{name} point cloud of a family")
        _add_common(p, family=True, mode_choices=("Rplus", "K"))
        p.add_argument("--range", default="-1:1", help="a:b[,a:b...] box in base coordinates")
        p.add_argument("--res", type=int, default=100)
        p.add_argument("--out", help="output file")
        p.add_argument("--format", choices=("csv", "obj", "ply"))
        p.add_argument("--tol-eq", type=float)
        p.add_argument("--seed-box", help="a:b box for corner/internal seeds")
        p.add_argument("--config", help="key=value solver settings file")
    p = sub.add_parser("catalog", help="list or show normal forms")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("key", nargs="?")
    p.add_argument("--r", type=int, choices=(0, 1))
    p.add_argument("--n", type=int)
    p.add_argument("--legendrian", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--text", action="store_true")
    return ap


# -- helpers ----------------------------------------------------------------------
def _max_index(text: str, letter: str) -> int:
    found = [int(m) for m in re.findall(rf"\b{letter}(\d+)\b", text)]
    return max(found, default=0)


def _germ(args):
    r = args.r if args.r is not None else _max_index(args.expr, "x")
    k = args.k if args.k is not None else _max_index(args.expr, "y")
    if r < 0 or k < 0:
        raise UsageError("--r and --k must be nonnegative")
    return parse_poly(args.expr, r, k)


def _family(args) -> GeneratingFamily:
    if args.catalog:
        if args.expr:
            raise UsageError("give either an expression or --catalog, not both")
        try:
            return catalog.get(args.catalog, LEGENDRIAN if args.legendrian else LAGRANGIAN).family
        except KeyError as e:
            raise UsageError(str(e.args[0])) from None
    if not args.expr:
        raise UsageError("a family expression or --catalog KEY is required")
    text = args.expr
    r = args.r if args.r is not None else _max_index(text, "x")
    k = args.k if args.k is not None else _max_index(text, "y")
    n = args.n if args.n is not None else _max_index(text, "q")
    params = [f"q{i + 1}" for i in range(n)] + (["z"] if args.legendrian else [])
    F = parse_poly(text, r, k, params)
    return GeneratingFamily(F, LEGENDRIAN if args.legendrian else LAGRANGIAN)


def _emit(obj, args, text_lines=None):
    if getattr(args, "text", False) and text_lines is not None:
        print("\n".join(text_lines))
    else:
        print(json.dumps(obj))


def _class_label(cls):
    return cls.label if isinstance(cls, GermClass) else cls


# -- subcommands ----------------------------------------------------------------------
def _cmd_classify(args):
    f = _germ(args)
    mode = "K" if args.mode == "K" else "R"
    cls = classify(f, mode)
    rep = codimension(f, "K" if mode == "K" else "Rplus")
    det = determinacy_bound(f, mode)
    out = {"class": _class_label(cls), "codim": rep.codim, "determinacy": det}
    _emit(out, args, [f"class: {out['class']}", f"codimension: {rep.codim}", f"determinacy: {det}"])


def _cmd_codim(args):
    f = _germ(args)
    mode = "K" if args.mode == "K" else "Rplus"
    rep = codimension(f, mode, cap=args.cap)
    _emit(rep.to_dict(), args, [f"{mode}-codimension: {rep.codim}", "basis: " + ", ".join(rep.basis)])


def _cmd_determinacy(args):
    f = _germ(args)
    mode = "K" if args.mode == "K" else "R"
    d = determinacy_bound(f, mode, args.l_max)
    _emit({"mode": mode, "determinacy": d}, args, [f"{mode}-determinacy bound: {d}"])


def _cmd_unfold(args):
    f = _germ(args)
    mode = "K" if args.mode == "K" else "Rplus"
    kind = LEGENDRIAN if (args.legendrian or mode == "K") else LAGRANGIAN
    if kind == LEGENDRIAN and mode != "K":
        raise UsageError("--legendrian unfoldings are built in K mode (--mode K)")
    try:
        fam = build_versal(f, mode, kind, prefix="q")
    except ValueError as e:
        raise DomainError(str(e)) from None
    out = {"family": str(fam.F), "params": list(fam.F.params), "kind": fam.kind, "n": fam.n}
    _emit(out, args, [f"{fam.kind} family: {fam.F}"])


def _family_mode(args, fam):
    if args.mode:
        return args.mode
    return "K" if fam.kind == LEGENDRIAN else "Rplus"


def _cmd_versal(args):
    fam = _family(args)
    rep = versality_report(fam, _family_mode(args, fam))
    _emit(rep.to_dict(), args, [f"versal: {rep.versal}"] + rep.reasons)


def _cmd_stability(args):
    fam = _family(args)
    out = stability_verdict(fam, _family_mode(args, fam))
    _emit(out, args, [f"stable: {out['stable']}", f"class: {out['class']}"] + out["reasons"])


def _parse_ranges(text):
    out = []
    for part in text.split(","):
        bits = part.split(":")
        if len(bits) != 2:
            raise UsageError(f"bad interval {part!r}; expected a:b")
        try:
            lo, hi = float(bits[0]), float(bits[1])
        except ValueError:
            raise UsageError(f"bad interval {part!r}; expected numbers") from None
        if not lo < hi:
            raise UsageError(f"empty interval {part!r}")
        out.append((lo, hi))
    return out


def _cmd_mesh(args, which):
    from .geometry import caustic, check_C_nondegenerate, check_S_nondegenerate, export_mesh, load_config, wavefront
    from .geometry.discriminant import SolverConfig

    if which == "wavefront" and not args.legendrian:
        raise UsageError("wavefront needs --legendrian")
    if which == "caustic" and args.legendrian:
        raise UsageError("caustic is defined for Lagrangian families; drop --legendrian")
    fam = _family(args)
    region = _parse_ranges(args.range)
    cfg = load_config(args.config) if args.config else SolverConfig()
    if args.tol_eq is not None:
        cfg.tol_eq = args.tol_eq
    if args.seed_box:
        cfg.seed_box = _parse_ranges(args.seed_box)[0]
    if args.res < 2:
        raise UsageError("--res must be at least 2")
    check = check_S_nondegenerate if which == "caustic" else check_C_nondegenerate
    if not check(fam):
        raise DomainError(f"family is not {'S' if which == 'caustic' else 'C'}-non-degenerate")
    fn = caustic if which == "caustic" else wavefront
    try:
        mesh = fn(fam, region, args.res, cfg)
    except ValueError as e:
        raise DomainError(str(e)) from None
    counts = {label: int(len(mesh.stratum(label))) for label in mesh.labels}
    out = {"kind": which, "coordinates": list(mesh.ambient_names), "points": len(mesh), "strata": counts,
           "dropped_seeds": mesh.meta.get("dropped", 0)}
    if args.out:
        fmt = args.format or args.out.rsplit(".", 1)[-1].lower()
        if fmt not in ("csv", "obj", "ply"):
            raise UsageError("cannot infer the output format; pass --format")
        try:
            export_mesh(mesh, fmt, args.out)
        except ValueError as e:
            raise DomainError(str(e)) from None
        out["out"] = args.out
        out["format"] = fmt
    _emit(out, args, [f"{which}: {len(mesh)} points"] + [f"  {k}: {v}" for k, v in counts.items()])


def _cmd_catalog(args):
    kind = LEGENDRIAN if args.legendrian else LAGRANGIAN
    if args.action == "list":
        entries = catalog.list_entries(args.r, kind, args.n)
        if args.json:
            print(json.dumps([{"key": e.key, "r": e.r, "kind": e.kind, "n": e.n, "family": str(e.family.F)}
                              for e in entries]))
        else:
            for e in entries:
                print(e.to_row())
        return
    if not args.key:
        raise UsageError("catalog show needs a KEY")
    try:
        e = catalog.get(args.key, kind)
    except KeyError as err:
        raise UsageError(str(err.args[0])) from None
    out = {"key": e.key, "kind": e.kind, "r": e.r, "k": e.k, "n": e.n, "family": str(e.family.F),
           "germ": str(e.germ), "paper_label": e.paper_label, "note": e.note}
    _emit(out, args, [f"{k}: {v}" for k, v in out.items()])


_COMMANDS = {
    "classify": _cmd_classify,
    "codim": _cmd_codim,
    "determinacy": _cmd_determinacy,
    "unfold": _cmd_unfold,
    "versal": _cmd_versal,
    "stability": _cmd_stability,
    "caustic": lambda a: _cmd_mesh(a, "caustic"),
    "wavefront": lambda a: _cmd_mesh(a, "wavefront"),
    "catalog": _cmd_catalog,
}


def _glue_negative_values(argv):
    """Let ``--range -1:1`` through; argparse would read ``-1:1`` as an option."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--range", "--seed-box"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
        _COMMANDS[args.command](args)
    except UsageError as e:
        print(str(e).rstrip(), file=sys.stderr)
        return 1
    except GermSyntaxError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    except (DomainError, UnsupportedError, IndeterminateError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    code = run(argv)
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
