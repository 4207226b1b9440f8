"""Command-line front end.

Exit codes: 0 success, 1 a check ran and failed, 2 invalid input,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import constructions as con
from . import monotone as mm
from .errors import NumericalError, ValidationError
from .grammar import parse
from .lcmap import LCMap, klein_gordon_flatten
from .render import contour_set, num, render_contours, render_figure
from .symmetry import classify
from .verify import load_family, rectangle_rule_test

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3


def _floats(n: int | None = None):
    def conv(text: str):
        try:
            vals = [float(v) for v in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
        if n is not None and len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} numbers, got {len(vals)}")
        return vals

    return conv


def _highlight(text: str):
    fam, _, level = text.partition(":")
    if fam not in ("u", "v") or not level:
        raise argparse.ArgumentTypeError(f"highlight must look like u:0 or v:1.5, got {text!r}")
    try:
        return fam, float(level)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad highlight level in {text!r}") from None


def _spec_or_none(text):
    return None if text is None else parse(text)


def _emit(out, text: str):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _map_from_args(args) -> LCMap:
    h, k = args.h, args.k
    if h is None or k is None:
        # accept "h = SPEC" / "k = SPEC" lines piped from a construction command
        found = {}
        for line in sys.stdin:
            key, sep, val = line.partition("=")
            if sep and key.strip() in ("h", "k"):
                found[key.strip()] = val.strip()
        h = h if h is not None else found.get("h")
        k = k if k is not None else found.get("k")
        if h is None or k is None:
            raise ValidationError("need --h and --k (or h = ..., k = ... lines on stdin)")
    return LCMap(parse(h), parse(k), bool(getattr(args, "swapped", False)))


# ---------------------------------------------------------------------------


def cmd_eval(args) -> int:
    m = _map_from_args(args)
    x, y = args.point
    u, v = m(x, y)
    print(f"u={num(u)} v={num(v)}")
    return EXIT_OK


def cmd_contour(args) -> int:
    m = _map_from_args(args)
    lv = [args.level]
    cs = contour_set(m, args.window, lv if args.family == "u" else (), lv if args.family == "v" else (), args.res)
    _emit(args.out, cs.csv())
    return EXIT_OK


def cmd_realize_crossing(args) -> int:
    rays = con.RayFamily.of(*(_spec_or_none(g) for g in (args.g1, args.g2, args.g3, args.g4)))
    missing = rays.missing
    full = rays.complete()
    m = con.realize_crossing(full, parse(args.p))
    for j in missing:
        print(f"g{j} = {full.maps[j - 1].spec}")
    print(f"h = {m.h.spec}")
    print(f"k = {m.k.spec}")
    print(f"cyclic_residual = {con.cyclic_residual(full):.3g}")
    res = con.crossing_ray_residuals(m, full)
    print("ray_residuals = " + ",".join(f"{r:.3g}" for r in res))
    return EXIT_OK


def _print_square(q: con.Quadrilateral, m: LCMap, missing=()):
    for j in missing:
        print(f"g{j} = {q.maps[j - 1].spec}")
    print(f"h = {m.h.spec}")
    print(f"k = {m.k.spec}")
    print(f"twisted_residual = {con.twisted_residual(q):.3g}")
    res = con.square_side_residuals(m, q)
    print("side_residuals = " + ",".join(f"{r:.3g}" for r in res))


def cmd_realize_square(args) -> int:
    q = con.Quadrilateral.of(*(_spec_or_none(g) for g in (args.g1, args.g2, args.g3, args.g4)),
                             vertices=args.vertices)
    missing = q.missing
    q, scaling = con.quad_normalize(q.complete())
    m = con.realize_square(q, parse(args.p))
    if scaling.h.spec != "id" or scaling.k.spec != "id":
        print(f"scale_h = {scaling.h.spec}")
        print(f"scale_k = {scaling.k.spec}")
    _print_square(q, m, missing)
    return EXIT_OK


def cmd_flat_top(args) -> int:
    q, m = con.flat_top_bottom(parse(args.g), parse(args.p))
    _print_square(q, m)
    return EXIT_OK


def cmd_lr_sym(args) -> int:
    q, m = con.left_right_symmetric(parse(args.g), parse(args.p))
    print(f"g1 = {q.g1.spec}")
    print(f"g4 = {q.g4.spec}")
    _print_square(q, m)
    return EXIT_OK


def cmd_unfold(args) -> int:
    m = con.unfold(parse(args.p), args.negated)
    print(f"h = {m.h.spec}")
    print(f"k = {m.k.spec}")
    return EXIT_OK


def cmd_crop(args) -> int:
    H = con.crop_map(parse(args.h), args.c)
    print(f"h = {H.spec}")
    print(f"k = {H.spec}")
    return EXIT_OK


def cmd_classify(args) -> int:
    c = classify(_map_from_args(args))
    print(c.label)
    for name, spec, label in c.suggestions:
        print(f"unfold {name}: {spec} -> {label}")
    return EXIT_OK


def cmd_verify_rect(args) -> int:
    fam = load_family(args.curves)
    seed = args.seed
    if seed is None:
        env = os.environ.get("LC_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise ValidationError(f"LC_SEED must be an integer, got {env!r}") from None
    rep = rectangle_rule_test(fam, args.trials, seed)
    print(rep.text())
    if args.csv:
        _emit(args.csv, rep.csv())
    return EXIT_OK if rep.passed else EXIT_CHECK_FAILED


def cmd_render(args) -> int:
    m = _map_from_args(args)
    hl = args.highlight or []
    levels_u = list(args.levels_u or [])
    levels_v = list(args.levels_v or [])
    # highlighted levels are drawn even when not listed
    for fam, lv in hl:
        target = levels_u if fam == "u" else levels_v
        if lv not in target:
            target.append(lv)
    r = render_contours(m, args.window, levels_u, levels_v, args.res, hl)
    _emit(args.out, r.svg)
    csv_path = args.csv
    if csv_path is None and args.out not in (None, "-"):
        csv_path = os.path.splitext(args.out)[0] + ".csv"
    if csv_path:
        _emit(csv_path, r.csv)
    if args.figure:
        render_figure(r, args.figure, args.window, hl)
    return EXIT_OK


def cmd_kg_flatten(args) -> int:
    lo, hi = args.domain
    m = klein_gordon_flatten(parse(args.nu), parse(args.mu), (lo, hi))
    print(f"h = {m.h.spec}")
    print(f"k = {m.k.spec}")
    # derivative spot check at the interval midpoint
    mid = 0.5 * (lo + hi)
    dh = mm.derivative(m.h, mid)
    print(f"h'({num(mid)}) = {num(dh)}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lorentzmap", description="Lorentz-conformal maps of the plane.")
    sub = p.add_subparsers(dest="command", required=True)

    def hk(sp, required=True):
        sp.add_argument("--h", required=required, help="function spec for h")
        sp.add_argument("--k", required=required, help="function spec for k")
        sp.add_argument("--swapped", action="store_true", help="use (U, V) = (k(Y), h(X))")

    sp = sub.add_parser("eval", help="evaluate a map at a point")
    hk(sp)
    sp.add_argument("--point", type=_floats(2), required=True, metavar="X,Y")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("contour", help="sample one contour as CSV")
    hk(sp)
    sp.add_argument("--family", choices=("u", "v"), required=True)
    sp.add_argument("--level", type=float, required=True)
    sp.add_argument("--window", type=_floats(4), default=[-2.0, 2.0, -2.0, 2.0], metavar="X0,X1,Y0,Y1")
    sp.add_argument("--res", type=int, default=201)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_contour)

    sp = sub.add_parser("realize-crossing", help="map with prescribed crossing rays")
    for i in range(1, 5):
        sp.add_argument(f"--g{i}")
    sp.add_argument("--p", default="id")
    sp.set_defaults(func=cmd_realize_crossing)

    sp = sub.add_parser("realize-square", help="map a quadrilateral onto the square")
    for i in range(1, 5):
        sp.add_argument(f"--g{i}")
    sp.add_argument("--p", default="id")
    sp.add_argument("--vertices", type=_floats(4), default=[1.0, 1.0, 1.0, 1.0], metavar="X1,X2,Y1,Y2")
    sp.set_defaults(func=cmd_realize_square)

    for name, func, helptext in (("flat-top", cmd_flat_top, "flat top and bottom"),
                                 ("lr-sym", cmd_lr_sym, "top symmetric about the y-axis")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--g", required=True)
        sp.add_argument("--p", default="id")
        sp.set_defaults(func=func)

    sp = sub.add_parser("unfold", help="odd extension of an even component")
    sp.add_argument("--p", required=True)
    sp.add_argument("--negated", action="store_true")
    sp.set_defaults(func=cmd_unfold)

    sp = sub.add_parser("crop", help="crop an odd map around the origin")
    sp.add_argument("--h", required=True)
    sp.add_argument("--c", type=float, required=True)
    sp.set_defaults(func=cmd_crop)

    sp = sub.add_parser("classify", help="D4 symmetry classification")
    hk(sp, required=False)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("verify-rect", help="rectangle-rule test on a curve family file")
    sp.add_argument("--curves", required=True)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=None, help="defaults to $LC_SEED, then 0")
    sp.add_argument("--csv", help="write per-trial CSV here")
    sp.set_defaults(func=cmd_verify_rect)

    sp = sub.add_parser("render", help="contour plot as SVG and CSV")
    hk(sp)
    sp.add_argument("--window", type=_floats(4), default=[-2.0, 2.0, -2.0, 2.0], metavar="X0,X1,Y0,Y1")
    sp.add_argument("--levels-u", type=_floats(), default=[])
    sp.add_argument("--levels-v", type=_floats(), default=[])
    sp.add_argument("--highlight", type=_highlight, action="append", metavar="FAMILY:LEVEL")
    sp.add_argument("--res", type=int, default=201)
    sp.add_argument("--out", help="SVG path (stdout if omitted)")
    sp.add_argument("--csv", help="CSV path (defaults to the SVG path with .csv)")
    sp.add_argument("--figure", help="also write a PNG via matplotlib")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("kg-flatten", help="map with prescribed derivative densities")
    sp.add_argument("--nu", required=True)
    sp.add_argument("--mu", required=True)
    sp.add_argument("--domain", type=_floats(2), default=[-2.0, 2.0], metavar="A,B")
    sp.set_defaults(func=cmd_kg_flatten)
    return p


_NUMERIC_OPTS = {"--point", "--window", "--levels-u", "--levels-v", "--vertices", "--domain", "--level", "--c"}


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--window -3,3,-2,2`` into ``--window=-3,3,-2,2`` so argparse
    does not read the value as an option."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if a in _NUMERIC_OPTS and nxt is not None and nxt[:1] == "-" and (nxt[1:2].isdigit() or nxt[1:2] == "."):
            out.append(f"{a}={nxt}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
