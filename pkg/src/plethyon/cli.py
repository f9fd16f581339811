"""Command-line frontend.

    plethyon delta --flavor classical --sigma "(0,0,0,1,0,2)" --restrict-right "(1,2)"
    plethyon substitute --pleth --g x2 --f x1+x3 --D 6
    plethyon verify --suite laws --flavor all --bound 5

Exit status: 0 on success, 1 when a verification suite fails, 2 on bad flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import incidence, operad, series, surjections
from .core import PlethyonError, base_by_name, format_rational

MAX_SIZE_ENV = "PLETHYON_MAX_SIZE"
DEFAULTS = {
    "format": "text",
    "route": "combinatorial",
    "bound": 4,
    "max_size": 6,
    "level": 1,
    "colors": 1,
    "decoration": "",
    "base": "N+,x",
    "suite": "laws",
    "flavor": None,
}


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plethyon", description="Exact plethystic comultiplications.")
    p.add_argument("--config", help="JSON file whose keys mirror the flags")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=["text", "json"], default=None)

    d = sub.add_parser("delta", help="comultiplication of one generator")
    d.add_argument("--flavor")
    d.add_argument("--sigma")
    d.add_argument("--color", type=int)
    d.add_argument("--route", choices=["combinatorial", "symbolic", "ts"])
    d.add_argument("--restrict-right", dest="restrict_right")
    d.add_argument("--swap-legs", dest="swap_legs", action="store_true", default=None)
    d.add_argument("--decoration", help="TS decoration for --route ts")
    d.add_argument("--colors", type=int)
    d.add_argument("--D", dest="D", type=int)
    common(d)

    s = sub.add_parser("substitute", help="ordinary or plethystic substitution")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--pleth", dest="mode", action="store_const", const="pleth")
    mode.add_argument("--ordinary", dest="mode", action="store_const", const="ordinary")
    s.add_argument("--g")
    s.add_argument("--f", action="append")
    s.add_argument("--D", dest="D", type=int)
    s.add_argument("--base")
    common(s)

    dc = sub.add_parser("decompose", help="decompositions of sigma with a given outer class")
    dc.add_argument("--flavor")
    dc.add_argument("--sigma")
    dc.add_argument("--lambda", dest="lam")
    dc.add_argument("--color", type=int)
    common(dc)

    b = sub.add_parser("bar", help="connected classes of a flavor, or a forest's automorphisms")
    b.add_argument("--flavor")
    b.add_argument("--bound", type=int)
    b.add_argument("--forest", help="JSON forest file")
    b.add_argument("--planar", action="store_true", default=None)
    common(b)

    t = sub.add_parser("ts", help="surjection diagrams")
    t.add_argument("--decoration")
    t.add_argument("--colors", type=int)
    t.add_argument("--max-size", dest="max_size", type=int)
    t.add_argument("--level", type=int, choices=[1, 2])
    t.add_argument("--sigma")
    common(t)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=["laws", "routes", "ts", "axioms"])
    v.add_argument("--flavor")
    v.add_argument("--bound", type=int)
    common(v)
    return p


def _merge_config(args) -> dict:
    opts = {k: v for k, v in vars(args).items()}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        for k, v in cfg.items():
            key = k.replace("-", "_")
            if opts.get(key) is None:
                opts[key] = v
    for k, v in DEFAULTS.items():
        if opts.get(k) is None:
            opts[k] = v
    return opts


def _max_size() -> int | None:
    raw = os.environ.get(MAX_SIZE_ENV)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{MAX_SIZE_ENV} must be an integer") from None


def _cap(n: int, what: str):
    cap = _max_size()
    if cap is not None and n > cap:
        raise UsageError(f"{what} {n} exceeds {MAX_SIZE_ENV}={cap}")


def _need(opts, *names):
    for n in names:
        if opts.get(n) in (None, ""):
            raise UsageError(f"--{n.replace('_', '-')} is required")


def _flavor(opts):
    _need(opts, "flavor")
    try:
        return incidence.get_flavor(opts["flavor"])
    except PlethyonError as exc:
        raise UsageError(str(exc)) from exc


def _generator(flavor, text, color):
    try:
        return flavor.parse(text, color)
    except (PlethyonError, ValueError) as exc:
        raise UsageError(f"cannot read generator {text!r}: {exc}") from exc


def _emit_tensor(flavor, sigma, t, opts, out):
    if opts["format"] == "json":
        out.write(json.dumps(incidence.tensor_to_json(flavor, sigma, t), indent=2) + "\n")
    else:
        out.write(incidence.format_tensor(flavor, t) + "\n")


def cmd_delta(opts, out) -> int:
    flavor = _flavor(opts)
    _need(opts, "sigma")
    sigma = _generator(flavor, opts["sigma"], opts.get("color"))
    _cap(flavor.grade(sigma.shape), "sigma grade")
    route = opts["route"]
    if route == "symbolic":
        t = incidence.delta_symbolic(flavor, sigma, opts.get("D"))
    elif route == "ts":
        try:
            dec = surjections.Decoration.parse(opts["decoration"] or "")
        except PlethyonError as exc:
            raise UsageError(str(exc)) from exc
        colors = opts["colors"]
        if surjections.flavor_for(dec, colors).name != flavor.name:
            raise UsageError(f"decoration {dec} with {colors} colors does not model {flavor.name}")
        t = surjections.ts_delta(sigma, dec, colors, limit=_max_size())
    else:
        t = incidence.delta_combinatorial(flavor, sigma)
    if opts.get("restrict_right"):
        right = _generator(flavor, opts["restrict_right"], sigma.color)
        t = t.restrict_right((right,))
    if opts.get("swap_legs"):
        t = t.swap()
    _emit_tensor(flavor, sigma, t, opts, out)
    return 0


def cmd_substitute(opts, out) -> int:
    _need(opts, "g", "f")
    try:
        base = base_by_name(opts["base"])
        G = series.parse_series(opts["g"], base)
        Fs = [series.parse_series(f, base) for f in opts["f"]]
    except PlethyonError as exc:
        raise UsageError(str(exc)) from exc
    D = opts.get("D") or max([G.D] + [F.D for F in Fs])
    _cap(D, "truncation")
    G = series.Series(base, G.kind, G.terms, max(D, G.D))
    Fs = [series.Series(base, F.kind, F.terms, max(D, F.D)) for F in Fs]
    mode = opts.get("mode") or "pleth"
    if mode == "pleth":
        if len(Fs) != 1:
            raise UsageError("plethystic substitution takes exactly one --f")
        H = series.substitute_plethystic(G, Fs[0], D)
    else:
        H = series.substitute_ordinary(G, tuple(Fs), D)
    if opts["format"] == "json":
        out.write(json.dumps(series.series_to_json(H), indent=2) + "\n")
    else:
        out.write(series.format_series(H) + "\n")
    return 0


def cmd_decompose(opts, out) -> int:
    flavor = _flavor(opts)
    _need(opts, "sigma", "lam")
    sigma = _generator(flavor, opts["sigma"], opts.get("color"))
    lam = _generator(flavor, opts["lam"], sigma.color)
    _cap(flavor.grade(sigma.shape), "sigma grade")
    decs = incidence.enumerate_decompositions(flavor, sigma, lam)
    if opts["format"] == "json":
        rows = [
            {"inner": [flavor.format(g) for g in d.inner], "placements": d.placements,
             "coeff": {"num": d.coefficient.numerator, "den": d.coefficient.denominator}}
            for d in decs
        ]
        out.write(json.dumps({"flavor": flavor.name, "sigma": flavor.format(sigma),
                              "outer": flavor.format(lam), "classes": rows}, indent=2) + "\n")
    else:
        for d in decs:
            inner = incidence.format_monomial(flavor, d.inner)
            out.write(f"{d.placements}\t{format_rational(d.coefficient)}\t{inner}\n")
        total = sum(d.placements for d in decs)
        out.write(f"classes={len(decs)} placements={total}\n")
    return 0


def _read_forest(path):
    def node(d):
        if not isinstance(d, dict) or "color" not in d:
            raise UsageError(f"bad forest node {d!r}")
        kids = tuple(node(c) for c in d.get("children", []))
        return surjections.Node(d.get("label"), d["color"], kids)

    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read forest {path}: {exc}") from exc
    if not isinstance(data, list):
        raise UsageError("a forest file holds a JSON list of trees")
    return [node(t) for t in data]


def cmd_bar(opts, out) -> int:
    if opts.get("forest"):
        forest = _read_forest(opts["forest"])
        planar = bool(opts.get("planar"))
        n = surjections.forest_aut_order(forest, symmetric=not planar)
        if opts["format"] == "json":
            out.write(json.dumps({"trees": len(forest), "aut": n}) + "\n")
        else:
            out.write(f"{n}\n")
        return 0
    flavor = _flavor(opts)
    bound = opts["bound"]
    _cap(bound, "bound")
    gens = flavor.generators(bound)
    if opts["format"] == "json":
        rows = [{"generator": flavor.format(g), "grade": flavor.grade(g.shape),
                 "aut": flavor.aut(g.shape)} for g in gens]
        out.write(json.dumps({"flavor": flavor.name, "bound": bound, "generators": rows}, indent=2) + "\n")
    else:
        for g in gens:
            out.write(f"{flavor.grade(g.shape)}\t{flavor.aut(g.shape)}\t{flavor.format(g)}\n")
    return 0


def cmd_ts(opts, out) -> int:
    try:
        dec = surjections.Decoration.parse(opts["decoration"] or "")
        flavor = surjections.flavor_for(dec, opts["colors"])
    except PlethyonError as exc:
        raise UsageError(str(exc)) from exc
    if opts.get("sigma"):
        sigma = _generator(flavor, opts["sigma"], None)
        _cap(flavor.grade(sigma.shape), "sigma grade")
        t = surjections.ts_delta(sigma, dec, opts["colors"], limit=_max_size())
        _emit_tensor(flavor, sigma, t, opts, out)
        return 0
    n = opts["max_size"]
    _cap(n, "max size")
    rows = surjections.enumerate_ts(opts["level"], n, dec, opts["colors"], limit=_max_size())
    if opts["level"] == 1:
        if opts["format"] == "json":
            out.write(json.dumps([{"class": flavor.format(r.key), "aut": r.aut, "bottom": r.bottom}
                                  for r in rows], indent=2) + "\n")
        else:
            for r in rows:
                out.write(f"{r.bottom}\t{r.aut}\t{flavor.format(r.key)}\n")
    else:
        for r in rows:
            inner = incidence.format_monomial(flavor, r.inner)
            out.write(f"{flavor.format(r.composite)}\t{inner} | {flavor.format(r.outer)}\t"
                      f"count={r.count} card={format_rational(r.cardinality)}\n")
    return 0


def _suite_flavors(opts):
    name = opts.get("flavor") or "all"
    if name == "all":
        return list(incidence.FLAVORS.values())
    return [_flavor(opts)]


TS_DECORATIONS = [
    ("", 1), ("left=linear", 1), ("right=linear", 1), ("left=linear,right=linear", 1),
    ("right=monotone", 1), ("left=monotone,right=monotone", 1), ("", 2),
]
AXIOM_OPERADS = ["sym", "ass", "sym2", "ass2", "giraudo:N+,x", "giraudo:N,+",
                 "cat:codiscrete2", "cat:arrow"]


def cmd_verify(opts, out) -> int:
    bound = opts["bound"]
    _cap(bound, "bound")
    suite = opts["suite"]
    ok = True
    results = []
    if suite in ("laws", "routes"):
        for flavor in _suite_flavors(opts):
            if suite == "laws":
                rep = incidence.check_bialgebra_laws(flavor, bound, routes=False)
                passed, text = rep.passed, rep.summary()
            else:
                bad = [flavor.format(g) for g in flavor.generators(bound)
                       if incidence.delta_symbolic(flavor, g) != incidence.delta_combinatorial(flavor, g)]
                passed = not bad
                text = f"{'PASS' if passed else 'FAIL'} {flavor.name} routes (bound {bound})" + (
                    f": {', '.join(bad[:5])}" if bad else "")
            ok &= passed
            results.append({"name": flavor.name, "passed": passed, "report": text})
    elif suite == "ts":
        for dec_text, colors in TS_DECORATIONS:
            dec = surjections.Decoration.parse(dec_text)
            flavor = surjections.flavor_for(dec, colors)
            bad = []
            for ic in surjections.enumerate_ts(1, bound, dec, colors, limit=_max_size()):
                if ic.aut != flavor.aut(ic.key.shape) or \
                        surjections.ts_delta(ic.key, dec, colors) != incidence.delta_combinatorial(flavor, ic.key):
                    bad.append(flavor.format(ic.key))
            passed = not bad
            ok &= passed
            text = f"{'PASS' if passed else 'FAIL'} ts {dec} colors={colors} ~ {flavor.name}"
            results.append({"name": f"{dec}/{colors}", "passed": passed, "report": text})
    else:
        for name in AXIOM_OPERADS:
            rep = operad.axiom_check(operad.operad_by_name(name), bound)
            ok &= rep.passed
            results.append({"name": name, "passed": rep.passed, "report": rep.summary()})
    if opts["format"] == "json":
        out.write(json.dumps({"suite": suite, "bound": bound, "passed": ok, "results": results}, indent=2) + "\n")
    else:
        for r in results:
            out.write(r["report"] + "\n")
        out.write(("PASS" if ok else "FAIL") + f" suite {suite}\n")
    return 0 if ok else 1


COMMANDS = {
    "delta": cmd_delta,
    "substitute": cmd_substitute,
    "decompose": cmd_decompose,
    "bar": cmd_bar,
    "ts": cmd_ts,
    "verify": cmd_verify,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = _merge_config(args)
        return COMMANDS[args.command](opts, out)
    except UsageError as exc:
        err.write(f"plethyon: error: {exc}\n")
        return 2
    except PlethyonError as exc:
        err.write(f"plethyon: error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
