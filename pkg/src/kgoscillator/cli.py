"""Command-line entry point: ``kgo {spectrum,table,density,check,selftest}``.

Exit codes: 0 ok, 2 no physical root, 3 forensic rows present,
4 invalid density, 1 selftest failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict


from . import __version__
from .audit import (TABLE_GAMMAS, TABLE_NS, deviations, published_row,
                    row_findings, summarize)
from .errors import InvalidDensity, NonNormalizable, NoPhysicalRoot, UnboundedSpectrum
from .measures import (BBM_BOUND, DIAGNOSTIC_COLUMNS, TABLE_COLUMNS, FisherMode,
                       report, report_row)
from .quadrature import QuadratureSpec
from .spectrum import Branch, ModelConfig, asymptote, energy_level, spectrum
from .states import DensityKind, Space, density_curve, grid_points, make_state

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_SPECTRUM = 2
EXIT_FORENSIC = 3
EXIT_DENSITY = 4

# options whose values may start with '-' (negative gammas, grid bounds)
_VALUE_OPTIONS = ("--gamma", "--gamma-list", "--grid", "--n")


def _float_list(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _int_list(text):
    return [int(t) for t in text.split(",") if t.strip()]


def _grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be min:max:count")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 2 or not lo < hi:
        raise argparse.ArgumentTypeError("grid needs min < max and count >= 2")
    return lo, hi, count


def _join_values(argv):
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--output", default=None, help="write data here instead of stdout")
    common.add_argument("--rel-tol", type=float, default=1e-10)
    common.add_argument("--branch", choices=[b.value for b in Branch],
                        default=Branch.PARTICLE.value)

    parser = argparse.ArgumentParser(prog="kgo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="E_n versus n per gamma")
    p.add_argument("--gamma", type=_float_list, default=None)
    p.add_argument("--gamma-list", type=_float_list, default=None)
    p.add_argument("--n-max", type=int, default=20)

    for name, helptext in (("table", "recompute the published table rows"),
                           ("check", "audit the uncertainty relations")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--gamma-list", type=_float_list, default=list(TABLE_GAMMAS))
        p.add_argument("--gamma", dest="gamma_list", type=_float_list)
        p.add_argument("--n", type=_int_list, default=list(TABLE_NS))
        p.add_argument("--mode", choices=[m.value for m in FisherMode],
                       default=FisherMode.BOTH.value)
        p.add_argument("--compare-paper", action="store_true")
        p.add_argument("--forensic", action="store_true",
                       help="evaluate moments of non-normalizable states formally")

    p = sub.add_parser("density", parents=[common], help="sample rho or its Fisher/Shannon density")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--space", choices=[s.value for s in Space], default=Space.COORDINATE.value)
    p.add_argument("--kind", choices=["rho", "fisher", "shannon"] + [k.value for k in DensityKind][1:],
                   default=DensityKind.RHO.value)
    p.add_argument("--grid", type=_grid, default=None, help="min:max:count")

    sub.add_parser("selftest", parents=[common], help="quick gamma=0 anchor checks")
    return parser


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv_text(meta, header, rows):
    buf = io.StringIO()
    buf.write("# " + json.dumps(meta, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(r.get(h)) for h in header])
    return buf.getvalue()


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta(args):
    meta = {"command": args.command, "version": __version__, "rel_tol": args.rel_tol}
    for key in ("gamma", "gamma_list", "n", "n_max", "branch", "space", "kind",
                "grid", "mode", "compare_paper", "forensic"):
        if hasattr(args, key):
            val = getattr(args, key)
            meta[key] = list(val) if isinstance(val, tuple) else val
    return meta


def _spec(args):
    return QuadratureSpec(rel_tol=args.rel_tol)


def cmd_spectrum(args):
    gammas = (args.gamma or []) + (args.gamma_list or [])
    if not gammas:
        gammas = [0.0]
    rows = []
    for g in gammas:
        try:
            levels = spectrum(ModelConfig(g, args.branch), args.n_max)
        except NoPhysicalRoot as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SPECTRUM
        try:
            asym = asymptote(g)
        except UnboundedSpectrum:
            asym = None
        for lv in levels:
            rows.append({"gamma": g, "branch": args.branch, "n": lv.n, "E": lv.E,
                         "lambda": lv.lambda_, "asymptote": asym})
    meta = _meta(args)
    if args.format == "json":
        _emit(json.dumps({"meta": meta, "rows": rows}) + "\n", args.output)
    else:
        _emit(_csv_text(meta, ["gamma", "branch", "n", "E", "lambda", "asymptote"], rows),
              args.output)
    return EXIT_OK


def compute_reports(args):
    spec = _spec(args)
    reps = []
    for n in args.n:
        for g in args.gamma_list:
            reps.append(report(g, n, args.branch, spec=spec, mode=args.mode,
                               forensic=args.forensic))
    return reps


def cmd_table(args):
    try:
        reps = compute_reports(args)
    except NoPhysicalRoot as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPECTRUM
    meta = _meta(args)
    header = list(TABLE_COLUMNS) + list(DIAGNOSTIC_COLUMNS)
    rows, json_rows = [], []
    for rep in reps:
        row = report_row(rep)
        full = rep.to_dict()
        if args.compare_paper:
            pub = published_row(rep.n, rep.gamma)
            if pub is not None:
                dev = deviations(rep, pub)
                row.update({f"dev_{k}": v for k, v in dev.items()})
                full["published"] = pub
                full["deviation"] = dev
        rows.append(row)
        json_rows.append(full)
    if args.compare_paper:
        header += [f"dev_{c}" for c in TABLE_COLUMNS[2:]]
    if args.format == "json":
        _emit(json.dumps({"meta": meta, "rows": json_rows}) + "\n", args.output)
    else:
        _emit(_csv_text(meta, header, rows), args.output)
    return EXIT_FORENSIC if any(r.forensic for r in reps) else EXIT_OK


def cmd_check(args):
    try:
        reps = compute_reports(args)
    except NoPhysicalRoot as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPECTRUM
    meta = _meta(args)
    meta["bbm_bound"] = BBM_BOUND
    findings = []
    rows = []
    for rep in reps:
        fs = row_findings(rep, compare_paper=args.compare_paper)
        findings.extend(f.to_dict() for f in fs)
        rel = {}
        for space, paper, direct in (("coordinate", rep.Fx_paper, rep.Fx),
                                     ("momentum", rep.Fp_paper, rep.Fp)):
            if paper is not None and direct:
                rel[space] = (paper - direct) / direct
        rows.append({
            "n": rep.n, "gamma": rep.gamma, "E": rep.E,
            "Fx": rep.Fx, "Fp": rep.Fp, "Fx_paper": rep.Fx_paper, "Fp_paper": rep.Fp_paper,
            "x2": rep.x2, "p2": rep.p2, "Sx": rep.Sx, "Sp": rep.Sp, "S_sum": rep.S_sum,
            "inequalities": {k: (None if v is None else asdict(v))
                             for k, v in rep.inequalities().items()},
            "paper_fisher_relative_deviation": rel,
            "flags": list(rep.flags),
        })
    summary = summarize(reps, compare_paper=args.compare_paper)
    if args.format == "csv":
        out = []
        for rep in reps:
            for name, rec in rep.inequalities().items():
                out.append({"n": rep.n, "gamma": rep.gamma, "relation": name,
                            "lhs": None if rec is None else rec.lhs,
                            "rhs": None if rec is None else rec.rhs,
                            "margin": None if rec is None else rec.margin,
                            "satisfied": "" if rec is None else str(rec.satisfied).lower(),
                            "flags": ";".join(rep.flags)})
        text = _csv_text(meta, ["n", "gamma", "relation", "lhs", "rhs", "margin",
                                "satisfied", "flags"], out)
        text += "".join("# finding " + json.dumps(f, sort_keys=True) + "\n" for f in findings)
        _emit(text, args.output)
    else:
        _emit(json.dumps({"meta": meta, "rows": rows, "findings": findings,
                          "summary": summary}) + "\n", args.output)
    return EXIT_OK


def cmd_density(args):
    try:
        level = energy_level(ModelConfig(args.gamma, args.branch), args.n)
    except NoPhysicalRoot as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPECTRUM
    try:
        state = make_state(level, args.gamma, args.space, spec=_spec(args))
        if args.grid is None:
            lo, hi, count = -state.radius, state.radius, 2001
        else:
            lo, hi, count = args.grid
        curve = density_curve(state, args.kind, grid_points(lo, hi, count))
    except (InvalidDensity, NonNormalizable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DENSITY
    meta = _meta(args)
    meta["radius"] = state.radius
    meta["weight_positive"] = state.validity.weight_positive
    if args.format == "json":
        _emit(json.dumps({"meta": meta, "curve": curve.to_dict()}) + "\n", args.output)
    else:
        _emit("# " + json.dumps(meta, sort_keys=True) + "\n" + curve.to_csv(), args.output)
    return EXIT_OK


def cmd_selftest(args):
    spec = _spec(args)
    failures = 0
    for n in (0, 1, 2):
        rep = report(0.0, n, spec=spec, mode=FisherMode.DIRECT)
        checks = [
            (f"n={n} Fx=Fp={2 * (2 * n + 1)}", abs(rep.Fx - 2 * (2 * n + 1)) < 1e-6
             and abs(rep.Fp - 2 * (2 * n + 1)) < 1e-6),
            (f"n={n} <x2>=<p2>={n + 0.5}", abs(rep.x2 - (n + 0.5)) < 1e-8
             and abs(rep.p2 - (n + 0.5)) < 1e-8),
            (f"n={n} Sx=Sp", abs(rep.Sx - rep.Sp) < 1e-10),
            (f"n={n} all inequalities hold",
             all(r is not None and r.satisfied for r in rep.inequalities().values())),
        ]
        if n == 0:
            checks.append(("n=0 Sx+Sp=1+ln(pi)", abs(rep.S_sum - BBM_BOUND) < 1e-6))
        for label, ok in checks:
            failures += not ok
            print(f"{'PASS' if ok else 'FAIL'} {label}")
    return EXIT_OK if failures == 0 else EXIT_SELFTEST


COMMANDS = {"spectrum": cmd_spectrum, "table": cmd_table, "density": cmd_density,
            "check": cmd_check, "selftest": cmd_selftest}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_values(argv))
    if args.format is None:
        args.format = "json" if args.command == "check" else "csv"
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
