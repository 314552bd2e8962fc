"""Command-line interface: ``pqspec eigen | combine | enumerate | example``.

Exit codes: 0 on success, 2 for rejected input, 3 when a numerical
procedure fails.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import calculus, config, examples, oracle, shoot, svg
from .core import CALIBRATION, STRICT, ComponentDomain, Exponents, parse_range
from .errors import ConfigError, MalformedInput, NumericalError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _exponents(args) -> Exponents:
    return Exponents(args.p, args.q, CALIBRATION if getattr(args, "calibration", False) else STRICT)


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _add_exponents(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=float, required=True, help="exponent of the p-Laplacian")
    p.add_argument("--q", type=float, required=True, help="exponent of the L^q constraint")


def _parameters(args, *names) -> dict:
    return {n: getattr(args, n) for n in names}


# -- eigen -------------------------------------------------------------------

def _eigen_domain(args) -> ComponentDomain:
    if args.interval is not None:
        return ComponentDomain.interval(args.interval)
    dim, r = args.ball
    if dim != int(dim):
        raise ConfigError(f"ball dimension must be an integer, got {dim}")
    return ComponentDomain.ball(r, int(dim))


def _verify(e: Exponents, domain: ComponentDomain, lam1: float) -> dict:
    length = domain.length if domain.dim == 1 else None
    if not e.strict:
        if length is not None:
            ref, how = oracle.calibration_eigenvalue(e.p, length, 1), "p-sine closed form"
        elif e.p == 2.0:
            ref, how = oracle.bessel_eigenvalue(domain.dim, domain.size, 1), "Bessel zero"
        else:
            return {"reference": None, "method": "none available"}
    elif length is not None:
        ref, order, _ = oracle.extrapolated_first(e, length)
        how = f"discrete minimization, Richardson order {order:.3f}"
    else:
        return {"reference": None, "method": "none available"}
    return {"reference": ref, "method": how, "relative_deviation": (lam1 - ref) / ref}


def cmd_eigen(args) -> int:
    e = _exponents(args)
    domain = _eigen_domain(args)
    ks = parse_range(args.k)
    pairs = [shoot.eigenpair(domain, e, k, direct=args.direct) for k in ks]
    rows = [{"k": pr.k, "value": pr.value, "method": pr.method} for pr in pairs]
    if domain.dim == 1 and 1 in ks:
        lam1 = pairs[ks.index(1)].value
        for row in rows:
            row["ratio_to_k_pow_p"] = row["value"] / (lam1 * row["k"] ** e.p)
    verify = None
    if args.verify:
        lam1 = pairs[ks.index(1)].value if 1 in ks else shoot.eigenpair(domain, e, 1, direct=args.direct).value
        verify = _verify(e, domain, lam1)
    if args.format == "json":
        doc = {
            "schema": examples.SCHEMA,
            "command": "eigen",
            "parameters": {"p": e.p, "q": e.q, "mode": e.mode, "domain": domain.label(),
                           "k": args.k, "direct": args.direct},
            "rows": rows,
        }
        if verify is not None:
            doc["verify"] = verify
        _emit(examples.to_json(doc), args.output)
        return EXIT_OK
    if args.format == "csv":
        lines = ["k,value,method"] + [f"{r['k']},{r['value']!r},{r['method']}" for r in rows]
        _emit("\n".join(lines) + "\n", args.output)
        return EXIT_OK
    out = [f"# {domain.label()}  p={e.p:g} q={e.q:g} mode={e.mode}"]
    for r in rows:
        extra = f"  lam_k/(k^p lam_1) = {r['ratio_to_k_pow_p']:.15f}" if "ratio_to_k_pow_p" in r else ""
        out.append(f"k={r['k']:<3d} lam = {r['value']:.15g}  [{r['method']}]{extra}")
    if verify is not None:
        if verify["reference"] is None:
            out.append("verify: no independent reference for this domain")
        else:
            out.append(f"verify: reference lam_1 = {verify['reference']:.15g} ({verify['method']}), "
                       f"relative deviation {verify['relative_deviation']:.3e}")
    _emit("\n".join(out) + "\n", args.output)
    return EXIT_OK


# -- combine / enumerate -----------------------------------------------------

def read_spectra(path) -> list:
    """Per-piece eigenvalue lists from JSON (``{"spectra": [[...], ...]}``) or text.

    The text form has one piece per line, values separated by commas or
    spaces; ``#`` starts a comment.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        if text.lstrip().startswith(("{", "[")):
            data = json.loads(text)
            spectra = data["spectra"] if isinstance(data, dict) else data
            spectra = [[float(v) for v in row] for row in spectra]
        else:
            spectra = []
            for line in text.splitlines():
                line = line.split("#", 1)[0].replace(",", " ").split()
                if line:
                    spectra.append([float(v) for v in line])
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedInput(f"{path}: not a list of eigenvalue lists ({exc})") from None
    if not spectra or any(not row for row in spectra):
        raise MalformedInput(f"{path}: every piece needs at least one eigenvalue")
    return spectra


def _parse_select(text: str, spectra) -> calculus.Selection:
    try:
        ks = [int(t) for t in text.split(",")]
    except ValueError:
        raise ConfigError(f"--select expects comma-separated integers, got {text!r}") from None
    if len(ks) != len(spectra):
        raise ConfigError(f"--select has {len(ks)} entries for {len(spectra)} pieces")
    choices = []
    for i, k in enumerate(ks):
        if k < 0 or k > len(spectra[i]):
            raise ConfigError(f"piece {i}: index {k} outside 0..{len(spectra[i])}")
        choices.append(None if k == 0 else calculus.Choice(k, spectra[i][k - 1]))
    return calculus.Selection(tuple(choices))


def cmd_combine(args) -> int:
    e = _exponents(args)
    spectra = read_spectra(args.spectra)
    pair = calculus.combine(e, _parse_select(args.select, spectra))
    norm = math.fsum(abs(a) ** e.q for a in pair.coefficients)
    if args.format == "json":
        doc = {
            "schema": examples.SCHEMA,
            "command": "combine",
            "parameters": {"p": e.p, "q": e.q, "select": args.select},
            "value": pair.value,
            "coefficients": list(pair.coefficients),
            "normalization": norm,
        }
        _emit(examples.to_json(doc), args.output)
        return EXIT_OK
    out = [f"lam = {pair.value:.17g}"]
    out += [f"alpha_{i} = {a:.17g}" for i, a in enumerate(pair.coefficients)]
    out.append(f"sum |alpha_i|^q = {norm:.17g}")
    _emit("\n".join(out) + "\n", args.output)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    e = _exponents(args)
    spectra = read_spectra(args.spectra)
    cutoff = math.inf if args.cutoff is None else args.cutoff
    res = calculus.enumerate_spectrum(e, spectra, cutoff=cutoff, budget=args.budget,
                                      workers=config.worker_count())
    if args.format == "json":
        doc = {
            "schema": examples.SCHEMA,
            "command": "enumerate",
            "parameters": {"p": e.p, "q": e.q, "cutoff": None if math.isinf(cutoff) else cutoff,
                           "budget": args.budget, "depths": list(res.depths)},
            "evaluated": res.visited,
            "values": [{"value": c.value, "selections": [list(s.key()) for s in c.provenance]}
                       for c in res],
        }
        _emit(examples.to_json(doc), args.output)
        return EXIT_OK
    if args.format == "csv":
        lines = ["value,selections"]
        lines += [f"{c.value!r},{' '.join('/'.join(map(str, s.key())) for s in c.provenance)}" for c in res]
        _emit("\n".join(lines) + "\n", args.output)
        return EXIT_OK
    out = [f"# {len(res)} distinct values; depths {list(res.depths)}, cutoff {cutoff:g}, "
           f"{res.visited} selections evaluated"]
    for c in res:
        keys = " ".join("(" + ",".join(map(str, s.key())) + ")" for s in c.provenance)
        out.append(f"{c.value:.17g}  {keys}")
    _emit("\n".join(out) + "\n", args.output)
    return EXIT_OK


# -- example -----------------------------------------------------------------

def _write_outputs(args, name, doc, reports, plot) -> None:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{name}.json").write_text(examples.to_json(doc), encoding="utf-8")
    (out / f"{name}.csv").write_text(examples.reports_to_csv(reports), encoding="utf-8")
    if not args.no_plot:
        (out / f"{name}.svg").write_text(plot, encoding="utf-8")


def cmd_example_bi(args) -> int:
    e = _exponents(args)
    big, small = (ComponentDomain.interval(v) for v in args.L)
    ks = parse_range(args.k)
    reports = examples.bi_union_reports(e, big, small, ks, args.n, depth=args.depth,
                                         workers=config.worker_count())
    certs = [examples.ls_mismatch_certificate(r) for r in reports]
    params = {"p": e.p, "q": e.q, "L": list(args.L), "k": args.k, "n": args.n, "depth": args.depth}
    doc = examples.document("example bi", params, reports, certs)
    plot = svg.scatter([r.spectrum for r in reports], [r.limit for r in reports],
                       "union eigenvalues below each limit (log scale)", [f"k={r.k}" for r in reports])
    _write_outputs(args, args.name or "bi", doc, reports, plot)
    for r, c in zip(reports, certs):
        print(f"k={r.k}: limit {r.limit:.15g}; lam_(1,k) = {r.table[0][1]:.15g}; "
              f"final gap {r.table[-1][2]:.3e}; {c.count} distinct values in (lam_(1,k), limit]")
    return EXIT_OK


def cmd_example_tail(args) -> int:
    e = _exponents(args)
    radii = None
    if args.radii is not None:
        try:
            radii = [float(t) for t in args.radii.split(",")]
        except ValueError:
            raise ConfigError(f"--radii expects comma-separated numbers, got {args.radii!r}") from None
    rep = examples.shrinking_tail_report(e, args.N, args.r0, args.rho, args.n, radii=radii)
    params = {"p": e.p, "q": e.q, "N": args.N, "r0": args.r0, "rho": args.rho, "n": args.n,
              "radii": radii}
    doc = examples.document("example tail", params, [rep])
    plot = svg.scatter([[float(v) for v in rep.values]], [rep.limit],
                       "first eigenvalues of truncated unions (log scale)", ["lam_n"])
    _write_outputs(args, args.name or "tail", doc, [rep], plot)
    print(f"lam(T) = {rep.limit:.15g} +/- {rep.limit_error:.3e}; "
          f"lam_{rep.n_max} - lam(T) = {rep.gaps[-1]:.3e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pqspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eigen", help="eigenvalues of an interval or a ball")
    _add_exponents(p)
    p.add_argument("--calibration", action="store_true", help="allow p == q (classical p-Laplacian)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--interval", type=float, metavar="L")
    g.add_argument("--ball", type=float, nargs=2, metavar=("N", "R"))
    p.add_argument("--k", default="1", help="index or range such as 1..5")
    p.add_argument("--direct", action="store_true", help="solve each k by bisection on mu")
    p.add_argument("--verify", action="store_true", help="compare lam_1 to an independent method")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--output", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_eigen)

    for name, func, hlp in (("combine", cmd_combine, "combine one selection"),
                            ("enumerate", cmd_enumerate, "enumerate union eigenvalues")):
        p = sub.add_parser(name, help=hlp)
        _add_exponents(p)
        p.add_argument("--spectra", required=True, help="file with one eigenvalue list per piece")
        if name == "combine":
            p.add_argument("--select", required=True,
                           help="comma-separated 1-based index per piece, 0 leaves a piece out")
            p.add_argument("--format", choices=("table", "json"), default="table")
        else:
            p.add_argument("--cutoff", type=float)
            p.add_argument("--budget", type=int, default=config.ENUMERATION_BUDGET)
            p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--output")
        p.set_defaults(func=func)

    ex = sub.add_parser("example", help="write a counterexample report")
    exsub = ex.add_subparsers(dest="which", required=True, parser_class=_Parser)
    for name in ("bi", "tail"):
        p = exsub.add_parser(name)
        p.add_argument("--p", type=float, default=3.0)
        p.add_argument("--q", type=float, default=2.0)
        p.add_argument("--n", type=int, default=50 if name == "bi" else 30)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--name", help="file stem (default: the example name)")
        p.add_argument("--no-plot", action="store_true")
        if name == "bi":
            p.add_argument("--L", type=float, nargs=2, default=[1.0, 0.25], metavar=("BIG", "SMALL"))
            p.add_argument("--k", default="1")
            p.add_argument("--depth", type=int, help="eigenvalues of the small piece to enumerate")
            p.set_defaults(func=cmd_example_bi)
        else:
            p.add_argument("--N", type=int, default=1)
            p.add_argument("--r0", type=float, default=0.5)
            p.add_argument("--rho", type=float, default=0.5)
            p.add_argument("--radii", help="explicit comma-separated radii instead of r0 * rho^i")
            p.set_defaults(func=cmd_example_tail)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"pqspec: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"pqspec: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
