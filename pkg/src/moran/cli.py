"""Command-line front end.

Exit codes: 0 = verdict computed (even NotSpectral/NotTile), 1 = input
error, 2 = resource bound hit (Unknown verdict or budget).  All rationals
print as p/q; floats print as shortest round-trip decimals; CSV uses ','
and '\\n'.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence, TextIO

from . import fuglede, spectra, system, tiling
from .errors import (BudgetError, HorizonError, MoranError, NotSpectralError,
                     ParseError, PrecisionError)
from .fourier import MeasureWindow
from .system import format_rational, parse_rational


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_system(path: str) -> system.MoranSystem:
    return system.parse_system(_read(path))


def _load_candidates(path: str) -> spectra.CandidateSet:
    return spectra.parse_candidates(_read(path))


def _load_digits(path: str) -> list[int]:
    values = []
    for lineno, raw in enumerate(_read(path).splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            value = int(line)
        except ValueError as exc:
            raise ParseError(f"line {lineno}: not an integer: {line!r}") from exc
        if value < 0:
            raise ParseError(f"line {lineno}: digits must be nonnegative")
        values.append(value)
    return values


def _rationals(values) -> str:
    return " ".join(format_rational(v) for v in values)


def _build_parser() -> _Parser:
    parser = _Parser(prog="moran", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def with_level(p):
        p.add_argument("system", help="system JSON file")
        p.add_argument("--level", type=int, required=True, metavar="N")
        return p

    sub.add_parser("analyze").add_argument("system")
    with_level(sub.add_parser("spectrum"))
    p = with_level(sub.add_parser("check-spectrum"))
    p.add_argument("--lambda", dest="lam", required=True, metavar="FILE")
    p = with_level(sub.add_parser("search"))
    p.add_argument("--budget", type=int, default=5000)
    p = with_level(sub.add_parser("decompose"))
    p.add_argument("--split", type=int, required=True, metavar="K")
    p.add_argument("--lambda", dest="lam", required=True, metavar="FILE")
    p = with_level(sub.add_parser("qgrid"))
    p.add_argument("--lambda", dest="lam", required=True, metavar="FILE")
    p.add_argument("--from", dest="start", required=True, metavar="Q")
    p.add_argument("--to", dest="stop", required=True, metavar="Q")
    p.add_argument("--step", required=True, metavar="Q")
    p.add_argument("--eps", type=float, default=1e-9)
    p = sub.add_parser("tile")
    p.add_argument("digits", help="digit-set file, one integer per line")
    p.add_argument("--max-period", type=int, default=256)
    with_level(sub.add_parser("complement"))
    p = with_level(sub.add_parser("fuglede"))
    p.add_argument("--json", action="store_true", dest="as_json")
    p = sub.add_parser("tijdeman")
    p.add_argument("--a", required=True, metavar="FILE")
    p.add_argument("--b", required=True, metavar="FILE")
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    return parser


def _cmd_analyze(args, out: TextIO) -> int:
    sys_ = _load_system(args.system)
    report = system.check_convergence(sys_)
    print(f"convergence: {report.verdict}", file=out)
    print(f"certificate: {report.certificate}", file=out)
    total = "-" if report.total is None else format_rational(report.total)
    print(f"sum: {total}", file=out)
    if isinstance(sys_.tail, system.PeriodicTail):
        info = system.support_info(sys_, None)
        print(f"diameter: {format_rational(info.diameter)}", file=out)
    elif sys_.tail is None:
        info = system.support_info(sys_, sys_.prefix_length)
        print(f"diameter: {format_rational(info.diameter)}", file=out)
    else:
        print("diameter: unavailable", file=out)
    horizon = sys_.horizon
    verdict = spectra.truncation_spectral_verdict(
        sys_, horizon if horizon is not None else None)
    print(f"spectral: {verdict}", file=out)
    return 0


def _cmd_spectrum(args, out: TextIO) -> int:
    sys_ = _load_system(args.system)
    try:
        cs = spectra.canonical_spectrum(sys_, args.level)
    except NotSpectralError as exc:
        print(f"NOTSPECTRAL level={exc.level}", file=out)
        return 0
    out.write(spectra.format_candidates(cs))
    return 0


def _cmd_check_spectrum(args, out: TextIO) -> int:
    sys_ = _load_system(args.system)
    cert = spectra.is_spectrum(MeasureWindow(sys_, 1, args.level),
                               _load_candidates(args.lam))
    print(f"status: {cert.status}", file=out)
    print(f"atoms: {cert.atom_count}", file=out)
    print(f"cardinality: {len(cert.candidate)}", file=out)
    if cert.violating_pair is not None:
        print(f"violating-pair: {_rationals(cert.violating_pair)}", file=out)
    return 0


def _cmd_search(args, out: TextIO) -> int:
    sys_ = _load_system(args.system)
    found = spectra.spectrum_search(MeasureWindow(sys_, 1, args.level),
                                    budget=args.budget)
    if found is None:
        print("NONE", file=out)
    else:
        out.write(spectra.format_candidates(found))
    return 0


def _cmd_decompose(args, out: TextIO) -> int:
    sys_ = _load_system(args.system)
    result = spectra.suitable_decomposition(sys_, args.level, args.split,
                                            _load_candidates(args.lam))
    print(f"A: {_rationals(result.head)}", file=out)
    for alpha in result.head:
        part = result.parts[alpha]
        print(f"Lambda[{format_rational(alpha)}]: {_rationals(part)}", file=out)
    report = spectra.verify_decomposition(result)
    print(f"verified: {'true' if report.passed else 'false'}", file=out)
    return 0


def _cmd_qgrid(args, out: TextIO) -> int:
    sys_ = _load_system(args.system)
    window = MeasureWindow(sys_, 1, args.level)
    samples = spectra.q_grid(window, _load_candidates(args.lam),
                             parse_rational(args.start),
                             parse_rational(args.stop),
                             parse_rational(args.step), eps=args.eps)
    out.write("xi,Q\n")
    for xi, q in samples:
        out.write(f"{format_rational(xi)},{q!r}\n")
    return 0


def _cmd_tile(args, out: TextIO) -> int:
    verdict = tiling.is_integer_tile(_load_digits(args.digits),
                                     m_max=args.max_period)
    if verdict.kind == tiling.TILE:
        complement = ",".join(str(t) for t in verdict.complement)
        print(f"TILE m={verdict.period} complement={complement}", file=out)
        return 0
    if verdict.kind == tiling.NOT_TILE:
        if verdict.certificate == "T1":
            print(f"NOTTILE T1 A(1)={verdict.mask_value} "
                  f"prod={verdict.phi_product}", file=out)
        else:
            print(f"NOTTILE WINDOW width={verdict.window}", file=out)
        return 0
    print(f"UNKNOWN m_max={verdict.searched_up_to}", file=out)
    return 2


def _cmd_complement(args, out: TextIO) -> int:
    sys_ = _load_system(args.system)
    try:
        complement, cert = tiling.canonical_complement(sys_, args.level)
    except NotSpectralError as exc:
        print(f"NOTSPECTRAL level={exc.level}", file=out)
        return 0
    print(system.serialize_system(complement), file=out)
    print(f"L: {cert.length}", file=out)
    print(f"verified: {'true' if cert.verified else 'false'}", file=out)
    return 0


def _fuglede_json(report) -> dict:
    doc = {
        "level": report.level,
        "verdict": str(report.verdict),
        "interval": [format_rational(x) for x in report.interval],
    }
    if report.spectrum is not None:
        doc["spectrum"] = [format_rational(x) for x in report.spectrum]
        doc["complement"] = json.loads(
            system.serialize_system(report.complement))
        doc["L"] = report.certificate.length
        doc["convolution_uniform"] = report.convolution_uniform
        doc["kolmogorov_distance"] = format_rational(
            report.kolmogorov_distance)
    return doc


def _cmd_fuglede(args, out: TextIO) -> int:
    sys_ = _load_system(args.system)
    report = fuglede.fuglede_report(sys_, args.level)
    if args.as_json:
        print(json.dumps(_fuglede_json(report), separators=(",", ":")),
              file=out)
        return 0
    print(f"level: {report.level}", file=out)
    print(f"verdict: {report.verdict}", file=out)
    lo, hi = report.interval
    print(f"interval: [{format_rational(lo)}, {format_rational(hi)}]",
          file=out)
    if report.spectrum is not None:
        print(f"L: {report.certificate.length}", file=out)
        print(f"kolmogorov: {format_rational(report.kolmogorov_distance)}",
              file=out)
        uniform = "true" if report.convolution_uniform else "false"
        print(f"convolution_uniform: {uniform}", file=out)
        print(f"spectrum: {_rationals(report.spectrum)}", file=out)
        print(f"complement: {system.serialize_system(report.complement)}",
              file=out)
    return 0


def _cmd_tijdeman(args, out: TextIO) -> int:
    result = tiling.tijdeman_rescale(_load_digits(args.a),
                                     _load_digits(args.b),
                                     args.period, args.r)
    for x in result.scaled:
        print(x, file=out)
    return 0


_HANDLERS = {
    "analyze": _cmd_analyze,
    "spectrum": _cmd_spectrum,
    "check-spectrum": _cmd_check_spectrum,
    "search": _cmd_search,
    "decompose": _cmd_decompose,
    "qgrid": _cmd_qgrid,
    "tile": _cmd_tile,
    "complement": _cmd_complement,
    "fuglede": _cmd_fuglede,
    "tijdeman": _cmd_tijdeman,
}


def run(argv: Sequence[str], out: Optional[TextIO] = None,
        err: Optional[TextIO] = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=err)
        parser.print_usage(err)
        return 1
    try:
        return _HANDLERS[args.command](args, out)
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=err)
        return 2
    except (ParseError, HorizonError, PrecisionError, MoranError, OSError,
            ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
