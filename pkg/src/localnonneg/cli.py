"""Command line front end.

Exit codes: 0 certified, 1 refuted, 2 unknown, 64 usage error, 65 bad
polynomial input, 70 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .certify import (
    BUDGET_EXHAUSTED,
    CERTIFIED,
    REFUTED,
    UNKNOWN,
    Certificate,
    CertifyOptions,
    Verdict,
    certify_local_nonnegative,
    corollary_flags,
    face_witness_json,
    hessian_check,
    hessian_json,
    hessian_radius,
    verdict_json,
)
from .newton import (
    diagram_faces,
    enumerate_faces,
    frac_str,
    newton_polytope,
    polytope_json,
    principal_part,
    vertex_characteristic,
)
from .oracle import CrossConfig, ScanTooLarge, box_minimum, cross_validate, random_corpus
from .polyring import ParseError, SparsePolynomial, format_poly, parse, parse_univariate
from .refute import curve_condition, curve_search, grid_search, witness_json

EXIT_CERTIFIED = 0
EXIT_REFUTED = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64
EXIT_DATAERR = 65
EXIT_SOFTWARE = 70

_EXIT = {CERTIFIED: EXIT_CERTIFIED, REFUTED: EXIT_REFUTED, UNKNOWN: EXIT_UNKNOWN}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


@dataclass
class RunConfig:
    m_max: int = 10
    budget_terms: int = 200_000
    budget_bits: int = 4096
    max_weight: int = 6
    grid_depth: int = 3
    seed: int = 0
    json: bool = False

    def certify_options(self) -> CertifyOptions:
        return CertifyOptions(self.m_max, self.budget_terms, self.budget_bits, self.seed)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m-max", type=_nonneg, default=10,
                        help="largest multiplier exponent tried (default 10)")
    common.add_argument("--budget-terms", type=_positive, default=200_000,
                        help="term limit for multiplier products (default 200000)")
    common.add_argument("--budget-bits", type=_positive, default=4096,
                        help="coefficient bit-size limit for multiplier products (default 4096)")
    common.add_argument("--max-weight", type=_positive, default=6,
                        help="largest exponent in searched curves x_i = +-t^w_i (default 6)")
    common.add_argument("--grid-depth", type=_nonneg, default=3,
                        help="grid refinement depth for point search (default 3)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled points (default 0)")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--vars", help="comma-separated variable order, e.g. x,y,z")

    parser = _Parser(prog="localnonneg",
                     description="Certify or refute local nonnegativity of a polynomial at the origin.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def add(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.add_argument("poly", help="polynomial text, or @path to read it from a file")
        return p

    add("analyze", "support, Newton polytope, diagram, principal part and Hessian")
    add("certify", "run the principal-part certificate pipeline")
    p = add("refute", "search for curves (and grid points) where f goes negative")
    p.add_argument("--curve", help="explicit curve in t, one component per variable: 't,t^2'")
    p.add_argument("--box", default="1", help="grid search half-width (default 1)")
    add("check", "Hessian test, then certify, then refute")
    p = add("oracle", "exact minimum over a lattice in [-box, box]^n")
    p.add_argument("--box", default="1", help="half-width of the box (default 1)")
    p.add_argument("--depth", type=_nonneg, default=3, help="lattice step box/2^depth (default 3)")

    p = sub.add_parser("crossval", parents=[common],
                       help="cross-validate certifier, refuter and oracle on a random corpus")
    p.add_argument("--count", type=_positive, default=200, help="corpus size (default 200)")
    return parser


def _read_poly(args) -> SparsePolynomial:
    text = args.poly
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    order = [v.strip() for v in args.vars.split(",")] if args.vars else None
    return parse(text.strip(), order)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def _emit(data: dict, lines: list[str], as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _verdict_lines(v: Verdict) -> list[str]:
    lines = [f"verdict: {v.kind}"]
    if v.reason:
        lines.append(f"reason: {v.reason}")
    if v.path:
        lines.append(f"path: {v.path}")
    if v.detail:
        lines.append(f"detail: {v.detail}")
    cert = v.certificate
    if cert is not None:
        lines.append(f"principal part: {format_poly(cert.principal)}")
        for oc in cert.orthants:
            lines.append(f"orthant {list(oc.orthant.signs)}: m={oc.handelman.m} "
                         f"k1={oc.handelman.k1} k={oc.tau.k} d={oc.tau.d} tau={oc.tau.tau}")
        for ta in cert.tail_anchors:
            a = ta.decomposition
            lines.append(f"anchor beta={list(a.beta)} coeff={ta.coefficient} "
                         f"beta_hat=[{', '.join(map(str, a.beta_hat))}] "
                         f"delta=[{', '.join(map(str, a.delta))}] k={a.k_beta_hat}")
        lines.append(f"T: {cert.T}")
        lines.append(f"radius: {cert.radius!r}")
    if v.witness is not None:
        w = witness_json(v.witness)
        lines.append("witness: " + json.dumps(w, sort_keys=True))
    elif v.face_witness is not None:
        lines.append("witness: " + json.dumps(face_witness_json(v.face_witness), sort_keys=True))
    return lines


def cmd_analyze(f: SparsePolynomial, cfg: RunConfig, args) -> int:
    if f.is_zero():
        raise UsageError("the zero polynomial has no Newton polytope")
    np_ = newton_polytope(f)
    faces = enumerate_faces(np_)
    head, tail = principal_part(f)
    diagram = diagram_faces(f)
    fv = vertex_characteristic(f)
    hess = hessian_check(f)
    data = {
        "polynomial": format_poly(f),
        "variables": list(f.vars),
        "support": [list(e) for e in f.support],
        "newton_polytope": polytope_json(np_, faces),
        "diagram_faces": [
            {"normal": [frac_str(v) for v in F.normal], "offset": frac_str(F.offset),
             "members": [list(e) for e in F.exponents]}
            for F in diagram
        ],
        "principal_part": format_poly(head),
        "tail": format_poly(tail),
        "vertex_characteristic": format_poly(fv),
        "principal_vertex_characteristic": format_poly(vertex_characteristic(head)),
        "hessian": hessian_json(hess),
    }
    lines = [
        f"polynomial: {data['polynomial']}",
        f"support: {data['support']}",
        f"vertices: {[list(v) for v in np_.vertices]}",
        f"polytope faces: {len(faces)}",
        "diagram faces:",
        *[f"  normal {[str(v) for v in F.normal]} members {[list(e) for e in F.exponents]}"
          for F in diagram],
        f"principal part: {data['principal_part']}",
        f"tail: {data['tail']}",
        f"vertex characteristic: {data['vertex_characteristic']}",
        f"hessian applicable: {hess.applicable}, positive definite: {hess.positive_definite}",
    ]
    _emit(data, lines, cfg.json)
    return 0


def cmd_certify(f: SparsePolynomial, cfg: RunConfig, args) -> int:
    v = certify_local_nonnegative(f, cfg.certify_options())
    _emit(verdict_json(v), _verdict_lines(v), cfg.json)
    return _EXIT[v.kind]


def cmd_refute(f: SparsePolynomial, cfg: RunConfig, args) -> int:
    data: dict = {"polynomial": format_poly(f)}
    if args.curve:
        parts = [c.strip() for c in args.curve.replace(";", ",").split(",")]
        try:
            curve = [parse_univariate(c) for c in parts]
        except ParseError as exc:
            raise UsageError(f"bad curve component: {exc}") from exc
        try:
            status, w = curve_condition(f, curve)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        data["curve_status"] = status
        data["verdict"] = REFUTED if w else UNKNOWN
        if w:
            data["witness"] = witness_json(w)
        lines = [f"curve: {status}", f"verdict: {data['verdict']}"]
        if w:
            lines.append("witness: " + json.dumps(data["witness"], sort_keys=True))
        _emit(data, lines, cfg.json)
        return EXIT_REFUTED if w else EXIT_UNKNOWN

    w = curve_search(f, cfg.max_weight)
    if w is not None:
        data.update(verdict=REFUTED, witness=witness_json(w))
        _emit(data, [f"verdict: {REFUTED}", "witness: " + json.dumps(data["witness"], sort_keys=True)],
              cfg.json)
        return EXIT_REFUTED
    box = _rational(args.box)
    if not 0 < box <= 1:
        raise UsageError("--box must lie in (0, 1]")
    g = grid_search(f, box, cfg.grid_depth)
    data.update(verdict=UNKNOWN, grid_evaluations=g.evaluations, grid_capped=g.capped)
    lines = [f"verdict: {UNKNOWN}", f"no failing curve with weights <= {cfg.max_weight}",
             f"grid evaluations: {g.evaluations}{' (capped)' if g.capped else ''}"]
    if g.witness is not None:
        # a negative value at a fixed point does not refute nonnegativity near the origin
        data["reason"] = "negative-point-in-box"
        data["witness"] = witness_json(g.witness)
        lines.append(f"negative point in box {box}: " + json.dumps(data["witness"], sort_keys=True))
    _emit(data, lines, cfg.json)
    return EXIT_UNKNOWN


def run_check(f: SparsePolynomial, cfg: RunConfig) -> tuple[Verdict, dict]:
    """Consolidated verdict; Hessian annotates, the principal-part route decides."""
    hess = hessian_check(f)
    v = certify_local_nonnegative(f, cfg.certify_options())
    if v.kind == UNKNOWN and v.reason == BUDGET_EXHAUSTED and hess.certifies:
        radius = hessian_radius(f, hess)
        v = Verdict(CERTIFIED, certificate=Certificate(f, [], 0, [], radius),
                    reason=v.reason, detail=v.detail, path="hessian-path")
    if v.kind == UNKNOWN:
        w = curve_search(f, cfg.max_weight)
        if w is not None:
            v = Verdict(REFUTED, witness=w, reason="curve", detail=v.detail, path="curve-search",
                        face_witness=v.face_witness)
    extra = {"hessian": hessian_json(hess), "corollaries": corollary_flags(f, v)}
    return v, extra


def cmd_check(f: SparsePolynomial, cfg: RunConfig, args) -> int:
    v, extra = run_check(f, cfg)
    data = verdict_json(v)
    data.update(extra)
    lines = _verdict_lines(v)
    h = extra["hessian"]
    lines.append(f"hessian: applicable={h['applicable']} positive_definite={h['positive_definite']}")
    for k, val in extra["corollaries"].items():
        lines.append(f"{k}: {val}")
    _emit(data, lines, cfg.json)
    return _EXIT[v.kind]


def cmd_oracle(f: SparsePolynomial, cfg: RunConfig, args) -> int:
    box = _rational(args.box)
    if box <= 0:
        raise UsageError("--box must be positive")
    try:
        scan = box_minimum(f, box, args.depth)
    except ScanTooLarge as exc:
        raise UsageError(str(exc)) from exc
    data = {
        "box": frac_str(scan.box),
        "depth": scan.step_exponent,
        "minimum": frac_str(scan.minimum),
        "argmin": [frac_str(v) for v in scan.argmin],
        "evaluations": scan.evaluations,
    }
    lines = [f"{k}: {v}" for k, v in data.items()]
    _emit(data, lines, cfg.json)
    return 0 if scan.minimum >= 0 else 1


def cmd_crossval(cfg: RunConfig, args) -> int:
    corpus = random_corpus(args.count, cfg.seed)
    report = cross_validate(corpus, CrossConfig(certify=cfg.certify_options(), max_weight=cfg.max_weight))
    sys.stdout.write(report.to_json() if cfg.json else report.to_tsv())
    return 0 if report.ok else 1


_COMMANDS = {
    "analyze": cmd_analyze,
    "certify": cmd_certify,
    "refute": cmd_refute,
    "check": cmd_check,
    "oracle": cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.m_max, args.budget_terms, args.budget_bits, args.max_weight,
                    args.grid_depth, args.seed, args.json)
    try:
        if args.command == "crossval":
            return cmd_crossval(cfg, args)
        try:
            f = _read_poly(args)
        except ParseError as exc:
            print(f"localnonneg: parse error: {exc}", file=sys.stderr)
            if exc.text:
                print(f"  {exc.text}\n  {' ' * exc.pos}^", file=sys.stderr)
            return EXIT_DATAERR
        except OSError as exc:
            print(f"localnonneg: {exc}", file=sys.stderr)
            return EXIT_DATAERR
        return _COMMANDS[args.command](f, cfg, args)
    except UsageError as exc:
        print(f"localnonneg: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"localnonneg: internal error: {exc!r}", file=sys.stderr)
        return EXIT_SOFTWARE


if __name__ == "__main__":
    sys.exit(main())
