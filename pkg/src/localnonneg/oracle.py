"""Brute-force ground truth and corpus-wide cross-validation.

``box_minimum`` scans a lattice exactly; it is slow but has nothing to get
wrong. ``cross_validate`` runs the certifier, the curve refuter and the
lattice scan on every polynomial of a corpus and records any disagreement.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from .certify import CERTIFIED, CertifyOptions, FaceWitness, certify_local_nonnegative
from .newton import frac_str
from .polyring import SparsePolynomial, evaluate, format_poly
from .refute import curve_search, verify_witness


class ScanTooLarge(ValueError):
    pass


@dataclass
class BoxScan:
    box: Fraction
    step_exponent: int
    minimum: Fraction
    argmin: tuple[Fraction, ...]
    evaluations: int


def box_minimum(f: SparsePolynomial, box, step_exponent: int, cap: int = 1_000_000) -> BoxScan:
    """Exact minimum of ``f`` over ``{i * box / 2^k : |i| <= 2^k}^n``."""
    box = Fraction(box)
    if box <= 0:
        raise ValueError("box must be positive")
    n = f.arity
    side = 2 ** (step_exponent + 1) + 1
    total = side ** n
    if total > cap:
        raise ScanTooLarge(f"{total} lattice points exceed the cap of {cap}")

    # f(i * P / D) * L * D^deg is an integer polynomial G(i); scan G instead
    D = box.denominator * 2 ** step_exponent
    P = box.numerator
    deg = max(f.degree(), 0)
    L = math.lcm(*(c.denominator for c in f.terms.values())) if f.terms else 1
    G = [(exp, int(c * L) * P ** sum(exp) * D ** (deg - sum(exp))) for exp, c in f.terms.items()]
    half = 2 ** step_exponent
    rng = range(-half, half + 1)
    powers = {i: [i ** e for e in range(deg + 1)] for i in rng}
    best = None
    best_pt = None
    for idx in itertools.product(rng, repeat=n):
        pw = [powers[i] for i in idx]
        v = 0
        for exp, g in G:
            t = g
            for k, e in enumerate(exp):
                if e:
                    t *= pw[k][e]
            v += t
        if best is None or v < best:
            best, best_pt = v, idx
    minimum = Fraction(best, L * D ** deg)
    argmin = tuple(Fraction(i * P, D) for i in best_pt)
    return BoxScan(box, step_exponent, minimum, argmin, total)


# --------------------------------------------------------------------------
# corpus

def random_polynomial(rng: random.Random, max_vars: int = 3, max_degree: int = 8,
                      max_terms: int = 8) -> SparsePolynomial:
    """A sparse polynomial without constant term, biased towards even pure powers."""
    n = rng.randint(1, max_vars)
    names = ("x", "y", "z", "w", "u", "v")[:n]
    terms: dict = {}
    for i in range(n):
        if rng.random() < 0.7:
            e = [0] * n
            e[i] = 2 * rng.randint(1, max_degree // 2)
            terms[tuple(e)] = rng.randint(1, 5)
    while len(terms) < rng.randint(1, max_terms):
        d = rng.randint(1, max_degree)
        e = [0] * n
        for _ in range(d):
            e[rng.randrange(n)] += 1
        c = rng.choice([-1, 1]) * rng.randint(1, 9)
        if rng.random() < 0.2:
            c = Fraction(c, rng.randint(2, 4))
        terms[tuple(e)] = c
    return SparsePolynomial(names, terms)


def random_corpus(count: int = 200, seed: int = 0, **kwargs) -> list[SparsePolynomial]:
    rng = random.Random(seed)
    return [random_polynomial(rng, **kwargs) for _ in range(count)]


@dataclass
class CrossRow:
    index: int
    polynomial: str
    verdict: str
    reason: str
    radius: float | None
    curve_witness: bool
    scan_minimum: str | None
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


@dataclass
class CrossReport:
    rows: list[CrossRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def count(self, check: str) -> int:
        """Number of rows failing ``check``."""
        return sum(1 for r in self.rows if not r.checks.get(check, True))

    def to_tsv(self) -> str:
        head = ["index", "verdict", "reason", "radius", "curve_witness", "scan_minimum",
                "certified_scan_nonneg", "never_both", "witnesses_verify", "ok", "polynomial"]
        lines = ["\t".join(head)]
        for r in self.rows:
            lines.append("\t".join(str(v) for v in [
                r.index, r.verdict, r.reason or "-", "-" if r.radius is None else repr(r.radius),
                r.curve_witness, r.scan_minimum or "-",
                r.checks["certified_scan_nonneg"], r.checks["never_both"],
                r.checks["witnesses_verify"], r.ok, r.polynomial,
            ]))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        rows = []
        for r in self.rows:
            d = asdict(r)
            d["ok"] = r.ok
            rows.append(d)
        return json.dumps({"ok": self.ok, "rows": rows}, indent=2, sort_keys=True) + "\n"


@dataclass
class CrossConfig:
    certify: CertifyOptions = field(default_factory=CertifyOptions)
    max_weight: int = 6
    scan_depth: dict[int, int] = field(default_factory=lambda: {1: 6, 2: 4, 3: 3})
    scan_cap: int = 1_000_000


def _face_witness_ok(f: SparsePolynomial, w) -> bool:
    if not isinstance(w, FaceWitness):
        return True
    return w.value <= 0 and evaluate(w.face_poly, w.point) == w.value


def cross_validate(corpus: Sequence[SparsePolynomial], config: CrossConfig | None = None) -> CrossReport:
    cfg = config or CrossConfig()
    rows = []
    for idx, f in enumerate(corpus):
        verdict = certify_local_nonnegative(f, cfg.certify)
        curve = curve_search(f, cfg.max_weight) if f.arity else None
        checks = {"certified_scan_nonneg": True, "never_both": True, "witnesses_verify": True}
        scan_min = None
        radius = None
        if verdict.kind == CERTIFIED:
            radius = verdict.certificate.radius
            if f.arity and radius > 0:
                depth = cfg.scan_depth.get(f.arity, 2)
                scan = box_minimum(f, Fraction(radius), depth, cfg.scan_cap)
                scan_min = frac_str(scan.minimum)
                checks["certified_scan_nonneg"] = scan.minimum >= 0
            checks["never_both"] = curve is None
        ws = [w for w in (curve, verdict.witness) if w is not None]
        checks["witnesses_verify"] = (all(verify_witness(f, w) for w in ws)
                                      and _face_witness_ok(f, verdict.face_witness))
        rows.append(CrossRow(idx, format_poly(f), verdict.kind, verdict.reason, radius,
                             curve is not None, scan_min, checks))
    return CrossReport(rows)
