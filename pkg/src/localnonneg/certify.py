"""Certificates of local nonnegativity at the origin.

The pipeline works on the Newton principal part ``f_N`` of ``f``:

1. every vertex monomial of ``f_N`` must be an even power with positive
   coefficient;
2. ``f_N`` is sign-substituted into each orthant (up to parity symmetry),
   giving ``h``; a multiplier exponent ``m`` with all coefficients of
   ``h * (h+ - h-)^m`` nonnegative shows every face of ``h`` is positive
   on the open positive orthant;
3. from ``m`` an explicit ``tau`` with ``h >= tau * h^V`` is built, and
   each tail term ``a * x^beta`` is absorbed below an explicit radius.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .newton import (
    AnchorDecomposition,
    Face,
    anchor,
    convex_combination,
    enumerate_faces,
    face_polynomial,
    frac_str,
    newton_polytope,
    principal_part,
    vertex_characteristic,
)
from .polyring import SparsePolynomial, apply_signs, evaluate, format_poly

CERTIFIED = "certified"
REFUTED = "refuted"
UNKNOWN = "unknown"

HYPOTHESIS_FAILS = "hypothesis-fails"
BUDGET_EXHAUSTED = "budget-exhausted"


class BudgetExceeded(RuntimeError):
    """The multiplier product outgrew the configured term or bit budget."""


@dataclass
class CertifyOptions:
    m_max: int = 10
    max_terms: int = 200_000
    max_bits: int = 4096
    seed: int = 0
    random_samples: int = 64


@dataclass
class HandelmanResult:
    m: int
    product: SparsePolynomial
    k1: Fraction


@dataclass
class TauBound:
    tau: Fraction
    k: Fraction
    d: int
    m: int
    k1: Fraction


@dataclass
class OrthantClass:
    signs: tuple[int, ...]
    members: list[tuple[int, ...]]


@dataclass
class OrthantCertificate:
    orthant: OrthantClass
    handelman: HandelmanResult
    tau: TauBound


@dataclass
class TailAnchor:
    decomposition: AnchorDecomposition
    coefficient: Fraction


@dataclass
class Certificate:
    principal: SparsePolynomial
    tail_anchors: list[TailAnchor]
    T: int
    orthants: list[OrthantCertificate]
    radius: float


@dataclass
class VertexWitness:
    vertex: tuple[int, ...]
    coefficient: Fraction
    reason: str


@dataclass
class FaceWitness:
    """A face polynomial of ``f_N`` that is <= 0 at ``signs * point``."""

    signs: tuple[int, ...]
    face: Face
    face_poly: SparsePolynomial
    point: tuple[Fraction, ...]
    value: Fraction

    @property
    def original_point(self) -> tuple[Fraction, ...]:
        return tuple(s * x for s, x in zip(self.signs, self.point))


@dataclass
class Verdict:
    kind: str
    certificate: Certificate | None = None
    witness: object | None = None  # refutation evidence (refute.CurveWitness / PointWitness)
    reason: str = ""
    face_witness: VertexWitness | FaceWitness | None = None
    detail: str = ""
    path: str = ""


@dataclass
class HessianReport:
    applicable: bool
    matrix: list[list[Fraction]]
    minors: list[Fraction]
    positive_definite: bool

    @property
    def certifies(self) -> bool:
        return self.applicable and self.positive_definite


# --------------------------------------------------------------------------
# orthants and parity

def orthant_classes(f_N: SparsePolynomial) -> list[OrthantClass]:
    """Sign patterns giving distinct ``f_N(s * x)``, in lexicographic order (+1 first)."""
    n = f_N.arity
    free = [k for k in range(n) if any(e[k] % 2 for e in f_N.terms)]
    global_flip = bool(free) and all(sum(e) % 2 == 0 for e in f_N.terms)
    classes: dict[tuple[int, ...], OrthantClass] = {}
    for sigma in itertools.product((1, -1), repeat=n):
        key = tuple(sigma[k] for k in free)
        if global_flip and key[0] == -1:
            key = tuple(-s for s in key)
        cls = classes.get(key)
        if cls is None:
            rep = [1] * n
            for k, s in zip(free, key):
                rep[k] = s
            cls = classes[key] = OrthantClass(tuple(rep), [])
        cls.members.append(tuple(sigma))
    return list(classes.values())


def vertex_parity_check(f_N: SparsePolynomial) -> VertexWitness | None:
    """None when every vertex monomial is an even power with positive coefficient."""
    np_ = newton_polytope(f_N)
    for v in np_.vertices:
        c = f_N.terms[v]
        if any(e % 2 for e in v):
            return VertexWitness(v, c, "odd exponent")
        if c < 0:
            return VertexWitness(v, c, "negative coefficient")
    return None


# --------------------------------------------------------------------------
# multiplier search

def handelman_product(h: SparsePolynomial, m: int) -> SparsePolynomial:
    """``h * (h+ - h-)^m`` through the generic polynomial arithmetic."""
    g = SparsePolynomial(h.vars, {e: abs(c) for e, c in h.terms.items()})
    return h * g ** m


def _int_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    get = out.get
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def handelman_search(h: SparsePolynomial, m_max: int = 10, max_terms: int = 200_000,
                     max_bits: int = 4096) -> HandelmanResult | None:
    """Smallest ``m <= m_max`` with ``h * (h+ - h-)^m`` coefficientwise nonnegative.

    Returns None when no such ``m`` exists up to ``m_max`` and raises
    :class:`BudgetExceeded` if the product grows past the limits first.
    """
    if h.is_zero():
        raise ValueError("multiplier search on the zero polynomial")
    # integer arithmetic on a positive rescaling; signs are unchanged
    scale = math.lcm(*(c.denominator for c in h.terms.values()))
    hi = {e: int(c * scale) for e, c in h.terms.items()}
    g = {e: abs(c) for e, c in hi.items()}
    vertices = newton_polytope(h).vertices
    prod = hi
    for m in range(m_max + 1):
        if m:
            prod = _int_mul(prod, g)
            if len(prod) > max_terms:
                raise BudgetExceeded(f"{len(prod)} terms at m={m} (limit {max_terms})")
            bits = max(abs(c).bit_length() for c in prod.values())
            if bits > max_bits:
                raise BudgetExceeded(f"{bits}-bit coefficient at m={m} (limit {max_bits})")
        if all(c > 0 for c in prod.values()):
            div = Fraction(scale) ** (m + 1)
            product = SparsePolynomial(h.vars, {e: c / div for e, c in prod.items()})
            k1 = min(product.terms[tuple((m + 1) * x for x in v)] for v in vertices)
            return HandelmanResult(m, product, k1)
    return None


def tau_bound(h: SparsePolynomial, hr: HandelmanResult) -> TauBound:
    """Explicit ``tau`` with ``h >= tau * h^V`` on the positive orthant."""
    np_ = newton_polytope(h)
    d = len(np_.vertex_indices)
    k = Fraction(0)
    for beta, c in h.terms.items():
        cc = convex_combination(np_, beta)
        k += abs(c) / cc.k_beta
    tau = hr.k1 / (k * d) ** hr.m
    return TauBound(tau, k, d, hr.m, hr.k1)


# --------------------------------------------------------------------------
# radius

def _root_floor(q: Fraction, s: Fraction) -> float:
    """A double ``r`` with ``r**s <= q`` and ``r`` as close as float allows."""
    if q <= 0:
        return 0.0
    try:
        r = float(q) ** (1 / float(s))
    except OverflowError:
        r = math.inf
    if r >= 1:
        return 1.0
    p, den = s.numerator, s.denominator
    bound = q ** den
    while r > 0 and Fraction(r) ** p > bound:
        r = math.nextafter(r, 0.0)
    return r


def radius_bound(orthants: Sequence[OrthantCertificate], anchors: Sequence[TailAnchor]) -> float:
    """Half-width ``eps`` of a box around the origin on which ``f >= 0``.

    Each tail term ``a * x^beta = x^beta_hat * a * x^delta`` is dominated by
    ``tau * k_beta_hat / T * x^beta_hat`` once ``|x^delta| <= eps^|delta|``.
    """
    if not orthants:
        raise ValueError("radius requested before any orthant was certified")
    T = len(anchors)
    if T == 0:
        return 1.0
    eps = 1.0
    for oc in orthants:
        for ta in anchors:
            a = ta.decomposition
            q = oc.tau.tau * a.k_beta_hat / (T * abs(ta.coefficient))
            eps = min(eps, _root_floor(q, a.delta_norm))
    return eps


def _fraction_floor_float(q: Fraction) -> float:
    r = float(q)
    while Fraction(r) > q:
        r = math.nextafter(r, 0.0)
    return r


# --------------------------------------------------------------------------
# falsification sampling

def sample_points(n: int, seed: int = 0, count: int = 64) -> list[tuple[Fraction, ...]]:
    """Fixed positive sample points: all-ones, 2^{+-k} perturbations, seeded randoms."""
    one = Fraction(1)
    pts = [(one,) * n]
    for i in range(n):
        for k in range(1, 5):
            for v in (Fraction(2) ** k, Fraction(1, 2 ** k)):
                p = [one] * n
                p[i] = v
                pts.append(tuple(p))
    rng = random.Random(seed)
    for _ in range(count):
        pts.append(tuple(Fraction(rng.randint(1, 32), rng.randint(1, 32)) for _ in range(n)))
    return pts


def falsify_faces(f_N: SparsePolynomial, faces: Sequence[Face], classes: Sequence[OrthantClass],
                  points: Sequence[Sequence[Fraction]]) -> FaceWitness | None:
    """First (class, point, face) with a face polynomial <= 0, if any."""
    base = [face_polynomial(f_N, F) for F in faces]
    for cls in classes:
        polys = [apply_signs(fp, cls.signs) for fp in base]
        for x in points:
            for F, fp in zip(faces, polys):
                val = evaluate(fp, x)
                if val <= 0:
                    return FaceWitness(cls.signs, F, fp, tuple(x), val)
    return None


# --------------------------------------------------------------------------
# pipeline

def _anchor_tail(f_N: SparsePolynomial, tail: SparsePolynomial) -> list[TailAnchor]:
    np_ = newton_polytope(f_N)
    return [TailAnchor(anchor(np_, beta), tail.terms[beta]) for beta in tail.support]


def certify_local_nonnegative(f: SparsePolynomial, options: CertifyOptions | None = None) -> Verdict:
    """Try to certify ``f >= 0`` near the origin; see the module docstring."""
    opts = options or CertifyOptions()
    n = f.arity
    c = f.constant_term()
    if c < 0:
        from .refute import PointWitness

        return Verdict(REFUTED, witness=PointWitness((Fraction(0),) * n, c),
                       reason="negative-at-origin", path="constant-term")
    if c > 0:
        total = sum(abs(a) for a in f.terms.values())
        cert = Certificate(SparsePolynomial.constant(f.vars, c), [], 0, [],
                           min(1.0, _fraction_floor_float(c / total)))
        return Verdict(CERTIFIED, certificate=cert, reason="positive-at-origin", path="constant-term")
    if f.is_zero():
        return Verdict(CERTIFIED, certificate=Certificate(f, [], 0, [], 1.0),
                       reason="zero-polynomial", path="zero")

    f_N, tail = principal_part(f)
    bad_vertex = vertex_parity_check(f_N)
    if bad_vertex is not None:
        return Verdict(UNKNOWN, reason=HYPOTHESIS_FAILS, face_witness=bad_vertex,
                       detail=f"vertex {bad_vertex.vertex}: {bad_vertex.reason}")

    faces = enumerate_faces(newton_polytope(f_N))
    classes = orthant_classes(f_N)
    fw = falsify_faces(f_N, faces, classes, sample_points(n, opts.seed, opts.random_samples))
    if fw is not None:
        return Verdict(UNKNOWN, reason=HYPOTHESIS_FAILS, face_witness=fw,
                       detail=f"face {format_poly(fw.face_poly)} = {fw.value} at {_pt(fw.point)}"
                              f" in orthant {fw.signs}")

    certs = []
    for cls in classes:
        h = apply_signs(f_N, cls.signs)
        try:
            hr = handelman_search(h, opts.m_max, opts.max_terms, opts.max_bits)
        except BudgetExceeded as exc:
            return Verdict(UNKNOWN, reason=BUDGET_EXHAUSTED, detail=f"orthant {cls.signs}: {exc}")
        if hr is None:
            return Verdict(UNKNOWN, reason=BUDGET_EXHAUSTED,
                           detail=f"orthant {cls.signs}: no multiplier with m <= {opts.m_max}")
        certs.append(OrthantCertificate(cls, hr, tau_bound(h, hr)))

    anchors = _anchor_tail(f_N, tail)
    cert = Certificate(f_N, anchors, len(anchors), certs, radius_bound(certs, anchors))
    return Verdict(CERTIFIED, certificate=cert, path="newton-principal-part")


def _pt(x) -> str:
    return "(" + ", ".join(str(v) for v in x) + ")"


# --------------------------------------------------------------------------
# classical second-order test and corollaries

def _det(M: list[list[Fraction]]) -> Fraction:
    A = [list(r) for r in M]
    n = len(A)
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if A[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            A[k], A[p] = A[p], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[k])]
    return det


def _leading_minors(H: list[list[Fraction]]) -> list[Fraction]:
    return [_det([row[:k] for row in H[:k]]) for k in range(1, len(H) + 1)]


def hessian_check(f: SparsePolynomial) -> HessianReport:
    """Exact Hessian at the origin and Sylvester's criterion."""
    n = f.arity
    zero = (0,) * n

    def unit(*idx):
        e = [0] * n
        for i in idx:
            e[i] += 1
        return tuple(e)

    applicable = f.coefficient(zero) == 0 and all(f.coefficient(unit(i)) == 0 for i in range(n))
    H = [[f.coefficient(unit(i, j)) * (2 if i == j else 1) for j in range(n)] for i in range(n)]
    minors = _leading_minors(H)
    pd = n > 0 and all(m > 0 for m in minors)
    return HessianReport(applicable, H, minors, pd)


def hessian_radius(f: SparsePolynomial, report: HessianReport) -> float:
    """Sound box radius for the second-order test.

    If ``H - 2*mu*I`` is positive definite the quadratic part is at least
    ``mu * |x|_inf^2``, and terms of degree >= 3 are at most
    ``eps * S * |x|_inf^2`` on ``[-eps, eps]^n`` with ``S`` their total
    absolute coefficient.
    """
    if not report.certifies:
        raise ValueError("Hessian is not positive definite at the origin")
    n = f.arity
    H = report.matrix
    mu = min(H[i][i] for i in range(n)) / 2
    for _ in range(200):
        shifted = [[H[i][j] - (2 * mu if i == j else 0) for j in range(n)] for i in range(n)]
        if all(m > 0 for m in _leading_minors(shifted)):
            break
        mu /= 2
    else:
        return 0.0
    S = sum(abs(c) for e, c in f.terms.items() if sum(e) >= 3)
    if S == 0:
        return 1.0
    return min(1.0, _fraction_floor_float(mu / S))


def corollary_flags(f: SparsePolynomial, verdict: Verdict) -> dict[str, bool]:
    certified = verdict.kind == CERTIFIED
    if f.is_zero():
        return {"homogeneous_pd": False, "isolated_singularity": False}
    f_N, _ = principal_part(f)
    homogeneous = certified and f_N.is_homogeneous()
    isolated = False
    if certified and f.arity:
        verts = set(vertex_characteristic(f_N).terms)
        isolated = all(
            any(v[i] > 0 and v[i] % 2 == 0 and sum(v) == v[i] for v in verts)
            for i in range(f.arity)
        )
    return {"homogeneous_pd": homogeneous, "isolated_singularity": isolated}


# --------------------------------------------------------------------------
# serialisation

def certificate_json(cert: Certificate) -> dict:
    return {
        "principal_part": format_poly(cert.principal),
        "orthants": [
            {
                "signs": list(oc.orthant.signs),
                "class": [list(s) for s in oc.orthant.members],
                "m": oc.handelman.m,
                "k1": frac_str(oc.handelman.k1),
                "k": frac_str(oc.tau.k),
                "d": oc.tau.d,
                "tau": frac_str(oc.tau.tau),
            }
            for oc in cert.orthants
        ],
        "anchors": [
            {
                "beta": list(ta.decomposition.beta),
                "coefficient": frac_str(ta.coefficient),
                "beta_hat": [frac_str(v) for v in ta.decomposition.beta_hat],
                "delta": [frac_str(v) for v in ta.decomposition.delta],
                "k_beta_hat": frac_str(ta.decomposition.k_beta_hat),
            }
            for ta in cert.tail_anchors
        ],
        "T": cert.T,
        "radius": cert.radius,
    }


def face_witness_json(w: VertexWitness | FaceWitness) -> dict:
    if isinstance(w, VertexWitness):
        return {
            "type": "vertex",
            "vertex": list(w.vertex),
            "coefficient": frac_str(w.coefficient),
            "failure_mode": w.reason,
        }
    return {
        "type": "face",
        "signs": list(w.signs),
        "members": [list(e) for e in w.face.exponents],
        "normal": [frac_str(v) for v in w.face.normal],
        "face_polynomial": format_poly(w.face_poly),
        "point": [frac_str(v) for v in w.point],
        "value": frac_str(w.value),
    }


def verdict_json(verdict: Verdict) -> dict:
    from .refute import witness_json

    out: dict = {
        "verdict": verdict.kind,
        "reason": verdict.reason,
        "path": verdict.path,
        "detail": verdict.detail,
    }
    if verdict.certificate is not None:
        out.update(certificate_json(verdict.certificate))
    if verdict.witness is not None:
        out["witness"] = witness_json(verdict.witness)
    elif verdict.face_witness is not None:
        out["witness"] = face_witness_json(verdict.face_witness)
    return out


def hessian_json(report: HessianReport) -> dict:
    return {
        "applicable": report.applicable,
        "matrix": [[frac_str(v) for v in row] for row in report.matrix],
        "leading_minors": [frac_str(v) for v in report.minors],
        "positive_definite": report.positive_definite,
    }
