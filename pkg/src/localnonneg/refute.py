"""Refuting local nonnegativity.

If ``f >= 0`` near the origin then along any polynomial curve ``phi``
through the origin ``f(phi(t))`` is identically zero or starts with an
even-degree term with positive coefficient. A curve violating this is a
proof that ``f`` is *not* locally nonnegative. Grid search only finds
negative values at concrete points, which is weaker evidence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .newton import frac_str
from .polyring import (
    SparsePolynomial,
    UnivariatePolynomial,
    evaluate,
    format_poly,
    lowest_term,
    substitute_curve,
)

PASS = "pass"
VANISHES = "vanishes"
FAIL = "fail"

NEGATIVE_COEFFICIENT = "negative-coefficient"
ODD_DEGREE = "odd-degree"


@dataclass
class CurveWitness:
    curve: list[UnivariatePolynomial]
    lowest_degree: int
    lowest_coefficient: Fraction
    failure_mode: str
    # compact description when the curve is x_i = s_i * c_i * t^w_i
    signs: tuple[int, ...] | None = None
    weights: tuple[int, ...] | None = None
    coeffs: tuple[int, ...] | None = None


@dataclass
class PointWitness:
    point: tuple[Fraction, ...]
    value: Fraction


@dataclass
class GridOutcome:
    witness: PointWitness | None
    evaluations: int
    capped: bool = False


def monomial_curve(signs: Sequence[int], weights: Sequence[int],
                   coeffs: Sequence[int] | None = None) -> list[UnivariatePolynomial]:
    coeffs = coeffs or [1] * len(weights)
    return [UnivariatePolynomial({w: s * c}) for s, w, c in zip(signs, weights, coeffs)]


def _classify(lowest: tuple[int, Fraction] | None) -> tuple[str, str | None]:
    if lowest is None:
        return VANISHES, None
    deg, coeff = lowest
    if coeff < 0:
        return FAIL, NEGATIVE_COEFFICIENT
    if deg % 2:
        return FAIL, ODD_DEGREE
    return PASS, None


def curve_condition(f: SparsePolynomial, curve: Sequence[UnivariatePolynomial]
                    ) -> tuple[str, CurveWitness | None]:
    """``("pass"|"vanishes"|"fail", witness)`` for the curve ``curve``."""
    comp = substitute_curve(f, curve)
    lowest = lowest_term(comp)
    status, mode = _classify(lowest)
    if status != FAIL:
        return status, None
    return status, CurveWitness(list(curve), lowest[0], lowest[1], mode)


def _monomial_lowest(f: SparsePolynomial, scaled: Sequence[int], weights: Sequence[int]
                     ) -> tuple[int, Fraction] | None:
    # f(scaled_i * t^w_i): collect by degree w.alpha, then take the lowest nonzero
    by_degree: dict[int, Fraction] = {}
    for exp, c in f.terms.items():
        d = sum(w * e for w, e in zip(weights, exp))
        v = c
        for s, e in zip(scaled, exp):
            if e:
                v *= s ** e
        by_degree[d] = by_degree.get(d, 0) + v
    for d in sorted(by_degree):
        if by_degree[d]:
            return d, by_degree[d]
    return None


def _weight_vectors(n: int, max_weight: int):
    ws = itertools.product(range(1, max_weight + 1), repeat=n)
    return sorted(ws, key=lambda w: (sum(w), w))


def curve_search(f: SparsePolynomial, max_weight: int = 6, max_coeff: int = 1) -> CurveWitness | None:
    """First failing monomial curve ``x_i = s_i c_i t^w_i``.

    Curves are tried by increasing ``sum(w)``, then ``w``, signs (+1
    first) and coefficients, all lexicographically.
    """
    if max_weight < 1:
        raise ValueError("max_weight must be at least 1")
    n = f.arity
    if n == 0 or f.is_zero():
        return None
    sign_list = list(itertools.product((1, -1), repeat=n))
    coeff_list = list(itertools.product(range(1, max_coeff + 1), repeat=n))
    for w in _weight_vectors(n, max_weight):
        for s in sign_list:
            for c in coeff_list:
                scaled = [si * ci for si, ci in zip(s, c)]
                lowest = _monomial_lowest(f, scaled, w)
                status, mode = _classify(lowest)
                if status == FAIL:
                    return CurveWitness(monomial_curve(s, w, c), lowest[0], lowest[1], mode,
                                        tuple(s), tuple(w), tuple(c))
    return None


def grid_search(f: SparsePolynomial, box, depth: int, max_evaluations: int = 1_000_000,
                allow_large_box: bool = False) -> GridOutcome:
    """Exact scan of the nested grids ``{ +-box * i / 2^k }``, ``k = 0..depth``.

    Returns the first point with ``f < 0``; coarser levels come first and
    points already seen are not re-evaluated.
    """
    box = Fraction(box)
    if box <= 0:
        raise ValueError("box must be positive")
    if box > 1 and not allow_large_box:
        raise ValueError("box must be at most 1")
    n = f.arity
    seen: set = set()
    count = 0
    for k in range(depth + 1):
        step = 2 ** k
        coords = [box * Fraction(i, step) for i in range(-step, step + 1)]
        for pt in itertools.product(coords, repeat=n):
            if pt in seen:
                continue
            seen.add(pt)
            if count >= max_evaluations:
                return GridOutcome(None, count, capped=True)
            count += 1
            v = evaluate(f, pt)
            if v < 0:
                return GridOutcome(PointWitness(pt, v), count)
    return GridOutcome(None, count)


def verify_witness(f: SparsePolynomial, w: CurveWitness | PointWitness) -> bool:
    """Independent re-check: explicit curve composition, or exact evaluation."""
    if isinstance(w, PointWitness):
        v = evaluate(f, w.point)
        return v < 0 and v == w.value
    status, again = curve_condition(f, w.curve)
    return (status == FAIL and again.lowest_degree == w.lowest_degree
            and again.lowest_coefficient == w.lowest_coefficient)


def witness_json(w: CurveWitness | PointWitness) -> dict:
    if isinstance(w, PointWitness):
        return {"type": "point", "point": [frac_str(v) for v in w.point], "value": frac_str(w.value)}
    if w.weights is not None:
        curve = {"signs": list(w.signs), "weights": list(w.weights), "coeffs": list(w.coeffs)}
    else:
        curve = {"components": [format_poly(c.as_sparse()) for c in w.curve]}
    return {
        "type": "curve",
        "curve": curve,
        "lowest_degree": w.lowest_degree,
        "lowest_coefficient": frac_str(w.lowest_coefficient),
        "failure_mode": w.failure_mode,
    }
