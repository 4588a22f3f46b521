"""Newton polytopes, their faces, and the Newton diagram of a polynomial.

All geometry is exact. Faces use the *min* convention: a face is the set
of support points minimising ``normal . alpha``; ``offset`` is that
minimum. Faces of the Newton diagram are the ones whose normal can be
taken strictly positive.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lp import EQ, GE, LE, LPProblem, feasible_point, solve_lp
from .polyring import Exponent, SparsePolynomial, grlex_key


class AnchorError(RuntimeError):
    """A tail exponent could not be anchored on the principal part's polytope."""


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]
    offset: int
    members: frozenset[int]


@dataclass(frozen=True)
class Face:
    normal: tuple[Fraction, ...]
    offset: Fraction
    members: tuple[int, ...]
    exponents: tuple[Exponent, ...]

    @property
    def is_vertex(self) -> bool:
        return len(self.members) == 1


@dataclass
class NewtonPolytope:
    points: list[Exponent]
    vertex_indices: list[int]
    facets: list[Facet]
    dim: int

    @property
    def vertices(self) -> list[Exponent]:
        return [self.points[i] for i in self.vertex_indices]

    @property
    def arity(self) -> int:
        return len(self.points[0])


@dataclass(frozen=True)
class ConvexCombination:
    target: tuple[Fraction, ...]
    weights: tuple[Fraction, ...]  # aligned with NewtonPolytope.vertices
    k_beta: Fraction


@dataclass(frozen=True)
class AnchorDecomposition:
    beta: Exponent
    beta_hat: tuple[Fraction, ...]
    delta: tuple[Fraction, ...]
    k_beta_hat: Fraction

    @property
    def delta_norm(self) -> Fraction:
        return sum(self.delta, Fraction(0))


# --------------------------------------------------------------------------
# small exact linear algebra helpers

def _primitive(vec: Sequence) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to coprime integers."""
    fr = [Fraction(v) for v in vec]
    den = math.lcm(*(f.denominator for f in fr)) if fr else 1
    ints = [int(f * den) for f in fr]
    g = math.gcd(*ints) if any(ints) else 1
    return tuple(v // g for v in ints)


def _det(M: list[list[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _pivot_columns(rows: list[list[int]], ncols: int) -> list[int]:
    """Columns of a row-echelon form of ``rows`` (exact)."""
    A = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(r + 1, len(A)):
            f = A[i][c] / A[r][c]
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return pivots


def _normal_through(pts: list[tuple[int, ...]]) -> tuple[int, ...]:
    """Normal of the hyperplane through ``r`` points in ``r``-space (zero if degenerate)."""
    r = len(pts[0])
    if r == 1:
        return (1,)
    diffs = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    normal = []
    for i in range(r):
        minor = [row[:i] + row[i + 1:] for row in diffs]
        normal.append((-1) ** i * _det(minor))
    return tuple(normal)


def _dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


# --------------------------------------------------------------------------
# polytopes

def in_hull(points: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Convex weights expressing ``target`` over ``points`` or None."""
    m = len(points)
    if m == 0:
        return None
    n = len(target)
    cons = [([1] * m, EQ, 1)]
    for j in range(n):
        cons.append(([p[j] for p in points], EQ, target[j]))
    return feasible_point(cons, m)


def polytope(points: Sequence[Sequence[int]]) -> NewtonPolytope:
    """Vertices and facets of the convex hull of integer ``points``."""
    pts = [tuple(int(v) for v in p) for p in points]
    if not pts:
        raise ValueError("polytope of an empty point set")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise ValueError("points have inconsistent dimensions")
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate points")

    vertex_indices = [
        i for i, p in enumerate(pts)
        if in_hull([q for j, q in enumerate(pts) if j != i], p) is None
    ]

    base = pts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    cols = _pivot_columns(diffs, n) if diffs else []
    dim = len(cols)
    facets: list[Facet] = []
    if dim >= 1:
        proj = [tuple(p[c] for c in cols) for p in pts]
        seen: list[frozenset[int]] = []
        for combo in itertools.combinations(vertex_indices, dim):
            if any(set(combo) <= s for s in seen):
                continue
            nu = _normal_through([proj[i] for i in combo])
            if not any(nu):
                continue
            c = _dot(nu, proj[combo[0]])
            vals = [_dot(nu, q) - c for q in proj]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                nu = tuple(-v for v in nu)
                c = -c
                vals = [-v for v in vals]
            else:
                continue
            members = frozenset(i for i, v in enumerate(vals) if v == 0)
            seen.append(members)
            full = [0] * n
            for c_idx, v in zip(cols, nu):
                full[c_idx] = v
            full = _primitive(full)
            facets.append(Facet(full, _dot(full, pts[combo[0]]), members))
    facets.sort(key=lambda f: sorted(f.members))
    return NewtonPolytope(pts, vertex_indices, facets, dim)


def enumerate_faces(np_: NewtonPolytope) -> list[Face]:
    """All nonempty faces, vertices through the whole polytope.

    Proper faces are the nonempty intersections of facets; the witness
    normal of a face is the sum of the normals of the facets containing it.
    """
    everything = frozenset(range(len(np_.points)))
    sets = {f.members for f in np_.facets}
    frontier = set(sets)
    while frontier:
        new = set()
        for a in frontier:
            for b in sets:
                c = a & b
                if c and c not in sets:
                    new.add(c)
        sets |= new
        frontier = new
    sets.add(everything)

    n = np_.arity
    faces = []
    for s in sets:
        if s == everything:
            normal = (0,) * n
        else:
            acc = [0] * n
            for f in np_.facets:
                if s <= f.members:
                    acc = [a + b for a, b in zip(acc, f.normal)]
            normal = _primitive(acc)
        members = tuple(sorted(s))
        offset = _dot(normal, np_.points[members[0]])
        for i, p in enumerate(np_.points):
            v = _dot(normal, p)
            if (i in s) != (v == offset) or v < offset:
                raise AssertionError(f"face witness normal {normal} fails on point {p}")
        faces.append(Face(
            tuple(Fraction(v) for v in normal), Fraction(offset), members,
            tuple(np_.points[i] for i in members),
        ))
    faces.sort(key=lambda f: (len(f.members), f.members))
    return faces


def face_polynomial(p: SparsePolynomial, face: Face) -> SparsePolynomial:
    """Sub-sum of ``p`` over the exponents lying on ``face``."""
    for e in face.exponents:
        if e not in p.terms:
            raise ValueError(f"face member {e} is not in the support")
    for e in p.terms:
        if _dot(face.normal, e) < face.offset:
            raise ValueError("face normal is not minimised on the support")
    return p.restrict(face.exponents)


def newton_polytope(p: SparsePolynomial) -> NewtonPolytope:
    if p.is_zero():
        raise ValueError("zero polynomial has no Newton polytope")
    return polytope(p.support)


# --------------------------------------------------------------------------
# Newton diagram

def _on_diagram(alpha: Exponent, support: Sequence[Exponent]) -> bool:
    """Is there a normal > 0 minimised over ``support`` at ``alpha``?"""
    others = [b for b in support if b != alpha]
    for b in others:
        if all(x >= y for x, y in zip(alpha, b)):
            return False  # alpha is dominated
    n = len(alpha)
    cons = [([b[i] - alpha[i] for i in range(n)], GE, 0) for b in others]
    return feasible_point(cons, n, lower=[1] * n) is not None


def principal_part(p: SparsePolynomial) -> tuple[SparsePolynomial, SparsePolynomial]:
    """Split ``p`` into its Newton principal part and the remaining tail."""
    if p.is_zero():
        raise ValueError("principal part of the zero polynomial")
    support = p.support
    keep = [a for a in support if _on_diagram(a, support)]
    head = p.restrict(keep)
    return head, p - head


def diagram_faces(p: SparsePolynomial) -> list[Face]:
    """Compact faces of the Newton diagram, each with a positive integer normal.

    Members index into ``principal_part(p)[0].support``.
    """
    head, _ = principal_part(p)
    np_ = polytope(head.support)
    n = p.arity
    out = []
    for face in enumerate_faces(np_):
        mem = set(face.exponents)
        # variables: nu_1..nu_n (>= 1), offset M (free)
        cons = []
        for a in face.exponents:
            cons.append((list(a) + [-1], EQ, 0))
        for b in p.terms:
            if b not in mem:
                cons.append((list(b) + [-1], GE, 1))
        sol = feasible_point(cons, n + 1, lower=[1] * n + [None])
        if sol is None:
            continue
        normal = _primitive(sol[:n])
        offset = _dot(normal, face.exponents[0])
        out.append(Face(tuple(Fraction(v) for v in normal), Fraction(offset),
                        face.members, face.exponents))
    return out


def vertex_characteristic(p: SparsePolynomial) -> SparsePolynomial:
    """Sum of unit monomials over the vertices of the Newton polytope."""
    np_ = newton_polytope(p)
    return SparsePolynomial(p.vars, {v: 1 for v in np_.vertices})


# --------------------------------------------------------------------------
# convex combinations and anchors

def convex_combination(np_: NewtonPolytope, beta: Sequence) -> ConvexCombination | None:
    """Weights over the vertices reaching ``beta`` with the smallest maximal weight.

    The resulting ``k_beta = 1 / max(weights)`` satisfies
    ``sum(x^v) >= k_beta * x^beta`` on the positive orthant.
    """
    if len(beta) != np_.arity:
        raise ValueError(f"target has dimension {len(beta)}, polytope has {np_.arity}")
    verts = np_.vertices
    d = len(verts)
    beta = tuple(Fraction(b) for b in beta)
    # variables: lambda_1..lambda_d, t
    cons = [([1] * d + [0], EQ, 1)]
    for j in range(np_.arity):
        cons.append(([v[j] for v in verts] + [0], EQ, beta[j]))
    for i in range(d):
        row = [0] * (d + 1)
        row[i] = 1
        row[d] = -1
        cons.append((row, LE, 0))
    res = solve_lp(LPProblem([0] * d + [1], cons, "min"))
    if not res.optimal:
        return None
    lam = tuple(res.solution[:d])
    return ConvexCombination(beta, lam, 1 / max(lam))


def anchor(np_: NewtonPolytope, beta: Sequence[int]) -> AnchorDecomposition:
    """Write a tail exponent as ``beta_hat + delta`` with ``beta_hat`` in the polytope.

    ``beta_hat`` maximises ``sum(delta)``; ties are broken towards the
    smallest maximal convex weight, which makes ``k_beta_hat`` largest.
    """
    beta = tuple(int(b) for b in beta)
    if len(beta) != np_.arity:
        raise ValueError("anchor target dimension mismatch")
    verts = np_.vertices
    d = len(verts)
    n = np_.arity
    colsum = [sum(v) for v in verts]
    cons = [([1] * d, EQ, 1)]
    for j in range(n):
        cons.append(([v[j] for v in verts], LE, beta[j]))
    first = solve_lp(LPProblem(colsum, cons, "min"))
    if not first.optimal:
        raise AnchorError(f"exponent {beta} does not dominate any point of the polytope")
    best = first.value
    if best == sum(beta):
        raise AnchorError(f"exponent {beta} anchors with delta = 0; it should lie on the diagram")

    cons2 = [(row + [0], rel, rhs) for row, rel, rhs in cons]
    cons2.append((colsum + [0], EQ, best))
    for i in range(d):
        row = [0] * (d + 1)
        row[i] = 1
        row[d] = -1
        cons2.append((row, LE, 0))
    second = solve_lp(LPProblem([0] * d + [1], cons2, "min"))
    lam = second.solution[:d]
    beta_hat = tuple(sum((lam[i] * verts[i][j] for i in range(d)), Fraction(0)) for j in range(n))
    delta = tuple(Fraction(b) - h for b, h in zip(beta, beta_hat))
    cc = convex_combination(np_, beta_hat)
    return AnchorDecomposition(beta, beta_hat, delta, cc.k_beta)


# --------------------------------------------------------------------------
# serialisation

def frac_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def polytope_json(np_: NewtonPolytope, faces: list[Face] | None = None) -> dict:
    if faces is None:
        faces = enumerate_faces(np_)
    return {
        "points": [list(p) for p in np_.points],
        "vertices": list(np_.vertex_indices),
        "facets": [
            {"normal": [frac_str(v) for v in f.normal], "offset": frac_str(f.offset)}
            for f in np_.facets
        ],
        "faces": [
            {"normal": [frac_str(v) for v in f.normal], "members": list(f.members)}
            for f in faces
        ],
    }
