import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localnonneg.newton import (
    AnchorError,
    anchor,
    convex_combination,
    diagram_faces,
    enumerate_faces,
    face_polynomial,
    in_hull,
    newton_polytope,
    polytope,
    polytope_json,
    principal_part,
    vertex_characteristic,
)
from localnonneg.polyring import SparsePolynomial, evaluate, parse

from conftest import CERTIFIABLE, DEGENERATE, frac_points

DEGENERATE_HEAD = "x^16+x^4*y^2-2*x^3*y^3+y^4*x^2+y^18"


# --------------------------------------------------------------------------
# independent 2-D oracles

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_2d(points):
    """Andrew's monotone chain; strict vertices only."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return set(pts)
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return set(lower[:-1] + upper[:-1])


def diagram_2d(points):
    """Support points on the lower-left boundary chain with negative slopes."""
    pts = sorted(set(points))
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    chain = [lower[0]]
    for p in lower[1:]:
        if p[1] < chain[-1][1]:
            chain.append(p)
        else:
            break
    on = set(chain)
    for a, b in zip(chain, chain[1:]):
        for p in pts:
            if _cross(a, b, p) == 0 and a[0] <= p[0] <= b[0]:
                on.add(p)
    return on


support_2d = st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8)), min_size=1, max_size=9, unique=True)


# --------------------------------------------------------------------------
# polytope and faces

def test_polytope_examples():
    assert polytope([(2, 0), (0, 2), (1, 1)]).vertices == [(2, 0), (0, 2)]
    np_ = polytope([(16, 0), (4, 2), (3, 3), (2, 4), (0, 18)])
    assert set(np_.vertices) == {(16, 0), (4, 2), (2, 4), (0, 18)}
    np_ = polytope([(2, 0, 0)])
    assert np_.vertices == [(2, 0, 0)] and np_.dim == 0
    with pytest.raises(ValueError):
        polytope([])


@settings(max_examples=80, deadline=None)
@given(support_2d)
def test_vertices_match_hull(points):
    assert set(polytope(points).vertices) == hull_2d(points)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(*[st.integers(0, 4)] * 3), min_size=1, max_size=8, unique=True))
def test_vertex_soundness_3d(points):
    np_ = polytope(points)
    for i, p in enumerate(points):
        others = [q for j, q in enumerate(points) if j != i]
        assert (in_hull(others, p) is None) == (i in np_.vertex_indices)


def test_face_counts():
    assert len(enumerate_faces(polytope([(2, 0), (0, 4), (0, 0)]))) == 7
    assert len(enumerate_faces(polytope([(2, 0), (0, 2)]))) == 3
    assert len(enumerate_faces(polytope([(1, 2, 3)]))) == 1
    # tetrahedron: 4 + 6 + 4 + 1
    assert len(enumerate_faces(polytope([(2, 0, 0), (0, 4, 0), (0, 0, 6), (1, 2, 3)]))) == 15


def test_degenerate_edge_face():
    f_N = parse(DEGENERATE_HEAD)
    faces = enumerate_faces(newton_polytope(f_N))
    members = [set(F.exponents) for F in faces]
    assert {(4, 2), (3, 3), (2, 4)} in members
    edge = faces[members.index({(4, 2), (3, 3), (2, 4)})]
    assert face_polynomial(f_N, edge) == parse("x^4*y^2-2*x^3*y^3+x^2*y^4")
    vertex = faces[members.index({(16, 0)})]
    assert face_polynomial(f_N, vertex) == parse("x^16+0*y")
    whole = faces[members.index(set(f_N.terms))]
    assert face_polynomial(f_N, whole) == f_N


def test_face_polynomial_mismatch():
    faces = enumerate_faces(newton_polytope(parse("x^2+y^2")))
    other = [F for F in faces if (0, 2) in F.exponents][0]
    with pytest.raises(ValueError):
        face_polynomial(parse("x^2+x*y"), other)


def _dim(points):
    if len(points) == 1:
        return 0
    base = points[0]
    rows = [[Fraction(a - b) for a, b in zip(p, base)] for p in points[1:]]
    rank = 0
    for c in range(len(base)):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(*[st.integers(0, 5)] * 3), min_size=4, max_size=9, unique=True))
def test_face_soundness_and_euler(points):
    np_ = polytope(points)
    faces = enumerate_faces(np_)
    for F in faces:
        assert all(v.denominator == 1 for v in F.normal)
        for i, p in enumerate(points):
            val = sum(a * b for a, b in zip(F.normal, p))
            if i in F.members:
                assert val == F.offset
            else:
                assert val >= F.offset + 1
    if np_.dim == 3:
        counts = [0, 0, 0, 0]
        for F in faces:
            counts[_dim([points[i] for i in F.members])] += 1
        assert counts[0] - counts[1] + counts[2] == 2
        assert counts[0] == len(np_.vertices) and counts[3] == 1


# --------------------------------------------------------------------------
# principal part and diagram

def test_principal_part_examples():
    f_N, tail = principal_part(parse(DEGENERATE))
    assert f_N == parse(DEGENERATE_HEAD)
    assert tail == parse("-x^7*y^3 + x^12*y^15")
    f_N, tail = principal_part(parse(CERTIFIABLE))
    assert f_N == parse("x^2+y^4+z^6")
    assert tail == parse("-2*x*y^2*z^3", ["x", "y", "z"])
    f_N, tail = principal_part(parse("3*t^4+t^7"))
    assert f_N == parse("3*t^4")
    with pytest.raises(ValueError):
        principal_part(parse("0"))


def test_principal_part_with_constant():
    f_N, tail = principal_part(parse("5 + x - y^2"))
    assert f_N == parse("5", ["x", "y"])


@settings(max_examples=80, deadline=None)
@given(support_2d)
def test_principal_part_matches_2d_oracle(points):
    p = SparsePolynomial(("x", "y"), {e: 1 for e in points})
    f_N, tail = principal_part(p)
    assert set(f_N.terms) == diagram_2d(points)
    assert f_N + tail == p


def test_diagram_faces_degenerate():
    faces = diagram_faces(parse(DEGENERATE))
    verts = [F for F in faces if len(F.members) == 1]
    edges = [F for F in faces if len(F.members) > 1]
    assert {F.exponents[0] for F in verts} == {(16, 0), (4, 2), (2, 4), (0, 18)}
    assert {frozenset(F.exponents) for F in edges} == {
        frozenset({(16, 0), (4, 2)}), frozenset({(4, 2), (3, 3), (2, 4)}), frozenset({(2, 4), (0, 18)})}
    for F in faces:
        assert all(v > 0 for v in F.normal)


def test_diagram_faces_small():
    faces = diagram_faces(parse("x^2+y^2"))
    assert sorted(len(F.members) for F in faces) == [1, 1, 2]
    faces = diagram_faces(parse("x^2*y^4"))
    assert len(faces) == 1 and faces[0].exponents == ((2, 4),)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(*[st.integers(0, 5)] * 3), min_size=1, max_size=7, unique=True))
def test_principal_part_consistency(points):
    p = SparsePolynomial(("x", "y", "z"), {e: 1 for e in points})
    f_N, tail = principal_part(p)
    covered = set()
    for F in diagram_faces(p):
        covered |= set(F.exponents)
        for b in p.terms:
            val = sum(a * c for a, c in zip(F.normal, b))
            assert val >= F.offset
            assert (val == F.offset) == (b in F.exponents)
    assert covered == set(f_N.terms)
    assert f_N + tail == p


def test_vertex_characteristic():
    assert vertex_characteristic(parse("x^2-x*y+y^2")) == parse("x^2+y^2")
    assert vertex_characteristic(parse("5*x^2*y^2")) == parse("x^2*y^2")
    assert vertex_characteristic(parse(DEGENERATE_HEAD)) == parse("x^16+x^4*y^2+x^2*y^4+y^18")


# --------------------------------------------------------------------------
# convex combinations and anchors

def test_convex_combination_examples():
    np_ = polytope([(2, 0), (0, 2)])
    cc = convex_combination(np_, (1, 1))
    assert cc.weights == (Fraction(1, 2), Fraction(1, 2)) and cc.k_beta == 2
    cc = convex_combination(np_, (2, 0))
    assert cc.weights == (1, 0) and cc.k_beta == 1
    assert convex_combination(np_, (3, 3)) is None
    with pytest.raises(ValueError):
        convex_combination(np_, (1, 1, 1))


def test_convex_combination_is_minmax():
    # centre of a square: the spread weighting 1/4 each beats any diagonal pair
    np_ = polytope([(0, 0), (2, 0), (0, 2), (2, 2)])
    cc = convex_combination(np_, (1, 1))
    assert max(cc.weights) == Fraction(1, 4) and cc.k_beta == 4


def _mono(x, e):
    out = Fraction(1)
    for v, k in zip(x, e):
        out *= v ** k
    return out


@pytest.mark.parametrize("verts,beta", [
    ([(2, 0), (0, 2)], (1, 1)),
    ([(4, 2), (2, 4), (16, 0), (0, 18)], (3, 3)),
    ([(2, 0, 0), (0, 4, 0), (0, 0, 6)], (1, 2, 0)),
    ([(2, 0, 0), (0, 4, 0), (0, 0, 6)], (Fraction(2, 3), Fraction(4, 3), 2)),
])
def test_generalized_mean_bound(verts, beta):
    """sum x^v >= k_beta x^beta at random positive points (rational beta: substitute x = y^D)."""
    np_ = polytope(verts)
    cc = convex_combination(np_, beta)
    assert cc is not None
    assert sum(cc.weights) == 1 and all(w >= 0 for w in cc.weights)
    assert tuple(sum(w * v[j] for w, v in zip(cc.weights, np_.vertices)) for j in range(len(beta))) \
        == tuple(Fraction(b) for b in beta)
    assert cc.k_beta == 1 / max(cc.weights)
    D = math.lcm(*(Fraction(b).denominator for b in beta))
    ibeta = [int(Fraction(b) * D) for b in beta]
    rng = random.Random(3)
    for y in frac_points(rng, len(beta), 100):
        lhs = sum(_mono(y, [D * c for c in v]) for v in np_.vertices)
        assert lhs >= cc.k_beta * _mono(y, ibeta)


def test_anchor_examples():
    f_N, _ = principal_part(parse(CERTIFIABLE))
    a = anchor(newton_polytope(f_N), (1, 2, 3))
    assert a.beta_hat == (1, 2, 0) and a.delta == (0, 0, 3) and a.k_beta_hat == 2
    a = anchor(polytope([(2, 0), (0, 2)]), (3, 0))
    assert a.beta_hat == (2, 0) and a.delta == (1, 0) and a.k_beta_hat == 1
    a = anchor(polytope([(2, 0), (0, 2)]), (2, 2))
    assert a.beta_hat == (1, 1) and a.delta == (1, 1) and a.k_beta_hat == 2


def test_anchor_rejects_diagram_points():
    with pytest.raises(AnchorError):
        anchor(polytope([(2, 0), (0, 2)]), (1, 1))
    with pytest.raises(AnchorError):
        anchor(polytope([(2, 0), (0, 2)]), (1, 0))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(*[st.integers(0, 6)] * 3), min_size=2, max_size=8, unique=True))
def test_anchor_invariants(points):
    p = SparsePolynomial(("x", "y", "z"), {e: 1 for e in points})
    f_N, tail = principal_part(p)
    np_ = newton_polytope(f_N)
    for beta in tail.terms:
        a = anchor(np_, beta)
        assert all(d >= 0 for d in a.delta) and any(a.delta)
        assert tuple(h + d for h, d in zip(a.beta_hat, a.delta)) == beta
        assert convex_combination(np_, a.beta_hat) is not None


# --------------------------------------------------------------------------
# analytic checks of the face structure

@pytest.mark.parametrize("text", [DEGENERATE_HEAD, "x^2-x*y+y^2+x^2*y^2", "x^2+y^4+z^6-x*y*z+y^2*z^2"])
def test_face_limit(text):
    """exp(M t) h(x' exp(-nu t)) tends to the face polynomial at x'."""
    h = parse(text)
    rng = random.Random(11)
    for F in enumerate_faces(newton_polytope(h)):
        if not any(F.normal):
            continue
        fp = face_polynomial(h, F)
        for x in frac_points(rng, h.arity, 3, hi=Fraction(2)):
            target = float(evaluate(fp, x))
            for t in (10.0, 20.0, 30.0):
                total = 0.0
                for e, c in h.terms.items():
                    gap = float(sum(a * b for a, b in zip(F.normal, e)) - F.offset)
                    total += float(c) * float(_mono(x, e)) * math.exp(-gap * t)
                last = total
            assert last == pytest.approx(target, rel=1e-6, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=5, unique=True),
       st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=5, unique=True))
def test_minkowski_sum_vertices(ps, qs):
    p = SparsePolynomial(("x", "y"), {e: 1 for e in ps})
    q = SparsePolynomial(("x", "y"), {e: 1 for e in qs})
    vp, vq = newton_polytope(p).vertices, newton_polytope(q).vertices
    sums = {(a[0] + b[0], a[1] + b[1]) for a in vp for b in vq}
    # positive coefficients: no cancellation, so Sup(pq) is the full sumset
    vpq = set(newton_polytope(p * q).vertices)
    assert vpq <= sums
    assert vpq == set(polytope(sorted(sums)).vertices)


def test_polytope_json_shape():
    np_ = newton_polytope(parse(DEGENERATE_HEAD))
    data = polytope_json(np_)
    assert set(data) == {"points", "vertices", "facets", "faces"}
    assert all("/" in s for f in data["facets"] for s in f["normal"])
    assert len(data["faces"]) == 9
