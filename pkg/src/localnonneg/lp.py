"""Exact rational linear programming.

Dense two-phase tableau simplex over ``Fraction`` with Bland's rule, so
it never cycles and always returns the same vertex for the same input.
Problems here are tiny (tens of rows and columns), so density is fine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

LE, EQ, GE = "<=", "==", ">="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPProblem:
    """``objective . x`` to be minimised or maximised.

    ``constraints`` is a list of ``(row, relation, rhs)`` with relation one
    of ``"<="``, ``"=="``, ``">="``. ``lower`` gives a lower bound per
    variable, ``None`` meaning free; when ``lower`` itself is ``None`` every
    variable is nonnegative.
    """

    objective: Sequence
    constraints: list = field(default_factory=list)
    sense: str = "min"
    lower: Sequence | None = None

    @property
    def nvars(self) -> int:
        return len(self.objective)


@dataclass
class LPResult:
    status: str
    solution: list[Fraction] | None = None
    value: Fraction | None = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _pivot(T: list[list[Fraction]], r: int, c: int) -> None:
    prow = T[r]
    pv = prow[c]
    if pv != 1:
        inv = 1 / pv
        prow[:] = [v * inv for v in prow]
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(T):
        if i != r:
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]


def _simplex(T: list[list[Fraction]], basis: list[int], cost_row: int, allowed: int) -> bool:
    """Minimise the objective stored in ``T[cost_row]`` (reduced costs).

    Columns ``>= allowed`` never enter. Returns False if unbounded.
    Rows ``0..len(basis)-1`` are constraints; the last column is the rhs.
    """
    m = len(basis)
    cost = T[cost_row]
    while True:
        enter = next((j for j in range(allowed) if cost[j] < 0), None)
        if enter is None:
            return True
        best = None
        leave = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return False
        _pivot(T, leave, enter)
        basis[leave] = enter


def solve_lp(problem: LPProblem) -> LPResult:
    """Solve ``problem`` exactly; see :class:`LPProblem` for conventions."""
    n = problem.nvars
    obj = [Fraction(v) for v in problem.objective]
    if problem.sense not in ("min", "max"):
        raise ValueError(f"unknown sense {problem.sense!r}")
    lower = problem.lower if problem.lower is not None else [0] * n
    if len(lower) != n:
        raise ValueError("lower bounds length does not match objective")

    # x_j = lb_j + y_j (bounded) or y_j^+ - y_j^- (free)
    cols: list[list[tuple[int, int]]] = []  # per original var: [(std column, sign)]
    shift = []
    ncol = 0
    for lb in lower:
        if lb is None:
            cols.append([(ncol, 1), (ncol + 1, -1)])
            shift.append(Fraction(0))
            ncol += 2
        else:
            cols.append([(ncol, 1)])
            shift.append(Fraction(lb))
            ncol += 1

    rows = []
    for row, rel, rhs in problem.constraints:
        if len(row) != n:
            raise ValueError("constraint row length does not match objective")
        if rel not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {rel!r}")
        row = [Fraction(v) for v in row]
        rhs = Fraction(rhs) - sum(a * s for a, s in zip(row, shift))
        std = [Fraction(0)] * ncol
        for j, a in enumerate(row):
            if a:
                for c, sg in cols[j]:
                    std[c] = a * sg
        if rhs < 0:
            std = [-v for v in std]
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        rows.append((std, rel, rhs))

    m = len(rows)
    nslack = sum(1 for _, rel, _ in rows if rel != EQ)
    nart = sum(1 for _, rel, _ in rows if rel != LE)
    width = ncol + nslack + nart + 1
    T = []
    basis = []
    s = ncol
    a = ncol + nslack
    art_cols = []
    for std, rel, rhs in rows:
        line = std + [Fraction(0)] * (nslack + nart) + [rhs]
        if rel == LE:
            line[s] = Fraction(1)
            basis.append(s)
            s += 1
        else:
            if rel == GE:
                line[s] = Fraction(-1)
                s += 1
            line[a] = Fraction(1)
            basis.append(a)
            art_cols.append(a)
            a += 1
        T.append(line)

    # phase 1: minimise the sum of artificials
    if art_cols:
        phase1 = [Fraction(0)] * width
        for j in art_cols:
            phase1[j] = Fraction(1)
        for i, b in enumerate(basis):
            if b in art_cols:
                phase1 = [p - v for p, v in zip(phase1, T[i])]
        T.append(phase1)
        _simplex(T, basis, m, width - 1)
        if T[m][-1] != 0:
            return LPResult(INFEASIBLE)
        T.pop()
        # drive remaining (zero-valued) artificials out of the basis
        first_art = ncol + nslack
        for i in range(m):
            if basis[i] >= first_art:
                j = next((j for j in range(first_art) if T[i][j] != 0), None)
                if j is not None:
                    _pivot(T, i, j)
                    basis[i] = j
        keep = [i for i in range(m) if basis[i] < first_art]  # others are redundant rows
        T = [T[i] for i in keep]
        basis = [basis[i] for i in keep]
        m = len(basis)
        allowed = first_art
    else:
        allowed = width - 1

    # phase 2
    sign = -1 if problem.sense == "max" else 1
    c_std = [Fraction(0)] * width
    for j, cj in enumerate(obj):
        for c, sg in cols[j]:
            c_std[c] = sign * cj * sg
    cost = list(c_std)
    for i, b in enumerate(basis):
        if cost[b]:
            f = cost[b]
            cost = [cv - f * v for cv, v in zip(cost, T[i])]
    T.append(cost)
    if not _simplex(T, basis, m, allowed):
        return LPResult(UNBOUNDED)

    y = [Fraction(0)] * ncol
    for i, b in enumerate(basis):
        if b < ncol:
            y[b] = T[i][-1]
    x = [shift[j] + sum(y[c] * sg for c, sg in cols[j]) for j in range(n)]
    value = sum((cj * xj for cj, xj in zip(obj, x)), Fraction(0))
    return LPResult(OPTIMAL, x, value)


def feasible_point(constraints: list, nvars: int, lower: Sequence | None = None) -> list[Fraction] | None:
    """Any point satisfying ``constraints``, or None when infeasible."""
    res = solve_lp(LPProblem([0] * nvars, constraints, "min", lower))
    return res.solution if res.optimal else None
