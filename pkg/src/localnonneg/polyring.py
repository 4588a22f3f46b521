"""Exact sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples to nonzero ``Fraction``
coefficients together with an ordered tuple of variable names::

    >>> p = parse("x^2 - x*y + y^2")
    >>> format_poly(p * parse("x^2 + x*y + y^2"))
    'x^4 + x^2*y^2 + y^4'

Everything here is exact; no floating point is ever produced.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]

__all__ = [
    "ParseError",
    "SparsePolynomial",
    "UnivariatePolynomial",
    "parse",
    "parse_univariate",
    "format_poly",
    "evaluate",
    "split_signs",
    "apply_signs",
    "substitute_curve",
    "lowest_term",
    "grlex_key",
]


class ParseError(ValueError):
    """Raised for malformed polynomial text; ``pos`` is the 0-based offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


def grlex_key(exp: Exponent) -> tuple:
    """Sort key putting higher total degree first, then lexicographically larger."""
    return (-sum(exp), tuple(-e for e in exp))


class SparsePolynomial:
    """Immutable polynomial with rational coefficients.

    ``terms`` maps exponent tuples (length ``arity``) to nonzero Fractions.
    The zero polynomial has an empty term map.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables!r}")
        n = len(variables)
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match arity {n}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
        object.__setattr__(self, "vars", variables)
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})

    def __setattr__(self, name, value):
        raise AttributeError("SparsePolynomial is immutable")

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> "SparsePolynomial":
        return cls(variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def monomial(cls, variables: Sequence[str], exp: Exponent, c=1) -> "SparsePolynomial":
        return cls(variables, {tuple(exp): c})

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict[Exponent, Fraction]) -> "SparsePolynomial":
        # trusted constructor: caller guarantees canonical form
        obj = object.__new__(cls)
        object.__setattr__(obj, "vars", variables)
        object.__setattr__(obj, "terms", terms)
        return obj

    @property
    def arity(self) -> int:
        return len(self.vars)

    @property
    def support(self) -> list[Exponent]:
        """Exponents with nonzero coefficient, in graded-lex order."""
        return sorted(self.terms, key=grlex_key)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.arity)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def _check(self, other: "SparsePolynomial") -> None:
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other):
        if not isinstance(other, SparsePolynomial):
            other = SparsePolynomial.constant(self.vars, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return SparsePolynomial._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePolynomial._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SparsePolynomial):
            other = SparsePolynomial.constant(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SparsePolynomial):
            c = Fraction(other)
            if not c:
                return SparsePolynomial._raw(self.vars, {})
            return SparsePolynomial._raw(self.vars, {e: c * a for e, a in self.terms.items()})
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePolynomial._raw(self.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, m: int):
        if not isinstance(m, int) or m < 0:
            raise ValueError("power exponent must be a natural number")
        result = SparsePolynomial.constant(self.vars, 1)
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return evaluate(self, point)

    def __repr__(self):
        return f"SparsePolynomial({format_poly(self)!r}, vars={self.vars!r})"

    def __str__(self):
        return format_poly(self)

    def restrict(self, exponents: Iterable[Exponent]) -> "SparsePolynomial":
        """Sub-sum over the given exponents (missing ones are ignored)."""
        keep = {tuple(e) for e in exponents}
        return SparsePolynomial._raw(self.vars, {e: c for e, c in self.terms.items() if e in keep})


def add(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    return p + q


def mul(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    return p * q


def power(p: SparsePolynomial, m: int) -> SparsePolynomial:
    return p ** m


class UnivariatePolynomial:
    """Polynomial in one variable ``t``: a map degree -> nonzero Fraction."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean: dict[int, Fraction] = {}
        for d, c in (terms or {}).items():
            d = int(d)
            if d < 0:
                raise ValueError("negative degree")
            c = Fraction(c)
            if c:
                clean[d] = clean.get(d, Fraction(0)) + c
        self.terms = {d: c for d, c in clean.items() if c}

    @classmethod
    def monomial(cls, degree: int, c=1) -> "UnivariatePolynomial":
        return cls({degree: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "UnivariatePolynomial") -> "UnivariatePolynomial":
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out.get(d, 0) + c
        return UnivariatePolynomial(out)

    def __mul__(self, other):
        if not isinstance(other, UnivariatePolynomial):
            return UnivariatePolynomial({d: c * Fraction(other) for d, c in self.terms.items()})
        out: dict[int, Fraction] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                out[d1 + d2] = out.get(d1 + d2, 0) + c1 * c2
        return UnivariatePolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "UnivariatePolynomial":
        result = UnivariatePolynomial({0: 1})
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, UnivariatePolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        return sum((c * t ** d for d, c in self.terms.items()), Fraction(0))

    def __repr__(self):
        return f"UnivariatePolynomial({format_poly(self.as_sparse())!r})"

    def as_sparse(self, var: str = "t") -> SparsePolynomial:
        return SparsePolynomial((var,), {(d,): c for d, c in self.terms.items()})


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^])|(?P<bad>\S))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        kind = m.lastgroup
        start = m.start(kind)
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group(kind)!r}", start, text)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variable_order: Sequence[str] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.fixed = variable_order is not None
        self.vars: list[str] = list(variable_order or [])
        self.index = {v: k for k, v in enumerate(self.vars)}

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def expect_nat(self, what: str) -> int:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.fail(f"negative {what} not allowed")
        if tok[0] != "num":
            self.fail(f"expected {what}")
        self.take()
        return int(tok[1])

    def var_index(self, tok) -> int:
        name = tok[1]
        if name not in self.index:
            if self.fixed:
                self.fail(f"unknown variable {name!r}", tok)
            self.index[name] = len(self.vars)
            self.vars.append(name)
        return self.index[name]

    def factor(self, mono: dict[int, int]) -> None:
        tok = self.peek()
        if tok[0] != "var":
            self.fail("expected variable")
        self.take()
        k = self.var_index(tok)
        e = 1
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            e = self.expect_nat("exponent")
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                self.fail("fractional exponent not allowed", nxt)
        mono[k] = mono.get(k, 0) + e

    def mono(self, mono: dict[int, int]) -> None:
        self.factor(mono)
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            self.factor(mono)

    def term(self, sign: int) -> tuple[dict[int, int], Fraction]:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            if tok[1] == "-":
                sign = -sign
            tok = self.peek()
        mono: dict[int, int] = {}
        if tok[0] == "num":
            self.take()
            coeff = Fraction(int(tok[1]))
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den = self.expect_nat("denominator")
                if den == 0:
                    self.fail("zero denominator", self.tokens[self.i - 1])
                coeff /= den
            if self.peek()[0] == "op" and self.peek()[1] == "*":
                self.take()
                self.mono(mono)
            elif self.peek()[0] == "var":
                self.mono(mono)
        elif tok[0] == "var":
            coeff = Fraction(1)
            self.mono(mono)
        else:
            self.fail("expected coefficient or variable")
        return mono, sign * coeff

    def parse(self) -> tuple[list[str], list[tuple[dict[int, int], Fraction]]]:
        out = [self.term(1)]
        while True:
            tok = self.peek()
            if tok[0] == "end":
                break
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                out.append(self.term(1 if tok[1] == "+" else -1))
            else:
                self.fail(f"unexpected {tok[1]!r}")
        return self.vars, out


def parse(text: str, variable_order: Sequence[str] | None = None) -> SparsePolynomial:
    """Parse ``text`` into canonical sparse form.

    Variables are ordered by first appearance unless ``variable_order`` is
    given, in which case any other name is an error and the arity is
    ``len(variable_order)``.
    """
    if variable_order is not None and len(set(variable_order)) != len(variable_order):
        raise ValueError("duplicate names in variable_order")
    names, raw = _Parser(text, variable_order).parse()
    n = len(names)
    terms: dict[Exponent, Fraction] = {}
    for mono, c in raw:
        exp = tuple(mono.get(k, 0) for k in range(n))
        terms[exp] = terms.get(exp, Fraction(0)) + c
    return SparsePolynomial(names, terms)


def parse_univariate(text: str, var: str = "t") -> UnivariatePolynomial:
    p = parse(text, [var])
    return UnivariatePolynomial({e[0]: c for e, c in p.terms.items()})


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: SparsePolynomial) -> str:
    """Deterministic text form in graded-lex order; ``parse`` inverts it."""
    if p.is_zero():
        return "0"
    parts = []
    for k, exp in enumerate(p.support):
        c = p.terms[exp]
        factors = [
            v if e == 1 else f"{v}^{e}" for v, e in zip(p.vars, exp) if e
        ]
        mag = abs(c)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(mag) + "*" + "*".join(factors)
        if k == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


# --------------------------------------------------------------------------
# evaluation and substitutions

def evaluate(p: SparsePolynomial, point: Sequence) -> Fraction:
    """Exact value of ``p`` at ``point``."""
    if len(point) != p.arity:
        raise ValueError(f"point has {len(point)} coordinates, polynomial arity is {p.arity}")
    if not p.terms:
        return Fraction(0)
    xs = [Fraction(v) for v in point]
    # cache powers per variable; polynomials here are sparse but share exponents
    cache: list[dict[int, Fraction]] = [{} for _ in xs]
    total = Fraction(0)
    for exp, c in p.terms.items():
        term = c
        for k, e in enumerate(exp):
            if e:
                pw = cache[k].get(e)
                if pw is None:
                    pw = cache[k][e] = xs[k] ** e
                term *= pw
        total += term
    return total


def split_signs(p: SparsePolynomial) -> tuple[SparsePolynomial, SparsePolynomial]:
    """Return ``(p_plus, p_minus)`` with ``p = p_plus + p_minus``."""
    plus = {e: c for e, c in p.terms.items() if c > 0}
    minus = {e: c for e, c in p.terms.items() if c < 0}
    return SparsePolynomial._raw(p.vars, plus), SparsePolynomial._raw(p.vars, minus)


def abs_coefficients(p: SparsePolynomial) -> SparsePolynomial:
    """``p_plus - p_minus``: same support, every coefficient made positive."""
    return SparsePolynomial._raw(p.vars, {e: abs(c) for e, c in p.terms.items()})


def apply_signs(p: SparsePolynomial, signs: Sequence[int]) -> SparsePolynomial:
    """``p(s_1 x_1, ..., s_n x_n)`` for a vector of +1/-1 signs."""
    if len(signs) != p.arity:
        raise ValueError("sign vector length does not match arity")
    if any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be +1 or -1")
    neg = [k for k, s in enumerate(signs) if s < 0]
    out = {}
    for e, c in p.terms.items():
        odd = sum(e[k] for k in neg) & 1
        out[e] = -c if odd else c
    return SparsePolynomial._raw(p.vars, out)


def substitute_curve(p: SparsePolynomial, curve: Sequence[UnivariatePolynomial]) -> UnivariatePolynomial:
    """Compose ``p(curve_1(t), ..., curve_n(t))``; every curve must vanish at 0."""
    if len(curve) != p.arity:
        raise ValueError(f"curve has {len(curve)} components, polynomial arity is {p.arity}")
    for k, phi in enumerate(curve):
        if phi.terms.get(0):
            raise ValueError(f"curve component {k} has a nonzero constant term")
    cache: list[dict[int, UnivariatePolynomial]] = [{} for _ in curve]
    out: dict[int, Fraction] = {}
    for exp, c in p.terms.items():
        term = UnivariatePolynomial({0: c})
        for k, e in enumerate(exp):
            if e:
                pw = cache[k].get(e)
                if pw is None:
                    pw = cache[k][e] = curve[k] ** e
                term = term * pw
        for d, a in term.terms.items():
            out[d] = out.get(d, 0) + a
    return UnivariatePolynomial(out)


def lowest_term(u: UnivariatePolynomial) -> tuple[int, Fraction] | None:
    if not u.terms:
        return None
    d = min(u.terms)
    return d, u.terms[d]
