"""Graded polynomial ring k[x,y,z]: canonical monomial bases, homogeneous
polynomial arithmetic, differentiation, exact division, text grammar.

The canonical basis of degree k lists exponent triples (a,b,c) with
a+b+c = k in descending lexicographic order; every matrix in the package
indexes its rows and columns by these bases, which makes all downstream
output bit-reproducible.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, lcm
from typing import NamedTuple

from .errors import (
    FieldError,
    NotDivisibleError,
    NotHomogeneousError,
    PolySyntaxError,
    TjurinaError,
)
from .exactlin import DenseMatrix, solve_in_columns
from .fields import RATIONALS, FieldSpec

VARS = ("x", "y", "z")


class Monomial(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def degree(self) -> int:
        return self.a + self.b + self.c


@lru_cache(maxsize=None)
def monomial_basis(k: int) -> tuple[Monomial, ...]:
    """The C(k+2,2) degree-k monomials, lex-descending on (a,b,c)."""
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    out = [
        Monomial(a, b, k - a - b)
        for a in range(k, -1, -1)
        for b in range(k - a, -1, -1)
    ]
    assert len(out) == comb(k + 2, 2)
    return tuple(out)


@lru_cache(maxsize=None)
def basis_index(k: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomial_basis(k))}


def basis_size(k: int) -> int:
    return comb(k + 2, 2) if k >= 0 else 0


@dataclass(frozen=True)
class HomogPoly:
    """Homogeneous polynomial as a dense coefficient vector over the
    canonical degree-k monomial basis."""

    degree: int
    coeffs: tuple
    field: FieldSpec = RATIONALS

    def __post_init__(self):
        if len(self.coeffs) != basis_size(self.degree):
            raise ValueError(
                f"degree-{self.degree} polynomial needs {basis_size(self.degree)} "
                f"coefficients, got {len(self.coeffs)}"
            )

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, degree: int, field: FieldSpec = RATIONALS) -> "HomogPoly":
        return cls(degree, tuple(field.zero() for _ in range(basis_size(degree))), field)

    @classmethod
    def from_dict(cls, terms: dict, field: FieldSpec = RATIONALS) -> "HomogPoly":
        """Build from {(a,b,c): coefficient}; must be homogeneous."""
        nz = {Monomial(*m): c for m, c in terms.items() if not field.is_zero(field.from_fraction(Fraction(c)) if field.prime else Fraction(c))}
        if not nz:
            raise ValueError("from_dict needs at least one nonzero term (degree is ambiguous)")
        degrees = {m.degree for m in nz}
        if len(degrees) > 1:
            raise NotHomogeneousError(degrees)
        k = degrees.pop()
        coeffs = [field.zero()] * basis_size(k)
        idx = basis_index(k)
        for m, c in nz.items():
            coeffs[idx[m]] = field.from_fraction(Fraction(c))
        return cls(k, tuple(coeffs), field)

    @classmethod
    def variable(cls, name: str, field: FieldSpec = RATIONALS) -> "HomogPoly":
        e = [0, 0, 0]
        e[VARS.index(name)] = 1
        return cls.from_dict({tuple(e): 1}, field)

    @classmethod
    def constant(cls, value, field: FieldSpec = RATIONALS) -> "HomogPoly":
        return cls(0, (field.from_fraction(Fraction(value)),), field)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(self.field.is_zero(c) for c in self.coeffs)

    def terms(self):
        basis = monomial_basis(self.degree)
        return [(m, c) for m, c in zip(basis, self.coeffs) if not self.field.is_zero(c)]

    def coefficient(self, m) -> object:
        return self.coeffs[basis_index(self.degree)[Monomial(*m)]]

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "HomogPoly"):
        if self.field != other.field:
            raise FieldError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        self._check(other)
        if self.degree != other.degree:
            raise NotHomogeneousError([self.degree, other.degree])
        f = self.field
        return HomogPoly(
            self.degree,
            tuple(f.add(a, b) for a, b in zip(self.coeffs, other.coeffs)),
            f,
        )

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        return self + (-other)

    def __neg__(self) -> "HomogPoly":
        f = self.field
        return HomogPoly(self.degree, tuple(f.neg(c) for c in self.coeffs), f)

    def __mul__(self, other: "HomogPoly") -> "HomogPoly":
        self._check(other)
        f = self.field
        k = self.degree + other.degree
        out = [f.zero()] * basis_size(k)
        idx = basis_index(k)
        sterms = self.terms()
        for m2, c2 in other.terms():
            for m1, c1 in sterms:
                key = Monomial(m1.a + m2.a, m1.b + m2.b, m1.c + m2.c)
                i = idx[key]
                out[i] = f.add(out[i], f.mul(c1, c2))
        return HomogPoly(k, tuple(out), f)

    def scale(self, s) -> "HomogPoly":
        f = self.field
        s = f.from_fraction(Fraction(s)) if not f.prime else f.from_int(s) if isinstance(s, int) else s
        return HomogPoly(self.degree, tuple(f.mul(s, c) for c in self.coeffs), f)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogPoly):
            return NotImplemented
        return (
            self.field == other.field
            and self.degree == other.degree
            and all(
                self.field.is_zero(self.field.sub(a, b))
                for a, b in zip(self.coeffs, other.coeffs)
            )
        )

    def __hash__(self):
        return hash((self.degree, self.coeffs, self.field))

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"HomogPoly({format_poly(self)!r}, field={self.field})"


def partial(p: HomogPoly, var: str) -> HomogPoly:
    """Formal partial derivative; degree drops by one."""
    if p.degree == 0:
        raise ValueError("cannot differentiate a degree-0 polynomial into the ring")
    v = VARS.index(var)
    f = p.field
    out = [f.zero()] * basis_size(p.degree - 1)
    idx = basis_index(p.degree - 1)
    for m, c in p.terms():
        e = m[v]
        if e == 0:
            continue
        lower = list(m)
        lower[v] -= 1
        out[idx[Monomial(*lower)]] = f.mul_int(c, e)
    return HomogPoly(p.degree - 1, tuple(out), f)


def multiply_by_monomial(p: HomogPoly, m) -> HomogPoly:
    m = Monomial(*m)
    f = p.field
    k = p.degree + m.degree
    out = [f.zero()] * basis_size(k)
    idx = basis_index(k)
    for mono, c in p.terms():
        out[idx[Monomial(mono.a + m.a, mono.b + m.b, mono.c + m.c)]] = c
    return HomogPoly(k, tuple(out), f)


def multiplication_matrix(q: HomogPoly, from_degree: int) -> DenseMatrix:
    """Matrix of `multiply by q`: S_from -> S_{from+deg q}, canonical bases."""
    k = from_degree + q.degree
    nrows = basis_size(k)
    cols = []
    for m in monomial_basis(from_degree):
        cols.append(multiply_by_monomial(q, m).coeffs)
    return DenseMatrix.from_cols(cols, nrows, q.field)


def exact_divide(p: HomogPoly, q: HomogPoly) -> HomogPoly:
    """The r with p = q*r, found by solving the multiplication linear system.

    Raises NotDivisibleError when no such homogeneous r exists.
    """
    p._check(q)
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.degree < q.degree:
        raise NotDivisibleError(f"degree {p.degree} < {q.degree}")
    mat = multiplication_matrix(q, p.degree - q.degree)
    sol = solve_in_columns(mat, list(p.coeffs))
    if sol is None:
        raise NotDivisibleError(f"({format_poly(p)}) is not divisible by ({format_poly(q)})")
    return HomogPoly(p.degree - q.degree, tuple(sol), p.field)


# ---------------------------------------------------------------------------
# Text grammar
# ---------------------------------------------------------------------------
#
#   expr   := ['-'] term (('+'|'-') term)*
#   term   := factor ('*' factor)*
#   factor := base ('^' INT)?
#   base   := NUMBER | 'x' | 'y' | 'z' | '(' expr ')'
#   NUMBER := INT ('/' INT)?
#
# Juxtaposition is not multiplication: "2x" is a syntax error, "2*x" parses.


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), i))
            i = j
        elif ch in "xyz":
            tokens.append(("var", ch, i))
            i += 1
        elif ch in "+-*^()/":
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise PolySyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    """Recursive descent over the grammar above, building sparse dicts
    {(a,b,c): Fraction} so homogeneity is only checked on the final result."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise PolySyntaxError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.pos += 1
        return tok

    def parse(self) -> dict:
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolySyntaxError(f"unexpected {tok[0]!r}", tok[2])
        return result

    def expr(self) -> dict:
        if self.peek()[0] == "-":
            self.take()
            acc = _dneg(self.term())
        else:
            acc = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            t = self.term()
            acc = _dadd(acc, _dneg(t) if op == "-" else t)
        return acc

    def term(self) -> dict:
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = _dmul(acc, self.factor())
        return acc

    def factor(self) -> dict:
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("int")
            e = tok[1]
            if e < 1:
                raise PolySyntaxError("exponent must be a positive integer", tok[2])
            acc = base
            for _ in range(e - 1):
                acc = _dmul(acc, base)
            return acc
        return base

    def base(self) -> dict:
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            num = tok[1]
            if self.peek()[0] == "/":
                self.take()
                dtok = self.take("int")
                if dtok[1] == 0:
                    raise PolySyntaxError("zero denominator", dtok[2])
                return {(0, 0, 0): Fraction(num, dtok[1])}
            return {(0, 0, 0): Fraction(num)}
        if tok[0] == "var":
            self.take()
            e = [0, 0, 0]
            e[VARS.index(tok[1])] = 1
            return {tuple(e): Fraction(1)}
        if tok[0] == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise PolySyntaxError(f"unexpected {tok[0]!r}", tok[2])


def _dadd(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, Fraction(0)) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _dneg(a: dict) -> dict:
    return {m: -c for m, c in a.items()}


def _dmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            key = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
            s = out.get(key, Fraction(0)) + c1 * c2
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def parse_poly(text: str, field: FieldSpec = RATIONALS) -> HomogPoly:
    """Parse the grammar above into a HomogPoly; homogeneity enforced."""
    terms = _Parser(text).parse()
    if not terms:
        raise PolySyntaxError("polynomial is identically zero; degree is ambiguous", 0)
    degrees = {sum(m) for m in terms}
    if len(degrees) > 1:
        raise NotHomogeneousError(degrees)
    return HomogPoly.from_dict(terms, field)


def format_poly(p: HomogPoly) -> str:
    """Canonical printing: monomials in canonical order, reduced fractions."""
    parts = []
    for m, c in p.terms():
        if p.field.prime:
            cstr = str(c)
            negative = False
        else:
            negative = c < 0
            c = abs(c)
            cstr = str(c)
        factors = [
            (v if e == 1 else f"{v}^{e}")
            for v, e in zip(VARS, m)
            if e != 0
        ]
        if not factors:
            body = cstr
        elif cstr == "1":
            body = "*".join(factors)
        else:
            body = "*".join([cstr] + factors)
        parts.append(("- " if negative else "+ ") + body)
    if not parts:
        return "0"
    head = parts[0]
    head = head[2:] if head.startswith("+ ") else "-" + head[2:]
    return " ".join([head] + parts[1:])


# ---------------------------------------------------------------------------
# Curve input and reducedness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurveInput:
    """A nonzero homogeneous polynomial cutting out the curve, plus its field."""

    poly: HomogPoly
    name: str = ""

    def __post_init__(self):
        if self.poly.is_zero():
            raise ValueError("curve polynomial must be nonzero")
        if self.poly.degree < 1:
            raise ValueError("curve must have degree >= 1")

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def field(self) -> FieldSpec:
        return self.poly.field


def primitive_integer_poly(p: HomogPoly) -> HomogPoly:
    """Rescale a rational polynomial to integer coefficients with content 1
    and positive leading coefficient.  Scaling does not change the curve."""
    if not p.field.is_rationals:
        return p
    den = 1
    for c in p.coeffs:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return p
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        g = -g
    return HomogPoly(p.degree, tuple(Fraction(v // g) for v in ints), p.field)


def _restrict_to_line(p: HomogPoly, drop: int, alpha: Fraction, beta: Fraction):
    """Substitute variable ``drop`` by alpha*u + beta*v (the other two
    variables in order); returns dense binary-form coefficients [u^d, ...,
    v^d]."""
    d = p.degree
    out = [Fraction(0)] * (d + 1)
    keep = [i for i in range(3) if i != drop]
    for m, c in p.terms():
        e = m[drop]
        eu, ev = m[keep[0]], m[keep[1]]
        # (alpha*u + beta*v)^e, binomial expansion
        for i in range(e + 1):
            coef = c * comb(e, i) * alpha**i * beta ** (e - i)
            out[d - (eu + i)] += coef  # power of u is eu + i
    return out


def _univariate_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    def norm(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = norm(list(a)), norm(list(b))
    while b:
        # a mod b
        while len(a) >= len(b) and a:
            f = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, x in enumerate(b):
                a[i + shift] -= f * x
            a = norm(a)
        a, b = b, a
    return a


def is_reduced_probabilistic(f: HomogPoly, trials: int = 5) -> bool:
    """Squarefreeness test by restriction to random lines.

    Restrict f to ``trials`` random rational lines and run a binary-form
    squarefree test (gcd with the derivative, plus a degree check catching
    repeated roots at infinity).  A polynomial with a repeated factor never
    restricts to a squarefree form, so True is only returned for reduced
    input; a reduced curve can only be rejected if every sampled line is
    exceptional, which has probability shrinking rapidly in ``trials``.
    """
    if not f.field.is_rationals:
        raise FieldError("reducedness test runs over the rationals")
    if f.is_zero():
        return False
    d = f.degree
    if d == 1:
        return True
    seed = hashlib.sha256(format_poly(f).encode()).digest()
    rng = random.Random(seed)
    for trial in range(trials):
        drop = trial % 3
        alpha = Fraction(rng.randint(-40, 40), rng.randint(1, 7))
        beta = Fraction(rng.randint(-40, 40), rng.randint(1, 7))
        coeffs = _restrict_to_line(f, drop, alpha, beta)
        if all(c == 0 for c in coeffs):
            continue  # the line lies inside the curve; resample
        # u-degree of the form (index of last nonzero from the u^d end)
        nz = [i for i, c in enumerate(coeffs) if c != 0]
        u_mult = min(nz)            # multiplicity of the v-root at u=0... (u^d side)
        v_mult = d - max(nz)        # multiplicity of the root at infinity
        if u_mult >= 2 or v_mult >= 2:
            continue
        poly = [coeffs[d - i] for i in range(d + 1)]  # ascending powers of u
        deriv = [i * poly[i] for i in range(1, d + 1)]
        g = _univariate_gcd(poly, deriv)
        if len(g) <= 1:
            return True
    return False


def check_reduced(curve: CurveInput, trials: int = 5) -> None:
    from .errors import NonReducedError

    base = curve.poly
    if not base.field.is_rationals:
        return  # prime-field inputs are reduced from their rational models
    if not is_reduced_probabilistic(base, trials):
        raise NonReducedError(f"curve {format_poly(base)} is not squarefree")
