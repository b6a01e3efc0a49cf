"""Rational functions with denominators factored as products of (1 - t^m)^k.

Text form (whitespace ignored)::

    rational     := signedpoly ( "/" "(" denomfactors ")" )?
    denomfactors := denomfactor ( "*" denomfactor )*
    denomfactor  := "(" "1" "-" monomial ")" ( "^" posint )?
    signedpoly   := polyfactor ( "*" polyfactor )* | polysum
    polyfactor   := "(" polysum ")" ( "^" posint )?
    polysum      := term ( ("+"|"-") term )*
    term         := int | int? monomial
    monomial     := varpow ( "*" varpow )*
    varpow       := "t" posint ( "^" int )?

The numerator parser accepts a superset of this (any sum of products of
numbers, variables and parenthesised sums with nonnegative powers), which
the printer never needs but which is convenient when typing expressions.
A single denominator factor may also be written without the outer
parentheses, as in ``1/(1-t)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .laurent import ExpVec, LaurentPoly, is_zero_vec, lp_mul, lp_pow


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str):
        super().__init__(f"{message} at position {pos}: {text[:pos]}<HERE>{text[pos:]}")
        self.pos = pos
        self.text = text


def factor_sort_key(m: ExpVec) -> tuple:
    return (sum(abs(x) for x in m), tuple(-x for x in m))


@dataclass(frozen=True)
class FactoredRational:
    """numerator / prod (1 - t^m)^k, with the factors kept as a sorted tuple."""

    numerator: LaurentPoly
    factors: tuple[tuple[ExpVec, int], ...] = field(default=())

    def __post_init__(self):
        merged: dict[ExpVec, int] = {}
        r = self.numerator.nvars
        for m, k in self.factors:
            m = tuple(int(x) for x in m)
            if len(m) != r:
                raise ValueError(f"factor monomial {m} has wrong length (expected {r})")
            if is_zero_vec(m):
                raise ValueError("denominator factor (1 - 1) is not allowed")
            if k <= 0:
                raise ValueError(f"factor multiplicity must be positive, got {k}")
            merged[m] = merged.get(m, 0) + int(k)
        ordered = tuple(sorted(merged.items(), key=lambda mk: factor_sort_key(mk[0])))
        object.__setattr__(self, "factors", ordered)

    @property
    def nvars(self) -> int:
        return self.numerator.nvars

    def denominator_poly(self) -> LaurentPoly:
        """The denominator multiplied out as a Laurent polynomial."""
        out = LaurentPoly.one(self.nvars)
        for m, k in self.factors:
            out = lp_mul(out, lp_pow(one_minus(m), k))
        return out

    def scale(self, c: int) -> FactoredRational:
        return FactoredRational(self.numerator * c, self.factors)

    def __neg__(self) -> FactoredRational:
        return self.scale(-1)

    def __str__(self) -> str:
        return print_rational(self)


def one_minus(m: ExpVec) -> LaurentPoly:
    r = len(m)
    return LaurentPoly(r, {(0,) * r: 1, tuple(m): -1})


def from_parts(numerator: LaurentPoly, denominators: Iterable[tuple[ExpVec, int]]) -> FactoredRational:
    return FactoredRational(numerator, tuple(denominators))


# ---------------------------------------------------------------- parsing

class _Parser:
    def __init__(self, text: str, nvars: int):
        self.text = text
        self.nvars = nvars
        self.pos = 0
        self._skip()

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, k: int = 0) -> str:
        # k-th non-space character ahead
        p = self.pos
        seen = 0
        while p < len(self.text):
            ch = self.text[p]
            if not ch.isspace():
                if seen == k:
                    return ch
                seen += 1
            p += 1
        return ""

    def error(self, msg: str, pos: int | None = None):
        raise ParseError(msg, self.pos if pos is None else pos, self.text)

    def eat(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1
        self._skip()

    def integer(self, signed: bool = False) -> int:
        start = self.pos
        if signed and self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
            self._skip()
        else:
            sign = 1
        digits = ""
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            digits += self.text[self.pos]
            self.pos += 1
        if not digits:
            self.error("expected an integer", start)
        self._skip()
        return sign * int(digits)

    def variable(self) -> int:
        start = self.pos
        self.eat("t")
        if self.pos < len(self.text) and self.text[self.pos].isdigit():
            idx = self.integer()
            if not 1 <= idx <= self.nvars:
                self.error(f"variable t{idx} out of range 1..{self.nvars}", start)
            return idx - 1
        if self.nvars != 1:
            self.error("bare 't' is only allowed for one variable", start)
        return 0

    # numerator: sum of products of powered atoms
    def expr(self) -> LaurentPoly:
        r = self.nvars
        total = LaurentPoly.zero(r)
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.eat(self.peek())
        total = total + self.product() * sign
        while self.peek() in ("+", "-") and self.peek() != "":
            sign = -1 if self.peek() == "-" else 1
            self.eat(self.peek())
            total = total + self.product() * sign
        return total

    def product(self) -> LaurentPoly:
        val = self.power()
        while True:
            ch = self.peek()
            if ch == "*":
                self.eat("*")
                val = lp_mul(val, self.power())
            elif ch == "t" or ch == "(":
                # juxtaposition such as 3t1 or 2(1-t)
                val = lp_mul(val, self.power())
            else:
                return val

    def power(self) -> LaurentPoly:
        ch = self.peek()
        r = self.nvars
        if ch == "(":
            self.eat("(")
            base = self.expr()
            self.eat(")")
            if self.peek() == "^":
                self.eat("^")
                start = self.pos
                k = self.integer(signed=True)
                if k < 0:
                    if len(base) != 1:
                        self.error("negative power of a non-monomial", start)
                    (e, c), = base.items()
                    if abs(c) != 1:
                        self.error("negative power of a non-unit monomial", start)
                    return LaurentPoly(r, {tuple(k * x for x in e): c ** (-k)})
                return lp_pow(base, k)
            return base
        if ch == "t":
            i = self.variable()
            k = 1
            if self.peek() == "^":
                self.eat("^")
                k = self.integer(signed=True)
            e = [0] * r
            e[i] = k
            return LaurentPoly(r, {tuple(e): 1})
        if ch.isdigit():
            return LaurentPoly.constant(r, self.integer())
        self.error("expected a number, variable or '('")

    def denominator(self) -> list[tuple[ExpVec, int]]:
        factors: list[tuple[ExpVec, int]] = []
        self.eat("(")
        if self.peek() != "(":
            # lenient single-factor form "/(1-m)"
            factors.append((self.one_minus_body(), 1))
            self.eat(")")
            return factors
        while True:
            self.eat("(")
            m = self.one_minus_body()
            self.eat(")")
            k = 1
            if self.peek() == "^":
                self.eat("^")
                start = self.pos
                k = self.integer()
                if k <= 0:
                    self.error("denominator power must be positive", start)
            factors.append((m, k))
            if self.peek() == "*":
                self.eat("*")
                continue
            break
        self.eat(")")
        return factors

    def one_minus_body(self) -> ExpVec:
        start = self.pos
        poly = self.expr()
        r = self.nvars
        zero = (0,) * r
        terms = poly.terms
        if len(terms) != 2 or terms.get(zero) != 1:
            self.error("denominator factor must have the form (1 - monomial)", start)
        (m, c), = [(e, c) for e, c in terms.items() if e != zero]
        if c != -1:
            self.error("denominator factor must have the form (1 - monomial)", start)
        return m


def parse_rational(text: str, num_vars: int) -> FactoredRational:
    """Parse ``text`` into a FactoredRational in ``num_vars`` variables."""
    p = _Parser(text, num_vars)
    if p.peek() == "":
        p.error("empty expression")
    num = p.expr()
    factors: list[tuple[ExpVec, int]] = []
    if p.peek() == "/":
        p.eat("/")
        start = p.pos
        factors = p.denominator()
        for m, _ in factors:
            if is_zero_vec(m):
                p.error("zero-vector denominator monomial", start)
    if p.pos != len(p.text):
        p.error("unexpected trailing input")
    return FactoredRational(num, tuple(factors))


# ---------------------------------------------------------------- printing

def _var_name(i: int, r: int) -> str:
    return "t" if r == 1 else f"t{i + 1}"


def print_monomial(e: ExpVec) -> str:
    r = len(e)
    parts = []
    for i, x in enumerate(e):
        if x == 0:
            continue
        name = _var_name(i, r)
        parts.append(name if x == 1 else f"{name}^{x}")
    return "*".join(parts)


def print_poly(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for idx, (e, c) in enumerate(p.items()):
        mono = print_monomial(e)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}{mono}"
        if idx == 0:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(sign + body)
    return "".join(out)


def print_rational(f: FactoredRational) -> str:
    num = print_poly(f.numerator)
    if len(f.numerator) > 1:
        num = f"({num})"
    if not f.factors:
        return num
    dens = []
    for m, k in f.factors:
        s = f"(1-{print_monomial(m)})"
        dens.append(s if k == 1 else f"{s}^{k}")
    return f"{num}/({'*'.join(dens)})"


# ---------------------------------------------------------------- algebra

def apply_matrix(e: ExpVec, images: Sequence[ExpVec]) -> ExpVec:
    """Exponent of prod_i (t^{images[i]})^{e_i}."""
    out = [0] * len(images[0])
    for ei, img in zip(e, images):
        if ei:
            for j, x in enumerate(img):
                out[j] += ei * x
    return tuple(out)


def substitute(f: FactoredRational, images: Sequence[ExpVec]) -> FactoredRational:
    """Replace t_i by the Laurent monomial t^{images[i]}.

    The result lives in ``len(images[0])`` variables, so this also covers
    restriction to fewer variables.
    """
    images = [tuple(int(x) for x in img) for img in images]
    if len(images) != f.nvars:
        raise ValueError(f"need {f.nvars} images, got {len(images)}")
    s = len(images[0])
    if any(len(img) != s for img in images):
        raise ValueError("all images must have the same length")
    num = f.numerator.map_exponents(lambda e: apply_matrix(e, images), s)
    factors = []
    for m, k in f.factors:
        mm = apply_matrix(m, images)
        if is_zero_vec(mm):
            raise ValueError(f"factor (1 - t^{m}) becomes (1 - 1) under the substitution")
        factors.append((mm, k))
    return FactoredRational(num, tuple(factors))


def combine_sum(terms: Sequence[tuple[int, FactoredRational]], cancel: bool = False) -> FactoredRational:
    """Sum of signed rationals over the factorwise LCM of their denominators."""
    if not terms:
        raise ValueError("combine_sum needs at least one term")
    r = terms[0][1].nvars
    lcm: dict[ExpVec, int] = {}
    for _, f in terms:
        if f.nvars != r:
            raise ValueError("variable count mismatch in combine_sum")
        for m, k in f.factors:
            lcm[m] = max(lcm.get(m, 0), k)
    num = LaurentPoly.zero(r)
    for sign, f in terms:
        own = dict(f.factors)
        part = f.numerator * sign
        for m, k in lcm.items():
            extra = k - own.get(m, 0)
            if extra:
                part = lp_mul(part, lp_pow(one_minus(m), extra))
        num = num + part
    out = FactoredRational(num, tuple(lcm.items()))
    return cancel_factors(out) if cancel else out


def divide_one_minus(p: LaurentPoly, m: ExpVec) -> LaurentPoly | None:
    """Exact quotient p / (1 - t^m), or None if (1 - t^m) does not divide p."""
    if p.is_zero():
        return p
    # order by a functional that is positive on m; the lowest term of the
    # remainder must be cancelled by the quotient at each step
    w = tuple(m)
    key = lambda e: sum(a * b for a, b in zip(w, e))
    top = max(key(e) for e, _ in p.items())
    rem = dict(p.terms)
    quo: dict[ExpVec, int] = {}
    while rem:
        low = min(key(e) for e in rem)
        if low > top:
            return None
        batch = [e for e in rem if key(e) == low]
        for e in batch:
            c = rem.pop(e)
            quo[e] = quo.get(e, 0) + c
            e2 = tuple(a + b for a, b in zip(e, m))
            v = rem.get(e2, 0) + c
            if v:
                rem[e2] = v
            else:
                rem.pop(e2, None)
    return LaurentPoly(p.nvars, quo)


def cancel_factors(f: FactoredRational) -> FactoredRational:
    """Cancel whole (1 - t^m) factors that divide the numerator."""
    num = f.numerator
    factors = dict(f.factors)
    for m in list(factors):
        while factors.get(m, 0) > 0:
            q = divide_one_minus(num, m)
            if q is None:
                break
            num = q
            factors[m] -= 1
            if factors[m] == 0:
                del factors[m]
    return FactoredRational(num, tuple(factors.items()))
