"""Exact multivariate Laurent polynomials with integer coefficients.

A polynomial is a finite map from exponent tuples to nonzero Python ints.
Python ints are arbitrary precision, so coefficient overflow cannot happen.
"""

from __future__ import annotations

from math import factorial
from typing import Iterable, Iterator, Mapping

ExpVec = tuple[int, ...]


def vec_add(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x + y for x, y in zip(a, b))


def vec_neg(a: ExpVec) -> ExpVec:
    return tuple(-x for x in a)


def vec_scale(a: ExpVec, k: int) -> ExpVec:
    return tuple(k * x for x in a)


def is_zero_vec(a: ExpVec) -> bool:
    return not any(a)


class LaurentPoly:
    """Immutable sparse Laurent polynomial in ``nvars`` variables.

    Terms are stored in sorted exponent order so that iteration, printing
    and hashing are deterministic.
    """

    __slots__ = ("_nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[ExpVec, int] | Iterable[tuple[ExpVec, int]] = ()):
        if nvars < 1:
            raise ValueError("a Laurent polynomial needs at least one variable")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[ExpVec, int] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} entries")
            acc[e] = acc.get(e, 0) + int(c)
        self._nvars = nvars
        self._terms = {e: acc[e] for e in sorted(acc) if acc[e] != 0}
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, nvars: int) -> LaurentPoly:
        return cls(nvars)

    @classmethod
    def one(cls, nvars: int) -> LaurentPoly:
        return cls(nvars, {(0,) * nvars: 1})

    @classmethod
    def constant(cls, nvars: int, c: int) -> LaurentPoly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exp: ExpVec, coeff: int = 1) -> LaurentPoly:
        exp = tuple(exp)
        return cls(len(exp), {exp: coeff})

    @classmethod
    def variable(cls, nvars: int, i: int) -> LaurentPoly:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def _raw(cls, nvars: int, terms: dict[ExpVec, int]) -> LaurentPoly:
        # trusted constructor: terms has no zeros and correct lengths
        obj = cls.__new__(cls)
        obj._nvars = nvars
        obj._terms = {e: terms[e] for e in sorted(terms)}
        obj._hash = None
        return obj

    # accessors
    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> dict[ExpVec, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[ExpVec, int]]:
        return iter(self._terms.items())

    def coeff(self, e: ExpVec) -> int:
        return self._terms.get(tuple(e), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self == LaurentPoly.constant(self._nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._nvars == other._nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._nvars, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({self._nvars}, {self._terms!r})"

    # arithmetic
    def _check(self, other: LaurentPoly) -> None:
        if self._nvars != other._nvars:
            raise ValueError(f"variable count mismatch: {self._nvars} vs {other._nvars}")

    def _coerce(self, other: object) -> LaurentPoly:
        if isinstance(other, int):
            return LaurentPoly.constant(self._nvars, other)
        if isinstance(other, LaurentPoly):
            return other
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other: object) -> LaurentPoly:
        return lp_add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw(self._nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: object) -> LaurentPoly:
        return lp_add(self, -self._coerce(other))

    def __rsub__(self, other: object) -> LaurentPoly:
        return lp_add(self._coerce(other), -self)

    def __mul__(self, other: object) -> LaurentPoly:
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly.zero(self._nvars)
            return LaurentPoly._raw(self._nvars, {e: c * other for e, c in self._terms.items()})
        return lp_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        return lp_pow(self, k)

    def shift(self, e: ExpVec) -> LaurentPoly:
        """Multiply by the monomial t^e."""
        return LaurentPoly._raw(self._nvars, {vec_add(x, e): c for x, c in self._terms.items()})

    def map_exponents(self, fn, nvars: int | None = None) -> LaurentPoly:
        """Apply ``fn`` to every exponent (collisions are summed)."""
        return LaurentPoly(self._nvars if nvars is None else nvars, ((fn(e), c) for e, c in self._terms.items()))


def lp_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._check(b)
    out = dict(a._terms)
    for e, c in b._terms.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return LaurentPoly._raw(a.nvars, out)


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._check(b)
    if len(a) > len(b):
        a, b = b, a
    out: dict[ExpVec, int] = {}
    bt = list(b._terms.items())
    for ea, ca in a._terms.items():
        for eb, cb in bt:
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return LaurentPoly._raw(a.nvars, {e: c for e, c in out.items() if c})


def lp_pow(a: LaurentPoly, k: int) -> LaurentPoly:
    if k < 0:
        raise ValueError("negative power of a Laurent polynomial")
    result = LaurentPoly.one(a.nvars)
    base = a
    while k:
        if k & 1:
            result = lp_mul(result, base)
        k >>= 1
        if k:
            base = lp_mul(base, base)
    return result


def binom_poly(m: int, n: int) -> int:
    """(m+1)(m+2)...(m+n)/n!, the binomial C(m+n, n) continued to all integers m."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if -n <= m <= -1:
        return 0
    num = 1
    for j in range(1, n + 1):
        num *= m + j
    return num // factorial(n)
