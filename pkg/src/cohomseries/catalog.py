"""Variety data, Hilbert-Poincare series constructors and the series catalog.

Every catalog entry stores the generating functions degree by degree in
the form

    CS^i = sign * part( constant + sum of coefficient * (rational, plan, filter) )

where ``part`` is the identity, or keeps only the positive or negative
coefficients (used when a single expansion encodes CS^1 - CS^2).  Signs and
constants are kept exactly as they appear in the source formulas; nothing
is normalised here.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Callable, Sequence

from .laurent import ExpVec, LaurentPoly, lp_mul, lp_pow
from .rational import FactoredRational, combine_sum, one_minus, parse_rational, substitute
from .series import ExpansionPlan, ExponentFilter, Point


# ---------------------------------------------------------------- varieties

@dataclass(frozen=True)
class EquationMask:
    """Restrict the monomials of equation ``equation`` so that the exponent of
    factor ``factor`` lies in ``allowed``; all other coefficients stay random."""

    equation: int
    factor: int
    allowed: tuple[ExpVec, ...]


@dataclass(frozen=True)
class ConfigurationMatrix:
    """Complete intersection in P^{n_1} x ... x P^{n_p}.

    ``degrees[i][j]`` is the degree of equation j in the coordinates of
    factor i, so columns are equations.
    """

    factors: tuple[int, ...]
    degrees: tuple[tuple[int, ...], ...]
    masks: tuple[EquationMask, ...] = ()
    name: str = ""

    def __post_init__(self):
        factors = tuple(int(n) for n in self.factors)
        degrees = tuple(tuple(int(d) for d in row) for row in self.degrees)
        if not factors or any(n < 1 for n in factors):
            raise ValueError("factors must be positive projective dimensions")
        if len(degrees) != len(factors):
            raise ValueError("degrees needs one row per projective factor")
        q = len(degrees[0]) if degrees else 0
        if any(len(row) != q for row in degrees):
            raise ValueError("ragged degree matrix")
        if any(d < 0 for row in degrees for d in row):
            raise ValueError("degrees must be nonnegative")
        if sum(factors) - q < 1:
            raise ValueError("dimension of the complete intersection must be at least 1")
        masks = tuple(
            m if isinstance(m, EquationMask) else EquationMask(m[0], m[1], tuple(tuple(a) for a in m[2]))
            for m in self.masks
        )
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "masks", masks)

    @property
    def picard_rank(self) -> int:
        return len(self.factors)

    @property
    def num_equations(self) -> int:
        return len(self.degrees[0])

    @property
    def dim(self) -> int:
        return sum(self.factors) - self.num_equations

    def equation(self, j: int) -> ExpVec:
        return tuple(row[j] for row in self.degrees)

    def equations(self) -> list[ExpVec]:
        return [self.equation(j) for j in range(self.num_equations)]

    def to_json(self) -> dict:
        out: dict = {"factors": list(self.factors), "degrees": [list(r) for r in self.degrees]}
        if self.masks:
            out["masks"] = [
                {"equation": m.equation, "factor": m.factor, "allowed": [list(a) for a in m.allowed]}
                for m in self.masks
            ]
        return out


@dataclass(frozen=True)
class ToricAmbient:
    """Weight matrix (p rows of scalings, r coordinate columns) plus equation degrees."""

    weights: tuple[tuple[int, ...], ...]
    equations: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        w = tuple(tuple(int(x) for x in row) for row in self.weights)
        if not w or any(len(row) != len(w[0]) for row in w):
            raise ValueError("weight matrix must be rectangular and nonempty")
        eqs = tuple(tuple(int(x) for x in e) for e in self.equations)
        if any(len(e) != len(w) for e in eqs):
            raise ValueError("each equation needs one degree per scaling")
        if _rank(w) != len(w):
            raise ValueError("weight matrix must have full row rank")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "equations", eqs)

    @property
    def picard_rank(self) -> int:
        return len(self.weights)

    @property
    def num_coords(self) -> int:
        return len(self.weights[0])

    def column(self, j: int) -> ExpVec:
        return tuple(row[j] for row in self.weights)


def _rank(rows: Sequence[Sequence[int]]) -> int:
    from fractions import Fraction

    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                fac = m[i][c] / m[rank][c]
                m[i] = [a - fac * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def load_variety(path: str | Path) -> ConfigurationMatrix | ToricAmbient:
    data = json.loads(Path(path).read_text())
    return variety_from_json(data)


def variety_from_json(data: dict) -> ConfigurationMatrix | ToricAmbient:
    if "weights" in data:
        return ToricAmbient(tuple(map(tuple, data["weights"])), tuple(map(tuple, data.get("equations", []))))
    if "factors" not in data or "degrees" not in data:
        raise ValueError("variety file needs 'factors' and 'degrees', or 'weights'")
    masks = tuple(
        EquationMask(int(m["equation"]), int(m["factor"]), tuple(tuple(a) for a in m["allowed"]))
        for m in data.get("masks", [])
    )
    degrees = data["degrees"]
    if degrees and not isinstance(degrees[0], list):
        degrees = [[d] for d in degrees]
    return ConfigurationMatrix(tuple(data["factors"]), tuple(map(tuple, degrees)), masks, data.get("name", ""))


class VarietyType(enum.Enum):
    FANO = "Fano"
    SEMI_FANO = "SemiFano"
    CALABI_YAU = "CalabiYau"
    GENERAL = "General"


# ---------------------------------------------------------------- series constructors

def _unit(r: int, i: int) -> ExpVec:
    return tuple(1 if j == i else 0 for j in range(r))


def hs_ci(config: ConfigurationMatrix) -> FactoredRational:
    p = config.picard_rank
    num = LaurentPoly.one(p)
    for eq in config.equations():
        num = lp_mul(num, one_minus(eq))
    return FactoredRational(num, tuple((_unit(p, i), n + 1) for i, n in enumerate(config.factors)))


def hs_weighted_projective(weights: Sequence[int], equation_degrees: Sequence[int] = ()) -> FactoredRational:
    if not weights:
        raise ValueError("weights must be nonempty")
    if any(a <= 0 for a in weights):
        raise ValueError("weights must be positive")
    num = LaurentPoly.one(1)
    for d in equation_degrees:
        num = lp_mul(num, one_minus((d,)))
    return FactoredRational(num, tuple(((a,), 1) for a in weights))


def hs_toric(ambient: ToricAmbient) -> FactoredRational:
    p = ambient.picard_rank
    factors = []
    for j in range(ambient.num_coords):
        col = ambient.column(j)
        if not any(col):
            raise ValueError(f"coordinate {j} has all-zero weights")
        factors.append((col, 1))
    num = LaurentPoly.one(p)
    for eq in ambient.equations:
        num = lp_mul(num, one_minus(eq))
    return FactoredRational(num, tuple(factors))


def canonical_class(config: ConfigurationMatrix) -> ExpVec:
    return tuple(sum(row) - (n + 1) for row, n in zip(config.degrees, config.factors))


def classify_type(config: ConfigurationMatrix) -> VarietyType:
    sums = [sum(row) for row in config.degrees]
    caps = [n + 1 for n in config.factors]
    if all(s < c for s, c in zip(sums, caps)):
        return VarietyType.FANO
    if all(s == c for s, c in zip(sums, caps)):
        return VarietyType.CALABI_YAU
    if all(s <= c for s, c in zip(sums, caps)):
        return VarietyType.SEMI_FANO
    return VarietyType.GENERAL


def euler_corner_terms(config: ConfigurationMatrix | int) -> list[tuple[int, ExpansionPlan]]:
    p = config if isinstance(config, int) else config.picard_rank
    out = []
    for sigma in product((Point.ZERO, Point.INF), repeat=p):
        sign = (-1) ** sum(1 for s in sigma if s is Point.INF)
        out.append((sign, ExpansionPlan(tuple(enumerate(sigma)))))
    return out


# ---------------------------------------------------------------- sequences

@dataclass(frozen=True)
class SequenceSpec:
    """x_{n+1} = c1 x_n - c2 x_{n-1}, seeded at two consecutive indices."""

    name: str
    c1: int
    c2: int
    seeds: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        (i0, _), (i1, _) = self.seeds
        if i1 != i0 + 1:
            raise ValueError("seeds must sit at consecutive indices")
        if self.c2 == 0:
            raise ValueError("c2 must be nonzero to run the recurrence backwards")


def sequence_values(spec: SequenceSpec, n_lo: int, n_hi: int) -> list[int]:
    if n_lo > n_hi:
        raise ValueError("n_lo must not exceed n_hi")
    return [sequence_value(spec, n) for n in range(n_lo, n_hi + 1)]


@lru_cache(maxsize=None)
def sequence_value(spec: SequenceSpec, n: int) -> int:
    (i0, x0), (i1, x1) = spec.seeds
    if n == i0:
        return x0
    if n == i1:
        return x1
    if n > i1:
        a, b = x0, x1
        for _ in range(n - i1):
            a, b = b, spec.c1 * b - spec.c2 * a
        return b
    # backwards: x_{n-1} = (c1 x_n - x_{n+1}) / c2
    a, b = x0, x1
    for _ in range(i0 - n):
        num = spec.c1 * a - b
        if num % spec.c2:
            raise ValueError(f"sequence {spec.name} is not integral at index {n}")
        a, b = num // spec.c2, a
    return a


PELL_A = SequenceSpec("a", 6, 1, ((0, 0), (1, 1)))
SEQ_7726_A = SequenceSpec("a", 22, 1, ((0, -1), (1, 1)))
SEQ_7726_B = SequenceSpec("b", 22, 1, ((0, 0), (1, 3)))
SEQ_7726_C = SequenceSpec("c", 22, 1, ((0, 0), (1, 8)))


# ---------------------------------------------------------------- catalog entries

@dataclass(frozen=True)
class SeriesTerm:
    coefficient: int
    rational: FactoredRational
    plan: ExpansionPlan
    filter: ExponentFilter | None = None


@dataclass(frozen=True)
class FamilySummand:
    """coefficient * sum_{n in [n_lo, n_hi]} (sum of generator(n), plan), filtered.

    ``n_lo`` / ``n_hi`` of None mean unbounded.
    """

    coefficient: int
    generator: Callable[[int], tuple[tuple[int, FactoredRational], ...]]
    plan: ExpansionPlan
    n_lo: int | None
    n_hi: int | None
    filter: ExponentFilter | None = None
    label: str = ""

    def covers(self, n: int) -> bool:
        return (self.n_lo is None or n >= self.n_lo) and (self.n_hi is None or n <= self.n_hi)

    def terms_at(self, n: int) -> list[tuple[int, FactoredRational, ExpansionPlan, ExponentFilter | None]]:
        if not self.covers(n):
            return []
        return [(self.coefficient * c, f, self.plan, self.filter) for c, f in self.generator(n)]


@dataclass(frozen=True)
class DegreeSeries:
    sign: int
    constant: LaurentPoly
    terms: tuple[SeriesTerm, ...] = ()
    families: tuple[FamilySummand, ...] = ()
    part: str = "all"  # "all", "positive" or "negative"

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.part not in ("all", "positive", "negative"):
            raise ValueError(f"unknown part {self.part!r}")


@dataclass(frozen=True)
class CohomologySeriesSpec:
    variety_id: str
    picard_rank: int
    dim: int
    canonical: ExpVec
    degrees: dict[int, DegreeSeries]
    config: ConfigurationMatrix | None = None
    hirzebruch_n: int | None = None
    extras: dict = field(default_factory=dict)


def _plan(*steps: tuple[int, str]) -> ExpansionPlan:
    return ExpansionPlan.of(*steps)


def _single(f: FactoredRational, plan: ExpansionPlan, sign: int = 1, const: int = 0) -> DegreeSeries:
    return DegreeSeries(sign, LaurentPoly.constant(f.nvars, const), (SeriesTerm(1, f, plan),))


def _zero(p: int) -> DegreeSeries:
    return DegreeSeries(1, LaurentPoly.zero(p))


P00_21 = _plan((2, "0"), (1, "0"))
P0I_21 = _plan((2, "0"), (1, "inf"))
PI0_21 = _plan((2, "inf"), (1, "0"))
PII_21 = _plan((2, "inf"), (1, "inf"))
P00_12 = _plan((1, "0"), (2, "0"))
P0I_12 = _plan((1, "0"), (2, "inf"))
PI0_12 = _plan((1, "inf"), (2, "0"))
PII_12 = _plan((1, "inf"), (2, "inf"))


def hirzebruch_rational(n: int) -> FactoredRational:
    return hs_toric(hirzebruch_ambient(n))


def hirzebruch_ambient(n: int) -> ToricAmbient:
    # coordinates z1..z4 with weights (0,1), (1,n), (0,1), (1,0)
    return ToricAmbient(((0, 1, 0, 1), (1, n, 1, 0)))


def p1pn_ambient(d: int, e: int, n: int) -> ToricAmbient:
    # x0, x1 | y0..yn | z1..zd, cut out by d+1 equations of degree (0, e)
    row1 = (1, 1) + (0,) * (n + 1) + (-1,) * d
    row2 = (0, 0) + (1,) * (n + 1) + (e,) * d
    return ToricAmbient((row1, row2), tuple((0, e) for _ in range(d + 1)))


def p1pn_rational(d: int, e: int, n: int) -> FactoredRational:
    return hs_toric(p1pn_ambient(d, e, n))


def _entry_hirzebruch(n: int) -> CohomologySeriesSpec:
    if n < 1:
        raise ValueError("hirzebruch:n needs n >= 1")
    f = hirzebruch_rational(n)
    z = LaurentPoly.zero(2)
    degrees = {
        0: _single(f, P00_12),
        1: DegreeSeries(1, z, (SeriesTerm(1, f, PI0_12), SeriesTerm(1, f, P0I_12))),
        2: _single(f, PII_12),
    }
    return CohomologySeriesSpec(f"hirzebruch:{n}", 2, 2, (-2, -n - 2), degrees, hirzebruch_n=n)


def _entry_p1pn(d: int, e: int, n: int, vid: str | None = None) -> CohomologySeriesSpec:
    if n < 3:
        raise ValueError("p1pn needs n >= 3")
    f = p1pn_rational(d, e, n)
    s = (-1) ** n
    degrees = {i: _zero(2) for i in range(n + 1)}
    degrees[0] = _single(f, P00_21)
    degrees[1] = _single(f, P0I_21)
    degrees[n - 1] = _single(f, PI0_21, sign=s)
    degrees[n] = _single(f, PII_21, sign=s)
    config = ConfigurationMatrix((1, n), ((d,), (e,)))
    return CohomologySeriesSpec(vid or f"p1pn:({d},{e},{n})", 2, n, canonical_class(config), degrees, config)


def _entry_surf2e(e: int) -> CohomologySeriesSpec:
    if e < 3:
        raise ValueError("surf2e:e needs e >= 3")
    # the (2, e) surface in P1 x P2 as a complete intersection in its toric ambient
    ambient = ToricAmbient(((1, 1, 0, 0, 0, -1, -1), (0, 0, 1, 1, 1, e, e)), ((0, e), (0, e), (0, e)))
    f = hs_toric(ambient)
    z = LaurentPoly.zero(2)
    degrees = {
        0: _single(f, P00_21),
        1: DegreeSeries(1, z, (SeriesTerm(1, f, PI0_21), SeriesTerm(1, f, P0I_21))),
        2: _single(f, PII_21),
    }
    config = ConfigurationMatrix((1, 2), ((2,), (e,)))
    return CohomologySeriesSpec(f"surf2e:{e}", 2, 2, canonical_class(config), degrees, config, extras={"ambient": ambient})


H24_TUNED_MASK = EquationMask(0, 0, ((2, 0), (0, 2)))


def h24_generic_decomposition() -> list[tuple[int, FactoredRational]]:
    """HS(X) + HS(X, t1^-1 t2^4, t2) - (1 - t2^4)/(1 - t2)^4, all at (t2:0, t1:0)."""
    hs = hs_ci(ConfigurationMatrix((1, 3), ((2,), (4,))))
    flopped = substitute(hs, [(-1, 4), (0, 1)])
    corr = parse_rational("(1-t2^4)/((1-t2)^4)", 2)
    return [(1, hs), (1, flopped), (-1, corr)]


def h24_tuned_decomposition() -> list[tuple[int, FactoredRational]]:
    a = parse_rational("(1-t1^2*t2^4)/((1-t1)^2*(1-t2)^4)", 2)
    b = parse_rational("(1-t1^-2*t2^8)^2/((1-t1^-2*t2^4)*(1-t1^-1*t2^4)^2*(1-t2)^4)", 2)
    c = parse_rational("(1-t2^4)/((1-t2)^4)", 2)
    return [(1, a), (1, b), (-1, c)]


def tuned_rational() -> FactoredRational:
    return parse_rational("(1-t2^4)^2/((1-t1)^2*(1-t2)^4*(1-t1^-2*t2^4))", 2)


def _entry_h24_tuned() -> CohomologySeriesSpec:
    f = tuned_rational()
    degrees = {
        0: _single(f, P00_21),
        1: _single(f, P0I_21),
        2: _single(f, PI0_21, sign=-1),
        3: _single(f, PII_21, sign=-1),
    }
    config = ConfigurationMatrix((1, 3), ((2,), (4,)), (H24_TUNED_MASK,))
    return CohomologySeriesSpec("h24-tuned", 2, 3, canonical_class(config), degrees, config)


def cicy7885_rational() -> FactoredRational:
    ambient = ToricAmbient(
        ((1, 1, 0, 0, 0, 0, 0, -1, -1), (0, 0, 1, 1, 1, 1, 1, 1, 4)),
        ((0, 1), (0, 1), (0, 4), (0, 4)),
    )
    return hs_toric(ambient)


def _entry_cicy7885() -> CohomologySeriesSpec:
    f = cicy7885_rational()
    degrees = {
        0: _single(f, P00_21),
        1: _single(f, PI0_21),
        2: _single(f, P0I_21),
        3: _single(f, PII_21),
    }
    config = ConfigurationMatrix((1, 4), ((1, 1), (1, 4)))
    alt = {1: _single(f, P0I_21), 2: _single(f, PI0_21)}
    # same swap, plus the (-1)^n convention used for the other P1-fibred entries
    signed = {1: _single(f, P0I_21), 2: _single(f, PI0_21, sign=-1), 3: _single(f, PII_21, sign=-1)}
    return CohomologySeriesSpec("cicy7885", 2, 3, canonical_class(config), degrees, config,
                                extras={"alternative_degrees": alt, "signed_alternative_degrees": signed})


def cicy7643_pieces() -> list[tuple[int, FactoredRational]]:
    hs = parse_rational("(1-t2^2)^2*(1-t1^2*t2)*(1-t1*t2)/((1-t1)^3*(1-t2)^6)", 2)
    flopped = parse_rational(
        "(1-t2^2)^2*(1-(t1^-1*t2^3)^2*t2)*(1-(t1^-1*t2^3)*t2)/((1-t1^-1*t2^3)^3*(1-t2)^6)", 2
    )
    corr = parse_rational("(1-t2^2)^3/((1-t2)^6)", 2)
    return [(1, hs), (1, flopped), (-1, corr)]


def _entry_cicy7643() -> CohomologySeriesSpec:
    pieces = cicy7643_pieces()
    z = LaurentPoly.zero(2)
    cs0 = DegreeSeries(1, z, tuple(SeriesTerm(c, f, P00_21) for c, f in pieces))
    g = combine_sum(pieces)
    both = (SeriesTerm(1, g, P0I_21), SeriesTerm(1, g, PI0_21))
    degrees = {
        0: cs0,
        1: DegreeSeries(1, z, both, part="positive"),
        2: DegreeSeries(-1, z, both, part="negative"),
    }
    config = ConfigurationMatrix((2, 5), ((0, 0, 2, 1), (2, 2, 1, 1)))
    return CohomologySeriesSpec("cicy7643", 2, 3, canonical_class(config), degrees, config,
                                extras={"combined": g})


def bicubic_G(swap: bool = False) -> FactoredRational:
    text = "(t1^-1*t2)^3*((1+t1-t2)^3-1+3*t1*(1-t2))/((1-t1^-1*t2)^3*(1-t2)^3)"
    g = parse_rational(text, 2)
    return substitute(g, [(0, 1), (1, 0)]) if swap else g


def _entry_bicubic() -> CohomologySeriesSpec:
    g12 = bicubic_G()
    g21 = bicubic_G(swap=True)

    def deg(sign, const, plan_a, plan_b):
        return DegreeSeries(sign, LaurentPoly.constant(2, const), (SeriesTerm(1, g12, plan_a), SeriesTerm(1, g21, plan_b)))

    degrees = {
        0: deg(1, 1, P00_12, P00_12),
        1: deg(1, 0, PI0_12, P0I_12),
        2: deg(-1, 2, P0I_12, PI0_12),
        3: deg(-1, 1, PII_12, PII_12),
    }
    config = ConfigurationMatrix((2, 2), ((3,), (3,)))
    return CohomologySeriesSpec("bicubic", 2, 3, canonical_class(config), degrees, config)


# infinite flop families

def cicy7644_terms(n: int, correction_sign: int = 1) -> tuple[tuple[int, FactoredRational], ...]:
    """G_n and C_n; the catalog sums add them (``correction_sign`` = +1)."""
    a = lambda k: sequence_value(PELL_A, k)
    u = (a(n + 1), -a(n))
    v = (a(n), -a(n - 1))
    uv = (u[0] + v[0], u[1] + v[1])
    num = lp_mul(lp_mul(one_minus((2 * u[0], 2 * u[1])), one_minus((2 * v[0], 2 * v[1]))), lp_pow(one_minus(uv), 3))
    g = FactoredRational(num, ((u, 5), (v, 5)))
    c = FactoredRational(lp_mul(one_minus((2 * v[0], 2 * v[1])), one_minus((3 * v[0], 3 * v[1]))), ((v, 5),))
    return ((1, g), (correction_sign, c))


def cicy7726_hs() -> FactoredRational:
    return hs_ci(ConfigurationMatrix((3, 5), ((0, 1, 1, 1, 1), (2, 1, 1, 1, 1))))


def cicy7726_terms(n: int, correction_sign: int = 1) -> tuple[tuple[int, FactoredRational], ...]:
    a = lambda k: sequence_value(SEQ_7726_A, k)
    b = lambda k: sequence_value(SEQ_7726_B, k)
    c = lambda k: sequence_value(SEQ_7726_C, k)
    hs = cicy7726_hs()
    u = (a(n + 1), -b(n))
    v = (c(n), -a(n))
    w = (a(n), -b(n - 1))
    corr_c = parse_rational("(1-t^4)/((1-t)^4)", 1)
    corr_d = parse_rational("(1-t^2)*(1+t^4)/((1-t)^6)", 1)
    return (
        (1, substitute(hs, [u, v])),
        (1, substitute(hs, [v, w])),
        (correction_sign, substitute(corr_c, [v])),
        (correction_sign, substitute(corr_d, [w])),
    )


SUM_GE0 = ExponentFilter((((1, 1), ">=", 0),))
SUM_LE0 = ExponentFilter((((1, 1), "<=", 0),))


def _entry_cicy7644(correction_sign: int = 1, origin_constant: int = 0, vid: str = "cicy7644") -> CohomologySeriesSpec:
    gen = lambda n: cicy7644_terms(n, correction_sign)
    fam = FamilySummand
    cs = {
        0: DegreeSeries(1, LaurentPoly.constant(2, origin_constant), (), (
            fam(1, gen, P00_21, None, 0, label="n<=0"),
            fam(1, gen, P00_12, 1, None, label="n>=1"),
        )),
        1: DegreeSeries(1, LaurentPoly.zero(2), (), (
            fam(1, gen, P0I_21, None, 0, SUM_GE0, label="n<=0"),
            fam(1, gen, P0I_12, 0, None, SUM_GE0, label="n>=0"),
        )),
        2: DegreeSeries(-1, LaurentPoly.constant(2, -1), (), (
            fam(1, gen, PI0_21, None, 0, SUM_LE0, label="n<=0"),
            fam(1, gen, PI0_12, 1, None, SUM_LE0, label="n>=1"),
        )),
        3: DegreeSeries(-1, LaurentPoly.constant(2, -1), (), (
            fam(1, gen, PII_21, None, 0, label="n<=0"),
            fam(1, gen, PII_12, 0, None, label="n>=0"),
        )),
    }
    config = ConfigurationMatrix((4, 4), ((2, 0, 1, 1, 1), (0, 2, 1, 1, 1)))
    disjoint = {
        1: DegreeSeries(1, LaurentPoly.zero(2), (), (
            fam(1, gen, P0I_21, None, 0, SUM_GE0, label="n<=0"),
            fam(1, gen, P0I_12, 1, None, SUM_GE0, label="n>=1"),
        )),
        3: DegreeSeries(-1, LaurentPoly.constant(2, -1), (), (
            fam(1, gen, PII_21, None, 0, label="n<=0"),
            fam(1, gen, PII_12, 1, None, label="n>=1"),
        )),
    }
    return CohomologySeriesSpec(vid, 2, 3, canonical_class(config), cs, config,
                                extras={"disjoint_split": disjoint, "sequence": PELL_A})


def _entry_cicy7726(correction_sign: int = 1, origin_constant: int = 0, vid: str = "cicy7726") -> CohomologySeriesSpec:
    gen = lambda n: cicy7726_terms(n, correction_sign)
    cs0 = DegreeSeries(1, LaurentPoly.constant(2, origin_constant), (), (
        FamilySummand(1, gen, P00_21, None, 0, label="n<=0"),
        FamilySummand(1, gen, P00_12, 1, None, label="n>=1"),
    ))
    config = ConfigurationMatrix((3, 5), ((0, 1, 1, 1, 1), (2, 1, 1, 1, 1)))
    return CohomologySeriesSpec(vid, 2, 3, canonical_class(config), {0: cs0}, config,
                                extras={"sequences": (SEQ_7726_A, SEQ_7726_B, SEQ_7726_C)})


# quadric4x: the (2,2,2,2) hypersurface in (P1)^4

QUADRIC4X_M = (
    ((-1, 0, 0, 0), (2, 1, 0, 0), (2, 0, 1, 0), (2, 0, 0, 1)),
    ((1, 2, 0, 0), (0, -1, 0, 0), (0, 2, 1, 0), (0, 2, 0, 1)),
    ((1, 0, 2, 0), (0, 1, 2, 0), (0, 0, -1, 0), (0, 0, 2, 1)),
    ((1, 0, 0, 2), (0, 1, 0, 2), (0, 0, 1, 2), (0, 0, 0, -1)),
)

MORI_DEPTH_CAP = 6

Matrix = tuple[tuple[int, ...], ...]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)) for i in range(n))


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def chamber_key(w: Matrix) -> tuple[ExpVec, ...]:
    """A chamber is the set of columns of w, stored as a sorted tuple."""
    cols = [tuple(row[j] for row in w) for j in range(len(w[0]))]
    return tuple(sorted(cols))


def chamber_matrix(key: tuple[ExpVec, ...]) -> Matrix:
    n = len(key)
    return tuple(tuple(key[j][i] for j in range(n)) for i in range(n))


def mori_chambers_quadric4x(depth: int) -> list[Matrix]:
    """Chambers W(Nef) for words W of length <= depth, generators as columns."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > MORI_DEPTH_CAP:
        raise ValueError(f"depth {depth} exceeds cap {MORI_DEPTH_CAP}")
    seen: dict[tuple[ExpVec, ...], Matrix] = {}
    frontier = [identity(4)]
    seen[chamber_key(frontier[0])] = frontier[0]
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for m in QUADRIC4X_M:
                w2 = mat_mul(w, m)
                key = chamber_key(w2)
                if key not in seen:
                    seen[key] = w2
                    nxt.append(w2)
        frontier = nxt
    return [chamber_matrix(k) for k in seen]


def quadric4x_correction() -> FactoredRational:
    return parse_rational("(1-t1^2*t2^2*t3^2)/((1-t1)^2*(1-t2)^2*(1-t3)^2)", 3)


def _entry_quadric4x() -> CohomologySeriesSpec:
    config = ConfigurationMatrix((1, 1, 1, 1), ((2,), (2,), (2,), (2,)))
    f = hs_ci(config)
    degrees = {0: _single(f, ExpansionPlan.of((1, "0"), (2, "0"), (3, "0"), (4, "0")))}
    return CohomologySeriesSpec("quadric4x", 4, 3, canonical_class(config), degrees, config,
                                extras={"correction": quadric4x_correction(), "chamber_sum_only": True})


CATALOG_IDS = (
    "hirzebruch:n", "p1pn:(d,e,n)", "surf2e:e", "h24-generic", "h24-tuned", "h35",
    "cicy7885", "cicy7643", "bicubic", "cicy7644", "cicy7726", "quadric4x",
)


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.strip().strip("()").split(",")]


def catalog_entry(vid: str) -> CohomologySeriesSpec:
    key = vid.strip()
    if key.startswith("hirzebruch:"):
        return _entry_hirzebruch(int(key.split(":", 1)[1]))
    if key.startswith("p1pn:"):
        d, e, n = _ints(key.split(":", 1)[1])
        return _entry_p1pn(d, e, n)
    if key.startswith("surf2e:"):
        return _entry_surf2e(int(key.split(":", 1)[1]))
    fixed = {
        "h24-generic": lambda: _entry_p1pn(2, 4, 3, "h24-generic"),
        "h24-tuned": _entry_h24_tuned,
        "h35": lambda: _entry_p1pn(3, 5, 3, "h35"),
        "cicy7885": _entry_cicy7885,
        "cicy7643": _entry_cicy7643,
        "bicubic": _entry_bicubic,
        "cicy7644": _entry_cicy7644,
        "cicy7726": _entry_cicy7726,
        "quadric4x": _entry_quadric4x,
    }
    if key in fixed:
        return fixed[key]()
    raise KeyError(f"unknown catalog id {vid!r}; known: {', '.join(CATALOG_IDS)}")


DIAGNOSTIC_IDS = ("cicy7644:signed", "cicy7726:signed")


def diagnostic_entry(vid: str) -> CohomologySeriesSpec:
    """Sign-corrected variants of the infinite flop families.

    Each chamber term is G - C (resp. HS + HS - C - D) and the origin carries
    the constant 1, so every summand vanishes at t = 1.  These are comparison
    points for the catalog entries, not replacements.
    """
    if vid == "cicy7644:signed":
        return _entry_cicy7644(-1, 1, vid)
    if vid == "cicy7726:signed":
        return _entry_cicy7726(-1, 1, vid)
    raise KeyError(f"unknown diagnostic id {vid!r}; known: {', '.join(DIAGNOSTIC_IDS)}")


# standard configurations used across tests and scripts
QUINTIC = ConfigurationMatrix((4,), ((5,),), name="quintic")
H24 = ConfigurationMatrix((1, 3), ((2,), (4,)), name="h24")
BICUBIC = ConfigurationMatrix((2, 2), ((3,), (3,)), name="bicubic")
CICY7885 = ConfigurationMatrix((1, 4), ((1, 1), (1, 4)), name="cicy7885")
