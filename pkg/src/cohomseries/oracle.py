"""Independent line bundle cohomology: Bott, Kunneth, Koszul spectral sequence.

For a complete intersection X in A = P^{n_1} x ... x P^{n_p} cut out by
forms f_1..f_q, the Koszul resolution gives a spectral sequence

    E_1^{-k,i} = sum_{|S|=k} H^i(A, O(m - d_S))  =>  H^{i-k}(X, O_X(m)).

Ambient cohomology is represented by Laurent monomials (nonnegative
exponents for H^0 of a factor, all exponents <= -1 for its top cohomology),
and d_1 is multiplication by the forms.  A Kunneth summand is tagged by its
type: the set of factors sitting in top degree.  Multiplication preserves
the type, so E_1 splits into one Koszul complex per type and E_2 comes from
ranks of these complexes over F_p with random forms.

Higher differentials are not computed.  Their total rank between adjacent
total degrees is bounded, and is pinned exactly where positions outside
0..dim X must die.  Degrees that stay undetermined are reported as ranges.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

import flint

from .catalog import ConfigurationMatrix, EquationMask
from .laurent import ExpVec, binom_poly

DEFAULT_PRIME = 32003
DEFAULT_MAX_ENTRIES = 12_000_000


# ---------------------------------------------------------------- results

@dataclass(frozen=True)
class Exact:
    value: int

    @property
    def lo(self) -> int:
        return self.value

    @property
    def hi(self) -> int:
        return self.value

    def to_json(self):
        return self.value


@dataclass(frozen=True)
class Range:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty range [{self.lo}, {self.hi}]")

    def to_json(self):
        return [self.lo, self.hi]


Value = Exact | Range


@dataclass(frozen=True)
class CohomologyResult:
    values: tuple[Value, ...]
    indeterminate: frozenset[int] = frozenset()
    prime: int | None = None
    seeds: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.values) - 1

    def is_exact(self, i: int) -> bool:
        return isinstance(self.values[i], Exact) and i not in self.indeterminate

    def all_exact(self) -> bool:
        return all(self.is_exact(i) for i in range(len(self.values)))

    def h(self, i: int) -> int | None:
        return self.values[i].value if self.is_exact(i) else None

    def exact_values(self) -> tuple[int, ...]:
        if not self.all_exact():
            raise ValueError("result is not exact in every degree")
        return tuple(v.value for v in self.values)

    def to_json(self) -> dict:
        return {
            "h": [v.to_json() for v in self.values],
            "indeterminate": sorted(self.indeterminate),
            "prime": self.prime,
            "seeds": list(self.seeds),
        }


def exact_result(values: Sequence[int]) -> CohomologyResult:
    return CohomologyResult(tuple(Exact(int(v)) for v in values))


# ---------------------------------------------------------------- Bott / Kunneth / chi

def bott(n: int, m: int) -> tuple[int, ...]:
    if n < 1:
        raise ValueError("n must be positive")
    h = [0] * (n + 1)
    if m >= 0:
        h[0] = comb(m + n, n)
    if m <= -n - 1:
        h[n] = comb(-m - 1, n)
    return tuple(h)


def kunneth(factors: Sequence[int], m: Sequence[int]) -> tuple[int, ...]:
    if len(factors) != len(m):
        raise ValueError("need one degree per factor")
    total = [1]
    for n, a in zip(factors, m):
        b = bott(n, a)
        out = [0] * (len(total) + n)
        for i, x in enumerate(total):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        total = out
    return tuple(total)


def chi_ci(config: ConfigurationMatrix, m: Sequence[int]) -> int:
    """Euler characteristic from the Koszul alternating sum (a polynomial in m)."""
    q = config.num_equations
    total = 0
    eqs = config.equations()
    for k in range(q + 1):
        for S in combinations(range(q), k):
            term = 1
            for i, n in enumerate(config.factors):
                a = m[i] - sum(eqs[j][i] for j in S)
                term *= binom_poly(a, n)
            total += (-1) ** k * term
    return total


# ---------------------------------------------------------------- monomial bases

@lru_cache(maxsize=4096)
def compositions(total: int, parts: int) -> tuple[ExpVec, ...]:
    """Nonnegative integer vectors of length ``parts`` summing to ``total``."""
    if total < 0:
        return ()
    if parts == 1:
        return ((total,),)
    out = []
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


def h0_monomials(n: int, d: int) -> tuple[ExpVec, ...]:
    return compositions(d, n + 1)


def htop_monomials(n: int, d: int) -> tuple[ExpVec, ...]:
    # exponents all <= -1 summing to d
    return tuple(tuple(-1 - x for x in c) for c in compositions(-d - n - 1, n + 1))


def summand_type(factors: Sequence[int], shift: Sequence[int]) -> tuple[bool, ...] | None:
    """Which factors sit in top degree, or None if the summand vanishes."""
    tau = []
    for n, a in zip(factors, shift):
        if a >= 0:
            tau.append(False)
        elif a <= -n - 1:
            tau.append(True)
        else:
            return None
    return tuple(tau)


@dataclass(frozen=True)
class AmbientCohomologyBasis:
    """Monomial representatives of H^k(A, O(m)) grouped by Kunneth summand.

    Each summand is (type, per-factor monomial lists); the tensor basis is the
    product of the per-factor lists, with exponents concatenated.
    """

    factors: tuple[int, ...]
    m: tuple[int, ...]
    degree: int
    summands: tuple[tuple[tuple[bool, ...], tuple[tuple[ExpVec, ...], ...]], ...]

    def size(self) -> int:
        total = 0
        for _, lists in self.summands:
            s = 1
            for lst in lists:
                s *= len(lst)
            total += s
        return total

    def elements(self) -> list[ExpVec]:
        out = []
        for _, lists in self.summands:
            for combo in product(*lists):
                out.append(tuple(x for part in combo for x in part))
        return out


def ambient_basis(factors: Sequence[int], m: Sequence[int], k: int) -> AmbientCohomologyBasis:
    factors = tuple(factors)
    m = tuple(m)
    summands = []
    tau = summand_type(factors, m)
    if tau is not None and sum(n for n, t in zip(factors, tau) if t) == k:
        lists = tuple(
            htop_monomials(n, a) if t else h0_monomials(n, a) for n, a, t in zip(factors, m, tau)
        )
        summands.append((tau, lists))
    return AmbientCohomologyBasis(factors, m, k, tuple(summands))


def basis_elements(factors: Sequence[int], shift: Sequence[int], tau: tuple[bool, ...]) -> list[ExpVec]:
    lists = [htop_monomials(n, a) if t else h0_monomials(n, a) for n, a, t in zip(factors, shift, tau)]
    return [tuple(x for part in combo for x in part) for combo in product(*lists)]


def basis_size(factors: Sequence[int], shift: Sequence[int]) -> int:
    s = 1
    for n, a in zip(factors, shift):
        b = bott(n, a)
        s *= b[0] + (b[n] if n else 0)
    return s


# ---------------------------------------------------------------- random forms and ranks

def random_form(
    factors: Sequence[int],
    degree: Sequence[int],
    prime: int,
    rng: random.Random,
    masks: Iterable[EquationMask] = (),
) -> dict[ExpVec, int]:
    """Uniform random coefficients mod p on every allowed monomial of ``degree``."""
    masks = list(masks)
    lists = [h0_monomials(n, d) for n, d in zip(factors, degree)]
    form = {}
    for combo in product(*lists):
        if any(combo[mk.factor] not in mk.allowed for mk in masks):
            continue
        c = rng.randrange(prime)
        if c:
            form[tuple(x for part in combo for x in part)] = c
    return form


def _rng(seed: int, j: int) -> random.Random:
    return random.Random(seed * 1_000_003 + 7919 * j + 1)


def rank_mod_p(rows: int, cols: int, entries: dict[tuple[int, int], int], prime: int) -> int:
    if rows == 0 or cols == 0 or not entries:
        return 0
    mat = flint.nmod_mat(rows, cols, prime)
    for (r, c), v in entries.items():
        mat[r, c] = v % prime
    return mat.rank()


def _mult_entries(src: list[ExpVec], tgt_index: dict[ExpVec, int], form: dict[ExpVec, int],
                  sign: int, row_off: int, col_off: int, out: dict[tuple[int, int], int], prime: int) -> None:
    items = list(form.items())
    for ci, s in enumerate(src):
        col = col_off + ci
        for mono, c in items:
            t = tuple(a + b for a, b in zip(s, mono))
            ri = tgt_index.get(t)
            if ri is not None:
                key = (row_off + ri, col)
                out[key] = (out.get(key, 0) + sign * c) % prime


def mult_rank(
    source: AmbientCohomologyBasis,
    target: AmbientCohomologyBasis,
    poly_degree: Sequence[int],
    prime: int = DEFAULT_PRIME,
    seed: int = 0,
) -> int:
    """Rank over F_p of multiplication by a random form of ``poly_degree``."""
    if source.degree != target.degree or source.factors != target.factors:
        raise ValueError("source and target must be bases of the same cohomological degree")
    if tuple(a + d for a, d in zip(source.m, poly_degree)) != target.m:
        raise ValueError("target line bundle must be source + poly_degree")
    form = random_form(source.factors, poly_degree, prime, _rng(seed, 0))
    src = source.elements()
    tgt = target.elements()
    index = {e: i for i, e in enumerate(tgt)}
    entries: dict[tuple[int, int], int] = {}
    _mult_entries(src, index, form, 1, 0, 0, entries, prime)
    return rank_mod_p(len(tgt), len(src), entries, prime)


# ---------------------------------------------------------------- regularity

def generic_sequence_is_regular(config: ConfigurationMatrix) -> bool:
    """Whether generic forms of these multidegrees form a regular sequence in
    the Cox ring of the product, by dimension count over coordinate strata."""
    factors = config.factors
    p = len(factors)
    eqs = config.equations()
    N = sum(n + 1 for n in factors)
    target = N - len(eqs)
    if any(not any(e) for e in eqs):
        return False
    for T in product((False, True), repeat=p):
        if all(T):
            dim = 0
        else:
            surviving = sum(1 for e in eqs if all(e[i] == 0 for i in range(p) if T[i]))
            proj = sum(n for n, t in zip(factors, T) if not t)
            if proj < surviving:
                continue
            dim = sum(n + 1 for n, t in zip(factors, T) if not t) - surviving
        if dim > target:
            return False
    return True


# ---------------------------------------------------------------- spectral sequence

@dataclass
class _Interval:
    lo: int
    hi: int

    def __add__(self, other: _Interval) -> _Interval:
        return _Interval(self.lo + other.lo, self.hi + other.hi)


@dataclass
class SpectralData:
    """E_2 page as intervals, keyed by (k, i) with k the Koszul index."""

    e2: dict[tuple[int, int], _Interval] = field(default_factory=dict)
    used_random: bool = False

    def add(self, k: int, i: int, lo: int, hi: int) -> None:
        cur = self.e2.get((k, i))
        iv = _Interval(lo, hi)
        self.e2[(k, i)] = iv if cur is None else cur + iv


def _type_complexes(config: ConfigurationMatrix, m: Sequence[int]):
    factors = config.factors
    q = config.num_equations
    eqs = config.equations()
    groups: dict[tuple[bool, ...], dict[int, list[tuple[tuple[int, ...], tuple[int, ...]]]]] = {}
    for k in range(q + 1):
        for S in combinations(range(q), k):
            shift = tuple(m[i] - sum(eqs[j][i] for j in S) for i in range(len(factors)))
            tau = summand_type(factors, shift)
            if tau is None:
                continue
            groups.setdefault(tau, {}).setdefault(k, []).append((S, shift))
    return groups


def _e2_single(config: ConfigurationMatrix, m: Sequence[int], prime: int, seed: int,
               max_entries: int, shortcuts: bool) -> SpectralData:
    factors = config.factors
    q = config.num_equations
    regular = shortcuts and (q == 1 or (not config.masks and generic_sequence_is_regular(config)))
    data = SpectralData()
    forms = None
    full = tuple(True for _ in factors)
    empty = tuple(False for _ in factors)
    for tau, by_k in sorted(_type_complexes(config, m).items()):
        row = sum(n for n, t in zip(factors, tau) if t)
        dims = {k: sum(basis_size(factors, sh) for _, sh in by_k.get(k, [])) for k in range(q + 1)}
        if regular and tau in (empty, full):
            alt = sum((-1) ** k * d for k, d in dims.items())
            if tau == empty:
                data.add(0, row, alt, alt)
            else:
                v = (-1) ** q * alt
                data.add(q, row, v, v)
            continue
        # explicit ranks of delta_k: C_k -> C_{k-1}
        if forms is None:
            forms = [
                random_form(factors, config.equation(j), prime, _rng(seed, j),
                            [mk for mk in config.masks if mk.equation == j])
                for j in range(q)
            ]
        data.used_random = True
        ranks: dict[int, tuple[int, int]] = {0: (0, 0), q + 1: (0, 0)}
        bases: dict[int, tuple[list, dict]] = {}

        def block(k):
            if k not in bases:
                elems = []
                offsets = {}
                for S, sh in by_k.get(k, []):
                    offsets[S] = len(elems)
                    elems.extend(basis_elements(factors, sh, tau))
                bases[k] = (elems, offsets)
            return bases[k]

        for k in range(1, q + 1):
            rows, cols = dims[k - 1], dims[k]
            if rows == 0 or cols == 0:
                ranks[k] = (0, 0)
                continue
            if rows * cols > max_entries:
                ranks[k] = (0, min(rows, cols))
                continue
            src_elems, src_off = block(k)
            tgt_elems, tgt_off = block(k - 1)
            entries: dict[tuple[int, int], int] = {}
            for S, sh in by_k.get(k, []):
                n_src = basis_size(factors, sh)
                src = src_elems[src_off[S]:src_off[S] + n_src]
                for pos, j in enumerate(S):
                    T = S[:pos] + S[pos + 1:]
                    if T not in tgt_off:
                        continue
                    t_sh = next(sh2 for S2, sh2 in by_k[k - 1] if S2 == T)
                    n_t = basis_size(factors, t_sh)
                    t_el = tgt_elems[tgt_off[T]:tgt_off[T] + n_t]
                    index = {e: i for i, e in enumerate(t_el)}
                    _mult_entries(src, index, forms[j], (-1) ** pos, tgt_off[T], src_off[S], entries, prime)
            r = rank_mod_p(rows, cols, entries, prime)
            ranks[k] = (r, r)
        for k in range(q + 1):
            d = dims[k]
            if d == 0:
                continue
            lo = max(0, d - ranks[k][1] - ranks[k + 1][1])
            hi = d - ranks[k][0] - ranks[k + 1][0]
            if hi > 0:
                data.add(k, row, lo, hi)
    return data


def _converge(data: SpectralData, dim: int, q: int, chi: int | None) -> tuple[list[_Interval], set[int]]:
    """Bound h^t from E_2 using total-degree bookkeeping of higher differentials.

    With x_t the total rank of all d_r (r >= 2) from total degree t to t+1,
    h^t = D_t - x_t - x_{t-1}.  Totals outside [0, dim] must vanish, which
    pins the x's at both ends.
    """
    e2 = {pos: iv for pos, iv in data.e2.items() if iv.hi > 0}
    D: dict[int, _Interval] = {}
    for (k, i), iv in e2.items():
        t = i - k
        D[t] = D.get(t, _Interval(0, 0)) + iv
    # upper bound on x_t from pairs of positions joined by some d_r, r >= 2
    U: dict[int, int] = {}
    for (k, i), iv in e2.items():
        for r in range(2, q + 1):
            tgt = (k - r, i - r + 1)
            if tgt in e2:
                t = i - k
                U[t] = U.get(t, 0) + min(iv.hi, e2[tgt].hi)
    if not D:
        return [_Interval(0, 0) for _ in range(dim + 1)], set()
    tmin, tmax = min(D), max(D)
    xs: dict[int, _Interval] = {}

    def xcap(t):
        return min(U.get(t, 0), D.get(t, _Interval(0, 0)).hi, D.get(t + 1, _Interval(0, 0)).hi)

    for t in range(tmin - 1, tmax + 1):
        xs[t] = _Interval(0, xcap(t))
    xs[tmin - 1] = _Interval(0, 0)
    xs[tmax] = _Interval(0, 0)
    # phantoms below 0: x_t = D_t - x_{t-1}
    for t in range(tmin, min(0, tmax + 1)):
        d = D.get(t, _Interval(0, 0))
        prev = xs[t - 1]
        xs[t] = _Interval(max(xs[t].lo, d.lo - prev.hi), min(xs[t].hi, d.hi - prev.lo))
    # phantoms above dim: x_{t-1} = D_t - x_t
    for t in range(tmax, max(dim, tmin - 1), -1):
        d = D.get(t, _Interval(0, 0))
        nxt = xs[t]
        xs[t - 1] = _Interval(max(xs[t - 1].lo, d.lo - nxt.hi), min(xs[t - 1].hi, d.hi - nxt.lo))
    h = []
    flags = set()
    for t in range(dim + 1):
        d = D.get(t, _Interval(0, 0))
        a = xs.get(t, _Interval(0, 0))
        b = xs.get(t - 1, _Interval(0, 0))
        lo = max(0, d.lo - a.hi - b.hi)
        hi = max(lo, d.hi - a.lo - b.lo)
        h.append(_Interval(lo, hi))
        if lo != hi:
            flags.add(t)
    bad = any(iv.lo > iv.hi for iv in xs.values())
    if bad:
        # inconsistent bookkeeping means unlucky ranks; refuse to answer
        return [_Interval(0, max(iv.hi, D.get(t, _Interval(0, 0)).hi)) for t, iv in enumerate(h)], set(range(dim + 1))
    if chi is not None and len(flags) == 1:
        (t,) = flags
        rest = sum((-1) ** s * h[s].lo for s in range(dim + 1) if s != t)
        v = (-1) ** t * (chi - rest)
        if h[t].lo <= v <= h[t].hi:
            h[t] = _Interval(v, v)
            flags = set()
    return h, flags


def koszul_single(config: ConfigurationMatrix, m: Sequence[int], prime: int = DEFAULT_PRIME,
                  seed: int = 0, max_entries: int = DEFAULT_MAX_ENTRIES,
                  shortcuts: bool = True) -> tuple[CohomologyResult, bool]:
    data = _e2_single(config, m, prime, seed, max_entries, shortcuts)
    h, flags = _converge(data, config.dim, config.num_equations, chi_ci(config, m))
    values = tuple(Exact(iv.lo) if iv.lo == iv.hi and t not in flags else Range(iv.lo, iv.hi)
                   for t, iv in enumerate(h))
    return CohomologyResult(values, frozenset(flags), prime, (seed,)), data.used_random


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def koszul_cohomology(
    config: ConfigurationMatrix,
    m: Sequence[int],
    prime: int = DEFAULT_PRIME,
    seed: int = 0,
    num_seeds: int = 2,
    max_entries: int = DEFAULT_MAX_ENTRIES,
    shortcuts: bool = True,
) -> CohomologyResult:
    if not _is_prime(prime):
        raise ValueError(f"{prime} is not prime")
    if num_seeds < 1:
        raise ValueError("num_seeds must be positive")
    if config.num_equations < 1:
        raise ValueError("koszul_cohomology needs at least one equation; use kunneth for the ambient space")
    m = tuple(int(x) for x in m)
    results = []
    for s in range(num_seeds):
        res, used = koszul_single(config, m, prime, seed + s, max_entries, shortcuts)
        results.append(res)
        if not used:
            # no random choices were involved, every seed gives the same answer
            break
    flags = frozenset().union(*(r.indeterminate for r in results))
    values = []
    for i in range(config.dim + 1):
        vals = [r.values[i] for r in results]
        if all(isinstance(v, Exact) for v in vals) and i not in flags:
            values.append(Exact(min(v.value for v in vals)))
        else:
            values.append(Range(min(v.lo for v in vals), min(v.hi for v in vals)))
            flags = flags | {i}
    return CohomologyResult(tuple(values), flags, prime, tuple(seed + s for s in range(num_seeds)))


# ---------------------------------------------------------------- Hirzebruch surfaces

def hirzebruch_chi(n: int, m1: int, m2: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    twice = -n * m1 * m1 + 2 * m1 * m2 + (2 - n) * m1 + 2 * m2
    assert twice % 2 == 0
    return twice // 2 + 1


def hirzebruch_h0(n: int, m1: int, m2: int) -> int:
    """h^0(F_n, m1 C + m2 F) for n >= 1 (C^2 = -n)."""
    if n == 0:
        raise ValueError("n = 0 is P1 x P1; use kunneth((1, 1), ...)")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if m1 < 0 or m2 < 0:
        return 0
    if m2 >= n * m1:
        return hirzebruch_chi(n, m1, m2)
    k = -((m2 - n * m1) // n)  # ceil(m1 - m2/n)
    return hirzebruch_chi(n, m1 - k, m2)


def hirzebruch_h1(n: int, m1: int, m2: int) -> int:
    return hirzebruch_h0(n, m1, n * m1 - m2 - 2) + hirzebruch_h0(n, -m1 - 2, -n * m1 + m2 - n)


def hirzebruch_h2(n: int, m1: int, m2: int) -> int:
    return hirzebruch_h0(n, -2 - m1, -n - 2 - m2)


def hirzebruch_toric_count(n: int, i: int, m1: int, m2: int) -> int:
    """Count of the monomials / rationoms of each degree in the Cech description."""
    if n < 0:
        raise ValueError("n must be nonnegative")

    def pairs(s):  # number of (a, b) >= 0 with a + b = s
        return s + 1 if s >= 0 else 0

    total = 0
    if i == 0:
        # p2 + p4 = m1, p1 + p3 + n p2 = m2
        for p2 in range(0, m1 + 1):
            total += pairs(m2 - n * p2)
    elif i == 1:
        # type A: m1 = -(p2+p4+2), m2 = p1+p3 - n(p2+1)
        s = -m1 - 2
        for p2 in range(0, s + 1):
            total += pairs(m2 + n * (p2 + 1))
        # type B: m1 = p2+p4, m2 = -(p1+p3+2) + n p2
        for p2 in range(0, m1 + 1):
            total += pairs(-m2 - 2 + n * p2)
    elif i == 2:
        s = -m1 - 2
        for p2 in range(0, s + 1):
            total += pairs(-m2 - 2 - n * (p2 + 1))
    else:
        raise ValueError("degree must be 0, 1 or 2")
    return total


def serre_check(result_m: CohomologyResult, result_km: CohomologyResult, dim: int) -> bool:
    for i in range(dim + 1):
        a, b = result_m.h(i), result_km.h(dim - i)
        if a is None or b is None:
            raise ValueError(f"degree {i} is not exact on both sides")
        if a != b:
            return False
    return True
