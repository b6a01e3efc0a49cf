"""Iterated Laurent expansion of factored rationals on finite exponent windows.

A plan lists the variables in expansion order together with the point
(0 or infinity) for each.  A factor 1/(1 - t^m) is expanded geometrically in
t^m when t^m is small for the plan, and as -t^{-m}/(1 - t^{-m}) otherwise.

Truncation is exact.  Every effective factor monomial m' (m or -m) has
positive weight under the functional lambda built from the plan, so the
geometric index of each factor is bounded on a finite window.  The
accumulator is pruned only by functionals that are nonnegative on every
effective monomial; such a term can never move back below the bound, hence
can never reach the window.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence

from .laurent import ExpVec, LaurentPoly, binom_poly, is_zero_vec
from .rational import FactoredRational


class Point(enum.Enum):
    ZERO = "0"
    INF = "inf"

    def __str__(self) -> str:
        return self.value


class Smallness(enum.Enum):
    SMALL = "small"
    LARGE = "large"


class ExpansionLimitError(RuntimeError):
    pass


class StabilizationError(RuntimeError):
    pass


# ---------------------------------------------------------------- plans

@dataclass(frozen=True)
class ExpansionPlan:
    """Ordered (variable index, point) steps; indices are 0-based."""

    steps: tuple[tuple[int, Point], ...]

    def __post_init__(self):
        steps = tuple((int(i), Point(p)) for i, p in self.steps)
        idx = sorted(i for i, _ in steps)
        if idx != list(range(len(steps))):
            raise ValueError(f"plan must cover every variable exactly once, got {idx}")
        object.__setattr__(self, "steps", steps)

    @property
    def nvars(self) -> int:
        return len(self.steps)

    @classmethod
    def of(cls, *steps: tuple[int, str | Point]) -> ExpansionPlan:
        """ExpansionPlan.of((2, "0"), (1, "inf")) with 1-based variable numbers."""
        return cls(tuple((i - 1, Point(p) if isinstance(p, str) else p) for i, p in steps))

    def point_of(self, i: int) -> Point:
        for j, p in self.steps:
            if j == i:
                return p
        raise KeyError(i)

    def __str__(self) -> str:
        return ",".join(f"t{i + 1}={p}" for i, p in self.steps)


_PLAN_RE = re.compile(r"^\s*t(\d*)\s*=\s*(0|inf|oo|infinity|∞)\s*$")


def parse_plan(text: str, nvars: int | None = None) -> ExpansionPlan:
    steps = []
    for part in text.split(","):
        mt = _PLAN_RE.match(part)
        if not mt:
            raise ValueError(f"bad plan step {part!r}; expected e.g. 't2=0' or 't1=inf'")
        i = int(mt.group(1)) if mt.group(1) else 1
        steps.append((i - 1, Point.ZERO if mt.group(2) == "0" else Point.INF))
    plan = ExpansionPlan(tuple(steps))
    if nvars is not None and plan.nvars != nvars:
        raise ValueError(f"plan has {plan.nvars} variables, expected {nvars}")
    return plan


def all_zero_plan(r: int) -> ExpansionPlan:
    return ExpansionPlan(tuple((i, Point.ZERO) for i in range(r)))


# ---------------------------------------------------------------- windows

@dataclass(frozen=True)
class Window:
    bounds: tuple[tuple[int, int], ...]

    def __post_init__(self):
        b = tuple((int(lo), int(hi)) for lo, hi in self.bounds)
        if not b:
            raise ValueError("window needs at least one variable")
        for lo, hi in b:
            if lo > hi:
                raise ValueError(f"empty window interval [{lo}, {hi}]")
        object.__setattr__(self, "bounds", b)

    @classmethod
    def cube(cls, r: int, lo: int, hi: int) -> Window:
        return cls(tuple((lo, hi) for _ in range(r)))

    @property
    def nvars(self) -> int:
        return len(self.bounds)

    def contains(self, e: ExpVec) -> bool:
        return all(lo <= x <= hi for x, (lo, hi) in zip(e, self.bounds))

    def points(self) -> Iterator[ExpVec]:
        return product(*(range(lo, hi + 1) for lo, hi in self.bounds))

    def size(self) -> int:
        n = 1
        for lo, hi in self.bounds:
            n *= hi - lo + 1
        return n

    def shrink(self, lo_pad: Sequence[int], hi_pad: Sequence[int]) -> Window | None:
        b = []
        for (lo, hi), a, c in zip(self.bounds, lo_pad, hi_pad):
            if lo + a > hi - c:
                return None
            b.append((lo + a, hi - c))
        return Window(tuple(b))

    def __str__(self) -> str:
        return ",".join(f"t{i + 1}={lo}..{hi}" for i, (lo, hi) in enumerate(self.bounds))


_WIN_RE = re.compile(r"^\s*t(\d*)\s*=\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")


def parse_window(text: str) -> Window:
    parts = {}
    for part in text.split(","):
        mt = _WIN_RE.match(part)
        if not mt:
            raise ValueError(f"bad window part {part!r}; expected e.g. 't1=-6..6'")
        i = int(mt.group(1)) if mt.group(1) else 1
        parts[i] = (int(mt.group(2)), int(mt.group(3)))
    if sorted(parts) != list(range(1, len(parts) + 1)):
        raise ValueError("window must list t1..tr exactly once each")
    return Window(tuple(parts[i] for i in range(1, len(parts) + 1)))


@dataclass(frozen=True)
class SeriesWindow:
    window: Window
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in self.coeffs.items():
            e = tuple(e)
            if not self.window.contains(e):
                raise ValueError(f"exponent {e} outside window")
            if c:
                clean[e] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def __getitem__(self, e: ExpVec) -> int:
        return self.coeffs.get(tuple(e), 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SeriesWindow):
            return NotImplemented
        return self.window == other.window and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.window, tuple(self.coeffs.items())))

    def restrict(self, window: Window) -> SeriesWindow:
        return SeriesWindow(window, {e: c for e, c in self.coeffs.items() if window.contains(e)})

    def scale(self, c: int) -> SeriesWindow:
        return SeriesWindow(self.window, {e: c * v for e, v in self.coeffs.items()})

    def to_poly(self) -> LaurentPoly:
        return LaurentPoly(self.window.nvars, self.coeffs)

    def slice(self, axis: int, value: int) -> dict[int, int] | dict[ExpVec, int]:
        """Terms with exponent ``value`` in ``axis``, keyed by the remaining exponents."""
        out = {}
        for e, c in self.coeffs.items():
            if e[axis] == value:
                rest = e[:axis] + e[axis + 1:]
                out[rest[0] if len(rest) == 1 else rest] = c
        return out

    @classmethod
    def zero(cls, window: Window) -> SeriesWindow:
        return cls(window, {})

    @classmethod
    def from_poly(cls, p: LaurentPoly, window: Window) -> SeriesWindow:
        return cls(window, {e: c for e, c in p.items() if window.contains(e)})


def window_add(a: SeriesWindow, b: SeriesWindow, sign: int = 1) -> SeriesWindow:
    if a.window != b.window:
        raise ValueError(f"window mismatch: {a.window} vs {b.window}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    out = dict(a.coeffs)
    for e, c in b.coeffs.items():
        out[e] = out.get(e, 0) + sign * c
    return SeriesWindow(a.window, out)


# ---------------------------------------------------------------- filters

_REL = {
    ">=": lambda v, b: v >= b,
    ">": lambda v, b: v > b,
    "<=": lambda v, b: v <= b,
    "<": lambda v, b: v < b,
    "=": lambda v, b: v == b,
}


@dataclass(frozen=True)
class ExponentFilter:
    """Conjunction of linear constraints w.e REL bound on exponents."""

    constraints: tuple[tuple[ExpVec, str, int], ...]

    def __post_init__(self):
        cs = tuple((tuple(int(x) for x in w), rel, int(b)) for w, rel, b in self.constraints)
        for _, rel, _ in cs:
            if rel not in _REL:
                raise ValueError(f"unknown relation {rel!r}")
        object.__setattr__(self, "constraints", cs)

    def keep(self, e: ExpVec) -> bool:
        for w, rel, b in self.constraints:
            v = sum(x * y for x, y in zip(w, e))
            if not _REL[rel](v, b):
                return False
        return True

    def apply(self, sw: SeriesWindow) -> SeriesWindow:
        return SeriesWindow(sw.window, {e: c for e, c in sw.coeffs.items() if self.keep(e)})

    def __str__(self) -> str:
        parts = []
        for w, rel, b in self.constraints:
            lin = "+".join(f"{x}*t{i + 1}" for i, x in enumerate(w) if x)
            parts.append(f"{lin.replace('+-', '-')}{rel}{b}")
        return ",".join(parts)


_TERM_RE = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*t(\d+)")
_CON_RE = re.compile(r"^(.*?)(>=|<=|>|<|=)\s*(-?\d+)\s*$")


def parse_filter(text: str, nvars: int) -> ExponentFilter:
    cons = []
    for part in text.split(","):
        mt = _CON_RE.match(part.strip())
        if not mt:
            raise ValueError(f"bad filter constraint {part!r}; expected e.g. '1*t1+1*t2>=0'")
        lhs, rel, bound = mt.groups()
        w = [0] * nvars
        body = lhs.replace(" ", "")
        pos = 0
        for tm in _TERM_RE.finditer(body):
            if tm.start() != pos:
                raise ValueError(f"bad linear form {lhs!r}")
            pos = tm.end()
            sign = -1 if tm.group(1) == "-" else 1
            coef = int(tm.group(2)) if tm.group(2) else 1
            i = int(tm.group(3)) - 1
            if not 0 <= i < nvars:
                raise ValueError(f"variable t{i + 1} out of range")
            w[i] += sign * coef
        if pos != len(body) or not body:
            raise ValueError(f"bad linear form {lhs!r}")
        cons.append((tuple(w), rel, int(bound)))
    return ExponentFilter(tuple(cons))


# ---------------------------------------------------------------- expansion

def classify_smallness(m: ExpVec, plan: ExpansionPlan) -> Smallness:
    if is_zero_vec(m):
        raise ValueError("the zero monomial has no expansion (pole)")
    for i, p in plan.steps:
        e = m[i]
        if e == 0:
            continue
        if (p is Point.ZERO and e > 0) or (p is Point.INF and e < 0):
            return Smallness.SMALL
        return Smallness.LARGE
    raise AssertionError("unreachable")


def truncation_weight(factors: Iterable[tuple[ExpVec, int]], plan: ExpansionPlan) -> ExpVec:
    """lambda with lambda(v_i) = s_i * B^(r - i) in plan order."""
    factors = list(factors)
    r = plan.nvars
    B = 1 + max((sum(abs(x) for x in m) for m, _ in factors), default=0)
    lam = [0] * r
    for pos, (i, p) in enumerate(plan.steps):
        s = 1 if p is Point.ZERO else -1
        lam[i] = s * B ** (r - 1 - pos)
    return tuple(lam)


@dataclass(frozen=True)
class ExpansionLimits:
    max_terms: int = 4_000_000


DEFAULT_LIMITS = ExpansionLimits()


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _effective(f: FactoredRational, plan: ExpansionPlan) -> tuple[LaurentPoly, dict[ExpVec, int]]:
    """Rewrite so that every factor is 1/(1 - t^m') with t^m' small."""
    base = f.numerator
    eff: dict[ExpVec, int] = {}
    for m, k in f.factors:
        if classify_smallness(m, plan) is Smallness.SMALL:
            eff[m] = eff.get(m, 0) + k
        else:
            neg = tuple(-x for x in m)
            # 1/(1-t^m)^k = (-1)^k t^{-mk} / (1-t^{-m})^k
            base = base.shift(tuple(-k * x for x in m)) * ((-1) ** k)
            eff[neg] = eff.get(neg, 0) + k
    return base, eff


def _functionals(eff: Sequence[ExpVec], lam: ExpVec) -> list[ExpVec]:
    r = len(lam)
    cands: list[ExpVec] = [lam]
    for i in range(r):
        unit = tuple(1 if j == i else 0 for j in range(r))
        cands.append(unit)
        cands.append(tuple(-x for x in unit))
    if r == 2:
        for u in eff:
            # cross(u, x) = u0 x1 - u1 x0, a normal to the ray through u
            phi = (-u[1], u[0])
            cands.append(phi)
            cands.append((u[1], -u[0]))
    out = []
    seen = set()
    for phi in cands:
        if phi in seen or is_zero_vec(phi):
            continue
        if all(_dot(phi, m) >= 0 for m in eff):
            seen.add(phi)
            out.append(phi)
    return out


def _box_max(phi: ExpVec, window: Window) -> int:
    return sum(max(w * lo, w * hi) for w, (lo, hi) in zip(phi, window.bounds))


def expand_ordered(
    f: FactoredRational,
    plan: ExpansionPlan,
    window: Window,
    filt: ExponentFilter | None = None,
    limits: ExpansionLimits = DEFAULT_LIMITS,
) -> SeriesWindow:
    """Exact coefficients of the iterated Laurent expansion of f inside ``window``."""
    r = f.nvars
    if plan.nvars != r or window.nvars != r:
        raise ValueError(f"plan/window/rational variable counts differ: {plan.nvars}, {window.nvars}, {r}")
    base, eff = _effective(f, plan)
    lam = truncation_weight(f.factors, plan)
    for m in eff:
        # the soundness certificate: every effective monomial is lambda-positive
        assert _dot(lam, m) >= 1, (m, lam)
    phis = _functionals(list(eff), lam)
    bounds = [_box_max(phi, window) for phi in phis]

    def slack(e: ExpVec) -> list[int] | None:
        out = []
        for phi, b in zip(phis, bounds):
            s = b - _dot(phi, e)
            if s < 0:
                return None
            out.append(s)
        return out

    acc: dict[ExpVec, int] = {}
    for e, c in base.items():
        if slack(e) is not None:
            acc[e] = c
    # large steps first keeps the intermediate accumulator small
    order = sorted(eff.items(), key=lambda mk: -_dot(lam, mk[0]))
    for m, k in order:
        steps = [_dot(phi, m) for phi in phis]
        active = [(idx, st) for idx, st in enumerate(steps) if st > 0]
        new: dict[ExpVec, int] = {}
        coeff_cache: list[int] = []
        for e, c in acc.items():
            sl = slack(e)
            if sl is None:
                continue
            jmax = min(sl[idx] // st for idx, st in active)
            while len(coeff_cache) <= jmax:
                coeff_cache.append(binom_poly(len(coeff_cache), k - 1))
            cur = e
            for j in range(jmax + 1):
                v = new.get(cur, 0) + c * coeff_cache[j]
                if v:
                    new[cur] = v
                else:
                    new.pop(cur, None)
                cur = tuple(a + b for a, b in zip(cur, m))
            if len(new) > limits.max_terms:
                raise ExpansionLimitError(
                    f"expansion accumulator exceeded {limits.max_terms} terms; shrink the window"
                )
        acc = new
    out = {e: c for e, c in acc.items() if window.contains(e)}
    if filt is not None:
        out = {e: c for e, c in out.items() if filt.keep(e)}
    return SeriesWindow(window, out)


def expand_terms(
    terms: Iterable[tuple[int, FactoredRational, ExpansionPlan, ExponentFilter | None]],
    window: Window,
    limits: ExpansionLimits = DEFAULT_LIMITS,
) -> SeriesWindow:
    total = SeriesWindow.zero(window)
    for coef, f, plan, filt in terms:
        if coef == 0:
            continue
        w = expand_ordered(f, plan, window, filt, limits)
        total = window_add(total, w.scale(coef))
    return total


@dataclass(frozen=True)
class FamilyExpansion:
    window: SeriesWindow
    n_stable: int
    n_final: int


FamilyTerm = tuple[int, FactoredRational, ExpansionPlan, "ExponentFilter | None"]


def expand_family(
    gen: Callable[[int], Sequence[FamilyTerm]],
    window: Window,
    stabilization: int = 2,
    n_cap: int = 12,
    limits: ExpansionLimits = DEFAULT_LIMITS,
) -> FamilyExpansion:
    """Partial sums over |n| <= N until unchanged for ``stabilization`` steps.

    ``gen(n)`` returns the signed terms contributed by index n (possibly none).
    """
    if stabilization < 1:
        raise ValueError("stabilization must be positive")
    total = expand_terms(gen(0), window, limits)
    n_stable = 0
    unchanged = 0
    n = 0
    while unchanged < stabilization:
        n += 1
        if n > n_cap:
            raise StabilizationError(
                f"family did not stabilize within |n| <= {n_cap} on {window}"
            )
        step = expand_terms(list(gen(n)) + list(gen(-n)), window, limits)
        if step.coeffs:
            total = window_add(total, step)
            unchanged = 0
            n_stable = n
        else:
            unchanged += 1
    return FamilyExpansion(total, n_stable, n)
