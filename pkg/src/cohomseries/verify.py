"""Compare catalog generating functions with the oracle on lattice windows."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .catalog import (
    CohomologySeriesSpec,
    ConfigurationMatrix,
    DegreeSeries,
    catalog_entry,
    cicy7643_pieces,
    cicy7885_rational,
    euler_corner_terms,
    h24_generic_decomposition,
    h24_tuned_decomposition,
    hs_ci,
    hs_weighted_projective,
    mori_chambers_quadric4x,
    p1pn_rational,
    tuned_rational,
)
from .laurent import ExpVec
from .oracle import (
    DEFAULT_MAX_ENTRIES,
    DEFAULT_PRIME,
    CohomologyResult,
    Exact,
    chi_ci,
    exact_result,
    hirzebruch_h0,
    hirzebruch_h1,
    hirzebruch_h2,
    hirzebruch_toric_count,
    koszul_cohomology,
)
from .rational import FactoredRational, parse_rational
from .series import (
    DEFAULT_LIMITS,
    ExpansionLimits,
    ExpansionPlan,
    SeriesWindow,
    StabilizationError,
    Window,
    expand_family,
    expand_ordered,
    expand_terms,
    window_add,
)

VERIFIED = "Verified"
MISMATCH = "Mismatch"
PARTIAL = "PartiallyIndeterminate"


@dataclass(frozen=True)
class OracleOptions:
    prime: int = DEFAULT_PRIME
    seed: int = 0
    num_seeds: int = 2
    max_entries: int = DEFAULT_MAX_ENTRIES
    stabilization: int = 2
    n_cap: int = 12
    chamber_depth: int = 2
    limits: ExpansionLimits = DEFAULT_LIMITS


@dataclass
class VerificationReport:
    entry: str
    window: str
    statuses: dict[int, str] = field(default_factory=dict)
    mismatches: list[dict] = field(default_factory=list)
    indeterminate: list[dict] = field(default_factory=list)
    oracle: dict = field(default_factory=dict)
    stabilization: dict = field(default_factory=dict)
    wall_identities: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    findings: list[dict] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    points: int = 0

    @property
    def status(self) -> str:
        vals = set(self.statuses.values())
        if MISMATCH in vals or self.errors:
            return MISMATCH
        if PARTIAL in vals:
            return PARTIAL
        return VERIFIED

    def indeterminate_fraction(self) -> float:
        return len(self.indeterminate) / self.points if self.points else 0.0

    def to_dict(self) -> dict:
        return {
            "entry": self.entry,
            "window": self.window,
            "status": self.status,
            "statuses": {str(k): v for k, v in sorted(self.statuses.items())},
            "mismatches": self.mismatches,
            "indeterminate": self.indeterminate,
            "points": self.points,
            "oracle": self.oracle,
            "stabilization": {str(k): v for k, v in sorted(self.stabilization.items())},
            "wall_identities": self.wall_identities,
            "checks": self.checks,
            "findings": self.findings,
            "errors": self.errors,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def exit_code(status: str) -> int:
    return {VERIFIED: 0, MISMATCH: 2, PARTIAL: 3}[status]


# ---------------------------------------------------------------- series side

def _family_gen(series: DegreeSeries):
    def gen(n: int):
        out = []
        for fam in series.families:
            out.extend(fam.terms_at(n))
        return out

    return gen


def evaluate_degree(
    series: DegreeSeries,
    window: Window,
    opts: OracleOptions = OracleOptions(),
) -> tuple[SeriesWindow, int | None]:
    """The window of CS^i encoded by ``series`` and the stabilization N (if a family)."""
    total = SeriesWindow.from_poly(series.constant, window)
    finite = [(t.coefficient, t.rational, t.plan, t.filter) for t in series.terms]
    total = window_add(total, expand_terms(finite, window, opts.limits))
    n_final = None
    if series.families:
        fam = expand_family(_family_gen(series), window, opts.stabilization, opts.n_cap, opts.limits)
        total = window_add(total, fam.window)
        n_final = fam.n_final
    coeffs = total.coeffs
    if series.part == "positive":
        coeffs = {e: c for e, c in coeffs.items() if c > 0}
    elif series.part == "negative":
        coeffs = {e: c for e, c in coeffs.items() if c < 0}
    return SeriesWindow(window, {e: series.sign * c for e, c in coeffs.items()}), n_final


def evaluate_spec(spec: CohomologySeriesSpec, window: Window, opts: OracleOptions = OracleOptions(),
                  degrees: Iterable[int] | None = None):
    wins: dict[int, SeriesWindow] = {}
    ns: dict[int, int | None] = {}
    errors: dict[int, str] = {}
    for i in sorted(spec.degrees if degrees is None else degrees):
        try:
            wins[i], ns[i] = evaluate_degree(spec.degrees[i], window, opts)
        except StabilizationError as exc:
            errors[i] = str(exc)
    return wins, ns, errors


# ---------------------------------------------------------------- oracle side

class OracleCache:
    def __init__(self, spec: CohomologySeriesSpec, opts: OracleOptions):
        self.spec = spec
        self.opts = opts
        self.cache: dict[ExpVec, CohomologyResult] = {}

    def __call__(self, m: ExpVec) -> CohomologyResult:
        m = tuple(m)
        if m not in self.cache:
            self.cache[m] = self._compute(m)
        return self.cache[m]

    def _compute(self, m: ExpVec) -> CohomologyResult:
        spec = self.spec
        if spec.hirzebruch_n is not None:
            n = spec.hirzebruch_n
            return exact_result([hirzebruch_toric_count(n, i, *m) for i in range(3)])
        o = self.opts
        return koszul_cohomology(spec.config, m, o.prime, o.seed, o.num_seeds, o.max_entries)


def _chi(spec: CohomologySeriesSpec, m: ExpVec) -> int:
    if spec.hirzebruch_n is not None:
        from .oracle import hirzebruch_chi

        return hirzebruch_chi(spec.hirzebruch_n, *m)
    return chi_ci(spec.config, m)


def _compare(wins: dict[int, SeriesWindow], window: Window, oracle: OracleCache, dim: int):
    mismatches, indeterminate = [], []
    per_degree_ind: dict[int, int] = {i: 0 for i in wins}
    for m in window.points():
        res = oracle(m)
        if not res.all_exact():
            indeterminate.append({"m": list(m), "degrees": sorted(res.indeterminate),
                                  "oracle": [v.to_json() for v in res.values]})
        for i, w in wins.items():
            v = res.values[i]
            s = w[m]
            if isinstance(v, Exact) and i not in res.indeterminate:
                if s != v.value:
                    mismatches.append({"m": list(m), "degree": i, "series": s, "oracle": v.value})
            else:
                per_degree_ind[i] += 1
                if not v.lo <= s <= v.hi:
                    mismatches.append({"m": list(m), "degree": i, "series": s, "oracle": v.to_json()})
    return mismatches, indeterminate, per_degree_ind


def _serre_series(wins: dict[int, SeriesWindow], window: Window, K: ExpVec, dim: int) -> dict:
    checked, failures = 0, []
    for m in window.points():
        km = tuple(k - x for k, x in zip(K, m))
        if not window.contains(km):
            continue
        for i in wins:
            j = dim - i
            if j not in wins:
                continue
            checked += 1
            if wins[i][m] != wins[j][km]:
                failures.append({"m": list(m), "degree": i, "value": wins[i][m], "dual": wins[j][km]})
    return {"checked": checked, "failures": failures}


def _serre_oracle(oracle: OracleCache, window: Window, K: ExpVec, dim: int) -> dict:
    checked, failures = 0, []
    for m in window.points():
        km = tuple(k - x for k, x in zip(K, m))
        if not window.contains(km):
            continue
        a, b = oracle(m), oracle(km)
        for i in range(dim + 1):
            x, y = a.h(i), b.h(dim - i)
            if x is None or y is None:
                continue
            checked += 1
            if x != y:
                failures.append({"m": list(m), "degree": i, "value": x, "dual": y})
    return {"checked": checked, "failures": failures}


def _euler_oracle(oracle: OracleCache, window: Window, spec: CohomologySeriesSpec) -> dict:
    checked, failures = 0, []
    for m in window.points():
        res = oracle(m)
        if not res.all_exact():
            continue
        checked += 1
        alt = sum((-1) ** i * v for i, v in enumerate(res.exact_values()))
        chi = _chi(spec, m)
        if alt != chi:
            failures.append({"m": list(m), "alternating_sum": alt, "chi": chi})
    return {"checked": checked, "failures": failures}


def _euler_series(wins: dict[int, SeriesWindow], window: Window, spec: CohomologySeriesSpec) -> dict | None:
    if sorted(wins) != list(range(spec.dim + 1)):
        return None
    failures = []
    for m in window.points():
        alt = sum((-1) ** i * wins[i][m] for i in wins)
        chi = _chi(spec, m)
        if alt != chi:
            failures.append({"m": list(m), "alternating_sum": alt, "chi": chi})
    return {"checked": window.size(), "failures": failures}


# ---------------------------------------------------------------- identities

def verify_wall_identity(
    lhs: Sequence[tuple[int, FactoredRational, ExpansionPlan]],
    rhs: FactoredRational,
    window: Window,
    axis: int = 0,
) -> bool:
    """Single-variable identity after restricting each side to exponent 0 in ``axis``."""
    return wall_identity_detail(lhs, rhs, window, axis)["holds"]


def wall_identity_detail(lhs, rhs, window: Window, axis: int = 0) -> dict:
    (lo, hi), = window.bounds
    total: dict[int, int] = {}
    for sign, f, plan in lhs:
        if f.nvars == 1:
            w = expand_ordered(f, plan, window)
            sl = {e[0]: c for e, c in w.coeffs.items()}
        else:
            bounds = [(lo, hi)] * f.nvars
            bounds[axis] = (0, 0)
            w = expand_ordered(f, plan, Window(tuple(bounds)))
            sl = w.slice(axis, 0)
        for e, c in sl.items():
            total[e] = total.get(e, 0) + sign * c
    want = expand_ordered(rhs, ExpansionPlan(((0, "0"),)), window)
    want_d = {e[0]: c for e, c in want.coeffs.items()}
    got = {e: c for e, c in total.items() if c}
    diffs = [[e, got.get(e, 0), want_d.get(e, 0)] for e in range(lo, hi + 1) if got.get(e, 0) != want_d.get(e, 0)]
    return {"holds": not diffs, "differences": diffs, "window": str(window)}


def wall_identities() -> dict[str, tuple[list, FactoredRational]]:
    P = lambda s: parse_rational(s, 2)
    p00 = ExpansionPlan(((1, "0"), (0, "0")))
    p0i = ExpansionPlan(((1, "0"), (0, "inf")))
    h24 = hs_ci(ConfigurationMatrix((1, 3), ((2,), (4,))))
    from .rational import substitute

    h24_flop = substitute(h24, [(-1, 4), (0, 1)])
    ids = {
        "h24": (
            [(1, h24, p00), (1, h24_flop, p0i), (-1, P("(1-t2^4)/((1-t2)^4)"), p00)],
            hs_weighted_projective([4, 1, 1, 1, 1], [8]),
        ),
        "cicy7885": (
            [
                (1, P("(1-t1*t2)*(1-t1*t2^4)/((1-t1)^2*(1-t2)^5)"), p00),
                (1, P("(1-t1^-1*t2^5)^2/((1-t1^-1*t2)^2*(1-t2)^5*(1-t1^-1*t2^4))"), p0i),
                (-1, P("(1+t2^5)/((1-t2)^5)"), p00),
            ],
            parse_rational("(1-t^5)/((1-t)^5)", 1),
        ),
    }
    hs43, flop43, corr43 = [f for _, f in cicy7643_pieces()]
    ids["cicy7643"] = (
        [(1, hs43, p00), (1, flop43, p0i), (-1, corr43, p00)],
        hs_weighted_projective([2, 1, 1, 1, 1, 1, 1], [4, 2, 2]),
    )
    return ids


def verify_euler(config: ConfigurationMatrix, window: Window, limits: ExpansionLimits = DEFAULT_LIMITS) -> VerificationReport:
    f = hs_ci(config)
    total = SeriesWindow.zero(window)
    for sign, plan in euler_corner_terms(config):
        total = window_add(total, expand_ordered(f, plan, window, None, limits), sign)
    rep = VerificationReport(config.name or str(config.to_json()), str(window))
    for m in window.points():
        chi = chi_ci(config, m)
        if total[m] != chi:
            rep.mismatches.append({"m": list(m), "degree": "chi", "series": total[m], "oracle": chi})
    rep.points = window.size()
    rep.statuses[0] = MISMATCH if rep.mismatches else VERIFIED
    return rep


def decomposition_checks(vid: str, window: Window, limits: ExpansionLimits = DEFAULT_LIMITS) -> dict:
    """Series identities between alternative forms of the same CS^0."""
    plan = ExpansionPlan(((1, "0"), (0, "0")))
    out = {}
    pairs = []
    if vid == "h24-generic":
        pairs.append(("chambers_minus_wall", h24_generic_decomposition(), p1pn_rational(2, 4, 3)))
    if vid == "h24-tuned":
        pairs.append(("chambers_minus_wall", h24_tuned_decomposition(), tuned_rational()))
    if vid == "cicy7885":
        P = lambda s: parse_rational(s, 2)
        pieces = [
            (1, P("(1-t1*t2)*(1-t1*t2^4)/((1-t1)^2*(1-t2)^5)")),
            (1, P("(1-t1^-1*t2^5)^2/((1-t1^-1*t2)^2*(1-t2)^5*(1-t1^-1*t2^4))")),
            (-1, P("(1+t2^5)/((1-t2)^5)")),
        ]
        pairs.append(("chambers_minus_wall", pieces, cicy7885_rational()))
    for name, pieces, whole in pairs:
        lhs = expand_terms([(c, f, plan, None) for c, f in pieces], window, limits)
        rhs = expand_ordered(whole, plan, window, None, limits)
        diff = window_add(lhs, rhs, -1)
        out[name] = {"holds": not diff.coeffs, "differences": [[list(e), c] for e, c in diff.coeffs.items()]}
    return out


# ---------------------------------------------------------------- entries

def _status(mism: list, ind_count: int, degree: int) -> str:
    if any(x["degree"] == degree for x in mism):
        return MISMATCH
    if ind_count:
        return PARTIAL
    return VERIFIED


def verify_entry(vid: str, window: Window, opts: OracleOptions = OracleOptions(), *,
                 spec: CohomologySeriesSpec | None = None, oracle: OracleCache | None = None) -> VerificationReport:
    """``spec`` overrides the catalog lookup (diagnostic variants); ``oracle`` lets runs share results."""
    spec = spec or catalog_entry(vid)
    if window.nvars != spec.picard_rank:
        raise ValueError(f"{vid} needs a {spec.picard_rank}-variable window")
    if vid == "quadric4x":
        return _verify_quadric4x(spec, window, opts)
    rep = VerificationReport(spec.variety_id, str(window))
    rep.points = window.size()
    oracle = oracle or OracleCache(spec, opts)
    if spec.hirzebruch_n is None:
        rep.oracle = {"kind": "koszul", "prime": opts.prime,
                      "seeds": list(range(opts.seed, opts.seed + opts.num_seeds))}
    else:
        rep.oracle = {"kind": "toric_count"}

    wins, ns, errors = evaluate_spec(spec, window, opts)
    for i, msg in errors.items():
        rep.errors.append(f"degree {i}: {msg}")
        rep.statuses[i] = MISMATCH
    for i, n in ns.items():
        if n is not None:
            rep.stabilization[i] = n

    mism, ind, per_deg = _compare(wins, window, oracle, spec.dim)
    rep.mismatches = mism
    rep.indeterminate = ind
    for i in wins:
        rep.statuses[i] = _status(mism, per_deg[i], i)

    K = spec.canonical
    rep.checks["serre_series"] = _serre_series(wins, window, K, spec.dim)
    rep.checks["serre_oracle"] = _serre_oracle(oracle, window, K, spec.dim)
    rep.checks["euler_oracle"] = _euler_oracle(oracle, window, spec)
    es = _euler_series(wins, window, spec)
    if es is not None:
        rep.checks["euler_series"] = es
    if spec.hirzebruch_n is not None:
        rep.checks["closed_forms"] = _hirzebruch_closed_forms(spec.hirzebruch_n, window)
    dec = decomposition_checks(spec.variety_id, window, opts.limits)
    if dec:
        rep.checks["decompositions"] = dec
    for key in ("h24-generic:h24", "cicy7885:cicy7885", "cicy7643:cicy7643"):
        entry, name = key.split(":")
        if spec.variety_id == entry:
            lhs, rhs = wall_identities()[name]
            rep.wall_identities[name] = wall_identity_detail(lhs, rhs, Window(((0, 20),)))
    rep.findings.extend(_findings(spec.variety_id, spec, window, oracle, opts))
    return rep


def _hirzebruch_closed_forms(n: int, window: Window) -> dict:
    failures = []
    for m in window.points():
        tc = [hirzebruch_toric_count(n, i, *m) for i in range(3)]
        cf = [hirzebruch_h0(n, *m), hirzebruch_h1(n, *m), hirzebruch_h2(n, *m)]
        if tc != cf:
            failures.append({"m": list(m), "toric": tc, "closed": cf})
    return {"checked": window.size(), "failures": failures}


def _count_mismatches(series: dict[int, DegreeSeries], window: Window, oracle: OracleCache, opts: OracleOptions) -> dict:
    out = {}
    for i, ds in sorted(series.items()):
        try:
            w, _ = evaluate_degree(ds, window, opts)
        except StabilizationError as exc:
            out[str(i)] = {"error": str(exc)}
            continue
        bad = 0
        checked = 0
        for m in window.points():
            h = oracle(m).h(i)
            if h is None:
                continue
            checked += 1
            bad += w[m] != h
        out[str(i)] = {"checked": checked, "mismatches": bad}
    return out


def _findings(vid: str, spec: CohomologySeriesSpec, window: Window, oracle: OracleCache, opts: OracleOptions) -> list[dict]:
    out = []
    if vid == "cicy7885":
        listed = {i: spec.degrees[i] for i in (1, 2)}
        listed[3] = spec.degrees[3]
        out.append({
            "question": "corner assignment of CS^1 / CS^2",
            "catalog": _count_mismatches(listed, window, oracle, opts),
            "swapped": _count_mismatches(spec.extras["alternative_degrees"], window, oracle, opts),
            "swapped_signed": _count_mismatches(spec.extras["signed_alternative_degrees"], window, oracle, opts),
        })
    if vid == "cicy7644":
        out.append({
            "question": "n = 0 listed in both sums of CS^1 and CS^3",
            "catalog": _count_mismatches({i: spec.degrees[i] for i in (1, 3)}, window, oracle, opts),
            "disjoint": _count_mismatches(spec.extras["disjoint_split"], window, oracle, opts),
        })
        out.append(_overlap_order_check(spec, window, opts))
    return out


def _overlap_order_check(spec: CohomologySeriesSpec, window: Window, opts: OracleOptions) -> dict:
    """Expand the n = 0 terms of CS^1 / CS^3 in both variable orders and diff them."""
    res = {"question": "n = 0 term under the two plan orders"}
    for i in (1, 3):
        fams = spec.degrees[i].families
        a, b = fams[0], fams[1]
        ta = expand_terms(a.terms_at(0), window, opts.limits)
        tb = expand_terms([(c, f, b.plan, b.filter) for c, f, _, _ in a.terms_at(0)], window, opts.limits)
        diff = window_add(ta, tb, -1)
        res[str(i)] = {"differing_points": len(diff.coeffs)}
    return res


def _verify_quadric4x(spec: CohomologySeriesSpec, window: Window, opts: OracleOptions) -> VerificationReport:
    """h^0 in chamber interiors W(Nef): h^0(L) = HS coefficient at W^{-1} L."""
    rep = VerificationReport(spec.variety_id, str(window))
    rep.oracle = {"kind": "koszul", "prime": opts.prime,
                  "seeds": list(range(opts.seed, opts.seed + opts.num_seeds)), "chamber_depth": opts.chamber_depth}
    oracle = OracleCache(spec, opts)
    hs = hs_ci(spec.config)
    chambers = mori_chambers_quadric4x(opts.chamber_depth)
    coeff_cache: dict[ExpVec, int] = {}

    def hs_coeff(c: ExpVec) -> int:
        if c not in coeff_cache:
            from .series import all_zero_plan

            w = Window(tuple((x, x) for x in c))
            coeff_cache[c] = expand_ordered(hs, all_zero_plan(4), w)[c]
        return coeff_cache[c]

    checked = 0
    seen = set()
    for W in chambers:
        inv = _inverse(W)
        for m in window.points():
            c = [sum(inv[i][j] * m[j] for j in range(4)) for i in range(4)]
            # interior only: walls carry correction terms that are not part of this check
            if any(x < 1 or x.denominator != 1 for x in c):
                continue
            c = tuple(int(x) for x in c)
            checked += 1
            seen.add(m)
            h = oracle(m).h(0)
            s = hs_coeff(c)
            if h is None:
                rep.indeterminate.append({"m": list(m), "degrees": [0]})
            elif h != s:
                rep.mismatches.append({"m": list(m), "degree": 0, "series": s, "oracle": h, "chamber": [list(r) for r in W]})
    rep.points = len(seen)
    rep.checks["chambers"] = {"count": len(chambers), "lattice_points_checked": checked}
    rep.statuses[0] = _status(rep.mismatches, len(rep.indeterminate), 0)
    return rep


def _inverse(w):
    from fractions import Fraction

    n = len(w)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(w)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


# ---------------------------------------------------------------- figures

def figure_values(vid: str, degree: int, window: Window, opts: OracleOptions = OracleOptions()) -> SeriesWindow:
    spec = catalog_entry(vid)
    if degree not in spec.degrees:
        raise ValueError(f"{vid} has no series for degree {degree}")
    w, _ = evaluate_degree(spec.degrees[degree], window, opts)
    return w


def emit_figure(vid: str, degree: int, window: Window, fmt: str = "grid", opts: OracleOptions = OracleOptions()) -> str:
    if window.nvars != 2:
        raise ValueError("figures are two-dimensional")
    w = figure_values(vid, degree, window, opts)
    return render_grid(w) if fmt == "grid" else render_csv(w)


def render_grid(w: SeriesWindow) -> str:
    (lo1, hi1), (lo2, hi2) = w.window.bounds
    cells = {m: ("·" if w[m] == 0 else str(w[m])) for m in w.window.points()}
    width = max(max(len(c) for c in cells.values()), len(str(lo1)), len(str(hi1)))
    lw = max(len(str(lo2)), len(str(hi2)))
    lines = []
    for m2 in range(hi2, lo2 - 1, -1):
        row = " ".join(cells[(m1, m2)].rjust(width) for m1 in range(lo1, hi1 + 1))
        lines.append(f"{str(m2).rjust(lw)} | {row}")
    lines.append(" " * lw + " +-" + "-" * ((width + 1) * (hi1 - lo1 + 1) - 1))
    lines.append(" " * lw + "   " + " ".join(str(m1).rjust(width) for m1 in range(lo1, hi1 + 1)))
    return "\n".join(lines) + "\n"


def render_csv(w: SeriesWindow) -> str:
    r = w.window.nvars
    header = ",".join(f"m{i + 1}" for i in range(r)) + ",h"
    rows = [header] + [",".join(str(x) for x in m) + f",{w[m]}" for m in w.window.points()]
    return "\n".join(rows) + "\n"
