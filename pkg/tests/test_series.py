import pytest
from hypothesis import given
from hypothesis import strategies as st

from cohomseries.catalog import P00_12, bicubic_G, catalog_entry, hirzebruch_rational
from cohomseries.laurent import LaurentPoly, lp_mul
from cohomseries.rational import FactoredRational, parse_rational
from cohomseries.series import (
    ExpansionLimitError,
    ExpansionLimits,
    ExpansionPlan,
    ExponentFilter,
    Point,
    SeriesWindow,
    Smallness,
    StabilizationError,
    Window,
    classify_smallness,
    expand_family,
    expand_ordered,
    expand_terms,
    parse_filter,
    parse_plan,
    parse_window,
    truncation_weight,
    window_add,
)
from strategies import exponents, polys

Z1 = ExpansionPlan.of((1, "0"))
T21_00 = ExpansionPlan.of((2, "0"), (1, "0"))
T12_00 = ExpansionPlan.of((1, "0"), (2, "0"))


def test_classify_examples():
    assert classify_smallness((-1, 4), T21_00) is Smallness.SMALL
    assert classify_smallness((-1, 4), T12_00) is Smallness.LARGE
    assert classify_smallness((1, 0), ExpansionPlan.of((2, "inf"), (1, "0"))) is Smallness.SMALL


def test_classify_zero_vector():
    with pytest.raises(ValueError):
        classify_smallness((0, 0), T12_00)


def test_plan_parsing():
    p = parse_plan("t2=0,t1=inf")
    assert p == ExpansionPlan.of((2, "0"), (1, "inf"))
    assert str(p) == "t2=0,t1=inf"
    with pytest.raises(ValueError):
        parse_plan("t1=0,t1=inf")
    with pytest.raises(ValueError):
        parse_plan("t1=1")
    with pytest.raises(ValueError):
        parse_plan("t1=0", 2)


def test_window_parsing():
    w = parse_window("t1=-6..6,t2=-2..3")
    assert w.bounds == ((-6, 6), (-2, 3)) and w.size() == 13 * 6
    assert str(w) == "t1=-6..6,t2=-2..3"
    with pytest.raises(ValueError):
        parse_window("t1=3..2")
    with pytest.raises(ValueError):
        parse_window("t2=0..1")
    assert Window(((0, 0),)).size() == 1


def test_filter_parsing():
    f = parse_filter("1*t1+1*t2>=0", 2)
    assert f.keep((1, -1)) and not f.keep((-1, 0))
    assert parse_filter(str(f), 2) == f
    g = parse_filter("t1-2*t2<3,t2=1", 2)
    assert g.constraints == (((1, -2), "<", 3), ((0, 1), "=", 1))
    with pytest.raises(ValueError):
        parse_filter("t1>>0", 2)


def test_binomial_series():
    w = expand_ordered(parse_rational("1/((1-t)^2)", 1), Z1, Window(((0, 4),)))
    assert [w[(i,)] for i in range(5)] == [1, 2, 3, 4, 5]


def test_quintic_coefficient():
    w = expand_ordered(parse_rational("(1-t^5)/((1-t)^5)", 1), Z1, Window(((0, 6),)))
    assert [w[(i,)] for i in range(7)] == [1, 5, 15, 35, 70, 125, 205]


def test_expansion_at_infinity_one_variable():
    # 1/(1-t) at infinity is -t^-1 - t^-2 - ...
    w = expand_ordered(parse_rational("1/((1-t))", 1), ExpansionPlan.of((1, "inf")), Window(((-4, 4),)))
    assert w.coeffs == {(-1,): -1, (-2,): -1, (-3,): -1, (-4,): -1}


def test_bicubic_sum_at_h1():
    one = SeriesWindow.from_poly(LaurentPoly.one(2), Window.cube(2, -2, 2))
    w = expand_terms([(1, bicubic_G(), P00_12, None), (1, bicubic_G(True), P00_12, None)], Window.cube(2, -2, 2))
    assert window_add(one, w)[(1, 0)] == 3


def test_hirzebruch_corner_coefficient():
    w = expand_ordered(hirzebruch_rational(1), ExpansionPlan.of((1, "inf"), (2, "0")), Window.cube(2, -4, 4))
    assert w[(-2, 0)] == 2


def test_order_dependent_series():
    f = parse_rational("1/((1-t1^-1*t2^4))", 2)
    win = Window.cube(2, -8, 8)
    a = expand_ordered(f, T21_00, win)
    b = expand_ordered(f, T12_00, win)
    assert a.coeffs == {(0, 0): 1, (-1, 4): 1, (-2, 8): 1}
    assert b.coeffs == {(1, -4): -1, (2, -8): -1}
    assert all(e[0] <= 0 for e in a.coeffs) and all(e[0] >= 1 for e in b.coeffs)


def test_window_add():
    f = parse_rational("(1-t1*t2)/((1-t1)^2*(1-t2))", 2)
    win = Window.cube(2, -3, 3)
    w = expand_ordered(f, T12_00, win)
    assert window_add(w, SeriesWindow.zero(win)) == w
    assert window_add(w, w, -1).coeffs == {}
    with pytest.raises(ValueError):
        window_add(w, SeriesWindow.zero(Window.cube(2, 0, 1)))


def _long_division(f: FactoredRational, hi: tuple[int, ...]) -> dict:
    """Power series of f for nonnegative exponents, by solving S * D = N degree by degree."""
    D = f.denominator_poly()
    N = f.numerator
    assert D.coeff((0,) * f.nvars) == 1
    import itertools

    pts = sorted(itertools.product(*(range(h + 1) for h in hi)), key=sum)
    S = {}
    for e in pts:
        v = N.coeff(e)
        for d, c in D.items():
            if any(d):
                prev = tuple(a - b for a, b in zip(e, d))
                v -= c * S.get(prev, 0)
        S[e] = v
    return {e: c for e, c in S.items() if c}


nonneg_factor = st.tuples(st.integers(0, 2), st.integers(0, 2)).filter(any)


@given(polys(2, 4).map(lambda p: LaurentPoly(2, {tuple(abs(x) for x in e): c for e, c in p.items()})),
       st.lists(st.tuples(nonneg_factor, st.integers(1, 3)), min_size=1, max_size=3))
def test_all_zero_corner_matches_long_division(num, factors):
    f = FactoredRational(num, tuple(factors))
    win = Window.cube(2, 0, 6)
    w = expand_ordered(f, T12_00, win)
    assert w.coeffs == _long_division(f, (6, 6))


def _safe_window(f: FactoredRational, win: Window):
    D = f.denominator_poly()
    lo_pad = [max(d[i] for d in D.terms) for i in range(f.nvars)]
    hi_pad = [-min(d[i] for d in D.terms) for i in range(f.nvars)]
    return win.shrink(lo_pad, hi_pad)


PLANS = [ExpansionPlan.of(*s) for s in (
    ((1, "0"), (2, "0")), ((2, "0"), (1, "0")), ((1, "inf"), (2, "0")), ((2, "inf"), (1, "0")),
    ((1, "0"), (2, "inf")), ((2, "0"), (1, "inf")), ((1, "inf"), (2, "inf")), ((2, "inf"), (1, "inf")),
)]
FACTORS = st.lists(st.tuples(exponents(2, -2, 2).filter(any), st.integers(1, 2)), min_size=1, max_size=3)


@given(polys(2, 3), FACTORS, st.sampled_from(PLANS))
def test_expansion_exactness(num, factors, plan):
    f = FactoredRational(num, tuple(factors))
    win = Window.cube(2, -7, 7)
    w = expand_ordered(f, plan, win)
    inner = _safe_window(f, win)
    if inner is None:
        return
    prod = lp_mul(w.to_poly(), f.denominator_poly())
    for e in inner.points():
        assert prod.coeff(e) == f.numerator.coeff(e)


@pytest.mark.parametrize("vid", ["cicy7885", "h24-tuned", "bicubic", "hirzebruch:2", "surf2e:3"])
def test_catalog_exactness(vid):
    spec = catalog_entry(vid)
    win = Window.cube(2, -8, 8)
    for ds in spec.degrees.values():
        for t in ds.terms:
            w = expand_ordered(t.rational, t.plan, win)
            inner = _safe_window(t.rational, win)
            prod = lp_mul(w.to_poly(), t.rational.denominator_poly())
            for e in inner.points():
                assert prod.coeff(e) == t.rational.numerator.coeff(e)


def test_truncation_weight_certificate():
    f = parse_rational("1/((1-t1^-1*t2^4)*(1-t1)*(1-t2^-3))", 2)
    for plan in PLANS:
        lam = truncation_weight(f.factors, plan)
        for m, _ in f.factors:
            eff = m if classify_smallness(m, plan) is Smallness.SMALL else tuple(-x for x in m)
            assert sum(a * b for a, b in zip(lam, eff)) >= 1


@given(st.dictionaries(exponents(2, -5, 5), st.integers(-5, 5)),
       st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.sampled_from([">=", "<", "="]), st.integers(-3, 3))
def test_filter_idempotent(coeffs, wts, rel, bound):
    win = Window.cube(2, -5, 5)
    sw = SeriesWindow(win, {e: c for e, c in coeffs.items() if c})
    flt = ExponentFilter(((wts, rel, bound),))
    once = flt.apply(sw)
    assert flt.apply(once) == once


def test_filter_applies_before_windowing():
    f = parse_rational("1/((1-t1)*(1-t2))", 2)
    flt = parse_filter("t1+t2<=2", 2)
    w = expand_ordered(f, T12_00, Window.cube(2, 0, 3), flt)
    assert set(w.coeffs) == {(a, b) for a in range(4) for b in range(4) if a + b <= 2}


def test_limits_enforced():
    f = parse_rational("1/((1-t1)^3*(1-t2)^3)", 2)
    with pytest.raises(ExpansionLimitError):
        expand_ordered(f, T12_00, Window.cube(2, 0, 40), limits=ExpansionLimits(max_terms=100))


def test_family_trivial():
    f = parse_rational("1/((1-t1)*(1-t2))", 2)
    gen = lambda n: [(1, f, T12_00, None)] if n == 0 else []
    res = expand_family(gen, Window.cube(2, 0, 2), stabilization=1)
    assert res.n_final == 1 and res.window[(1, 1)] == 1


def test_family_non_stabilizing():
    f = parse_rational("1/((1-t1)*(1-t2))", 2)
    gen = lambda n: [(1, f, T12_00, None)]
    with pytest.raises(StabilizationError):
        expand_family(gen, Window.cube(2, 0, 2), n_cap=5)


def test_family_growth_stabilizes():
    # monomials t1^(2^|n|) leave the window once 2^|n| > 10
    gen = lambda n: [(1, parse_rational(f"t^{2 ** abs(n)}", 1), Z1, None)]
    res = expand_family(gen, Window(((0, 10),)), stabilization=2)
    assert res.window.coeffs == {(1,): 1, (2,): 2, (4,): 2, (8,): 2}
    assert res.n_stable == 3
