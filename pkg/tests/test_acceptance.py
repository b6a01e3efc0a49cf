"""Acceptance criteria 1-9.  Each test records one PASS/FAIL line, printed in the terminal summary."""

import subprocess
import sys
from functools import lru_cache

import pytest

import conftest
from cohomseries.catalog import (
    BICUBIC,
    CICY7885,
    H24,
    P00_12,
    PELL_A,
    QUINTIC,
    SEQ_7726_A,
    SEQ_7726_B,
    SEQ_7726_C,
    bicubic_G,
    catalog_entry,
    diagnostic_entry,
    sequence_values,
)
from cohomseries.oracle import (
    hirzebruch_h0,
    hirzebruch_h1,
    hirzebruch_h2,
    hirzebruch_toric_count,
)
from cohomseries.rational import parse_rational
from cohomseries.series import ExpansionPlan, StabilizationError, Window, expand_ordered, expand_terms
from cohomseries.verify import (
    OracleCache,
    OracleOptions,
    _euler_oracle,
    _serre_oracle,
    evaluate_degree,
    verify_entry,
    verify_euler,
    wall_identities,
    wall_identity_detail,
)

W8 = Window.cube(2, -8, 8)
W6 = Window.cube(2, -6, 6)
HYPERSURFACES = ["bicubic", "h24-generic", "h24-tuned", "h35", "surf2e:3", "surf2e:4",
                 "p1pn:(1,2,3)", "p1pn:(2,4,3)", "p1pn:(2,2,4)"]
CONJECTURE_ENTRIES = HYPERSURFACES + ["cicy7885"]
FAMILIES = ["cicy7644", "cicy7726"]
FAMILY_OPTS = OracleOptions(num_seeds=1)

pytestmark = pytest.mark.slow


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)


def window_for(vid: str) -> Window:
    return W6 if vid == "cicy7885" else W8


@lru_cache(maxsize=None)
def conjecture_run(vid: str):
    spec = catalog_entry(vid)
    oracle = OracleCache(spec, OracleOptions())
    rep = verify_entry(vid, window_for(vid), OracleOptions(), spec=spec, oracle=oracle)
    return rep, oracle


@lru_cache(maxsize=None)
def family_oracle(vid: str) -> OracleCache:
    return OracleCache(catalog_entry(vid), FAMILY_OPTS)


def test_criterion_1_hirzebruch():
    bad = []
    for n in (1, 2, 3):
        spec = catalog_entry(f"hirzebruch:{n}")
        wins = {i: evaluate_degree(spec.degrees[i], W8)[0] for i in range(3)}
        closed = (hirzebruch_h0, hirzebruch_h1, hirzebruch_h2)
        for m in W8.points():
            series = [wins[i][m] for i in range(3)]
            counts = [hirzebruch_toric_count(n, i, *m) for i in range(3)]
            forms = [f(n, *m) for f in closed]
            if not series == counts == forms:
                bad.append((n, m, series, counts, forms))
    record(1, not bad, f"F_1..F_3 on [-8,8]^2, {len(bad)} mismatching points")
    assert not bad, bad[:5]


def test_criterion_2_euler_corner_sum():
    cases = [(QUINTIC, Window(((-6, 6),))), (H24, W6), (BICUBIC, W6), (CICY7885, W6)]
    counts = {cfg.name: len(verify_euler(cfg, w).mismatches) for cfg, w in cases}
    ok = not any(counts.values())
    record(2, ok, f"mismatches {counts}")
    assert ok


def test_criterion_3_order_dependent_series():
    f = parse_rational("1/((1-t1^-1*t2^4))", 2)
    a = expand_ordered(f, ExpansionPlan.of((2, "0"), (1, "0")), W8)
    b = expand_ordered(f, ExpansionPlan.of((1, "0"), (2, "0")), W8)
    ok = a.coeffs == {(0, 0): 1, (-1, 4): 1, (-2, 8): 1} and b.coeffs == {(1, -4): -1, (2, -8): -1}
    record(3, ok, f"(t2:0,t1:0) {sorted(a.coeffs.items())}; (t1:0,t2:0) {sorted(b.coeffs.items())}")
    assert ok


def test_criterion_4_wall_identities():
    res = {name: wall_identity_detail(lhs, rhs, Window(((0, 20),)))
           for name, (lhs, rhs) in wall_identities().items()}
    diffs = {name: len(d["differences"]) for name, d in res.items()}
    ok = all(d["holds"] for d in res.values())
    record(4, ok, f"differences on [0,20]: {diffs}")
    assert ok


def test_criterion_5_bicubic_collapse():
    lhs = expand_terms([(1, bicubic_G(), P00_12, None), (1, bicubic_G(True), P00_12, None)], W6)
    rhs = expand_ordered(parse_rational("(1-t1^3*t2^3)/((1-t1)^3*(1-t2)^3)", 2), P00_12, W6)
    bad = [m for m in W6.points() if (m == (0, 0)) + lhs[m] != rhs[m]]
    record(5, not bad, f"1 + G(t1,t2) + G(t2,t1) vs HS on [-6,6]^2, {len(bad)} mismatches")
    assert not bad


def test_criterion_6_conjectures():
    failing = {}
    lines = []
    for vid in CONJECTURE_ENTRIES:
        rep, _ = conjecture_run(vid)
        frac = rep.indeterminate_fraction()
        exact_bad = [x for x in rep.mismatches if not isinstance(x["oracle"], list)]
        lines.append(f"{vid}={rep.status}({len(exact_bad)} mism, {100 * frac:.1f}% indet)")
        if exact_bad or frac >= 0.1 or rep.errors:
            failing[vid] = [(tuple(x["m"]), x["degree"], x["series"], x["oracle"]) for x in exact_bad[:3]]
    record(6, not failing, "; ".join(lines) + (f"; first offending (m, i, series, oracle): {failing}" if failing else ""))
    assert not failing, failing


def test_criterion_7_families():
    detail = []
    ok = True
    seq_ok = (sequence_values(PELL_A, -4, 4) == [-204, -35, -6, -1, 0, 1, 6, 35, 204]
              and sequence_values(SEQ_7726_A, -2, 2) == [-505, -23, -1, 1, 23]
              and sequence_values(SEQ_7726_B, -2, 2) == [-66, -3, 0, 3, 66]
              and sequence_values(SEQ_7726_C, -2, 2) == [-176, -8, 0, 8, 176])
    ok &= seq_ok
    detail.append(f"sequences {'ok' if seq_ok else 'wrong'}")
    for vid in FAMILIES:
        oracle = family_oracle(vid)
        try:
            win, n = evaluate_degree(catalog_entry(vid).degrees[0], W8, OracleOptions(stabilization=2, n_cap=8))
        except StabilizationError as exc:
            ok = False
            detail.append(f"{vid}: {exc}")
            continue
        bad = [m for m in W8.points() if oracle(m).h(0) is not None and oracle(m).h(0) != win[m]]
        ok &= n <= 8 and not bad
        detail.append(f"{vid}: N={n}, {len(bad)} h^0 mismatches")
    # sign-corrected variants, for information only; they never decide the criterion
    for vid in FAMILIES:
        oracle = family_oracle(vid)
        spec = diagnostic_entry(f"{vid}:signed")
        try:
            win, n = evaluate_degree(spec.degrees[0], W8, OracleOptions(stabilization=2, n_cap=8))
            bad = sum(1 for m in W8.points() if oracle(m).h(0) is not None and oracle(m).h(0) != win[m])
            ind = sum(1 for m in W8.points() if oracle(m).h(0) is None)
            detail.append(f"[info {vid}:signed N={n}, {bad} h^0 mismatches, {ind} indeterminate]")
        except StabilizationError as exc:
            detail.append(f"[info {vid}:signed {exc}]")
    record(7, ok, "; ".join(detail))
    assert ok


def test_criterion_8_oracle_consistency():
    problems = []
    totals = {"euler": 0, "serre": 0}
    for vid in ("hirzebruch:1", "hirzebruch:2", "hirzebruch:3"):
        rep = verify_entry(vid, W8)
        for key in ("euler_oracle", "serre_oracle"):
            if rep.checks[key]["failures"]:
                problems.append((vid, key, rep.checks[key]["failures"][:2]))
    for vid in CONJECTURE_ENTRIES:
        rep, oracle = conjecture_run(vid)
        spec = oracle.spec
        for key in ("euler_oracle", "serre_oracle"):
            if rep.checks[key]["failures"]:
                problems.append((vid, key, rep.checks[key]["failures"][:2]))
        totals["euler"] += rep.checks["euler_oracle"]["checked"]
        totals["serre"] += rep.checks["serre_oracle"]["checked"]
        if spec.config.num_equations == 1 and rep.indeterminate:
            problems.append((vid, "q=1 not exact", rep.indeterminate[:2]))
    for vid in FAMILIES:
        oracle = family_oracle(vid)
        spec = oracle.spec
        e = _euler_oracle(oracle, W8, spec)
        s = _serre_oracle(oracle, W8, spec.canonical, spec.dim)
        totals["euler"] += e["checked"]
        totals["serre"] += s["checked"]
        for key, res in (("euler_oracle", e), ("serre_oracle", s)):
            if res["failures"]:
                problems.append((vid, key, res["failures"][:2]))
    record(8, not problems, f"euler points {totals['euler']}, serre pairs {totals['serre']}, problems {problems}")
    assert not problems


def test_criterion_9_determinism(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"report{k}.json"
        subprocess.run([sys.executable, "-m", "cohomseries", "verify", "--entry", "bicubic",
                        "--window", "t1=-8..8,t2=-8..8", "--seed", "7", "--report", str(path)],
                       capture_output=True, check=False)
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    record(9, ok, f"two bicubic reports with seed 7, {len(outs[0])} bytes, identical={outs[0] == outs[1]}")
    assert ok
