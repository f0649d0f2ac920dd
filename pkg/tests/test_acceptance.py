"""One check per acceptance criterion; results are listed at the end of the run."""

import time

import pytest

import test_properties
from conftest import OUTCOMES
from sl3skein.skein_presented import relation_table, table_verdict, verify_table
from sl3skein.suites import (
    annulus_loop,
    bangle_oracle_suite,
    compatibility_suite,
    flip_suite,
    grading_suite,
    quadrilateral_engine_checks,
    triangle_suite,
)
from sl3skein.webexpand import bangle, bracelet, expand


def _failed(report):
    return [c.name for c in report.checks if not c.passed]


def test_criterion_1_compatibility(criterion):
    rep = compatibility_suite()
    criterion(1, rep.passed, f"B^T Pi = 6 Id on {len(rep.checks)} decorated triangulations"
              f"{'' if rep.passed else '; failing ' + ', '.join(_failed(rep))}")
    assert rep.passed


def test_criterion_2_triangle(criterion):
    rep = triangle_suite()
    counts = rep.checks[0].detail
    criterion(2, rep.passed, f"triangle: {counts['clusters']} clusters, {counts['variables']} variables,"
              f" face relation and {sum(c.name.startswith('row:') for c in rep.checks)} table rows")
    assert rep.passed


def test_criterion_3_quadrilateral_engine(criterion):
    checks = quadrilateral_engine_checks()
    ok = all(c.passed for c in checks)
    c = checks[0].detail
    criterion(3, ok, f"quadrilateral: {c['clusters']} clusters, {c['variables']} variables "
              f"({c['unfrozen']} unfrozen, {c['frozen']} frozen); positivity, bar invariance, "
              f"A1' formula: {[x.name for x in checks if not x.passed] or 'all hold'}")
    assert ok


def test_criterion_4_quadrilateral_table(criterion):
    rows = verify_table("quadrilateral")
    evaluated = len(rows) == len(relation_table("quadrilateral"))
    required_ok = all(r.verdict == "pass" for r in rows if r.required)
    ok, reported = table_verdict(rows)
    mismatched = [r.name for r in rows if r.verdict != "pass"]
    criterion(4, ok and evaluated,
              f"{len(rows)} rows evaluated; required rows pass: {required_ok}; "
              f"reported discrepancies {reported} (limit 2): {', '.join(mismatched) or 'none'}")
    for r in rows:
        if r.verdict != "pass":
            assert r.lhs is not None and r.note
    assert evaluated and required_ok
    assert ok, f"{reported} non-required rows disagree: {mismatched}"


def test_criterion_5_flips(criterion):
    rep = flip_suite()
    criterion(5, rep.passed, f"{len(rep.checks) // 2} flips matched and round-tripped exactly"
              f"{'' if rep.passed else '; failing ' + ', '.join(_failed(rep))}")
    assert rep.passed


def test_criterion_6_grading(criterion):
    rep = grading_suite()
    criterion(6, rep.passed, "coker rank, endpoint vs ensemble grading, exchange homogeneity"
              f"{'' if rep.passed else '; failing ' + ', '.join(_failed(rep))}")
    assert rep.passed


def test_criterion_7_positive_expansions(criterion):
    start = time.perf_counter()
    dec, gamma = annulus_loop()
    tri = dec.triangulation
    webs = {"gamma": gamma}
    for n in (1, 2, 3):
        webs[f"bangle{n}"] = bangle(gamma, n, tri)
        webs[f"bracelet{n}"] = bracelet(gamma, n, tri)
    bad = []
    for name, web in webs.items():
        res = expand(web, dec)
        strictly_positive = bool(res.numerator) and res.positive
        if not (strictly_positive and res.bar_invariant and res.grading is not None
                and not any(res.grading)):
            bad.append(name)
    elapsed = time.perf_counter() - start
    criterion(7, not bad, f"{len(webs)} webs on annulus(1,1) positive, bar-invariant, grading 0"
              f" in {elapsed:.2f}s{'' if not bad else '; failing ' + ', '.join(bad)}")
    assert not bad


def test_criterion_8_oracles(criterion):
    rep = bangle_oracle_suite()
    criterion(8, rep.passed, ", ".join(f"{c.name}={'ok' if c.passed else 'FAIL'}" for c in rep.checks))
    assert rep.passed


PROPERTY_SUITES = [
    "test_mutation_is_an_involution",
    "test_q_commutation_law",
    "test_exact_left_divide_round_trip",
    "test_bar_is_a_ring_anti_involution",
    "test_enumeration_independent_of_thread_count",
]


def test_criterion_9_property_suites(criterion):
    results = {}
    for name in PROPERTY_SUITES:
        outcome = OUTCOMES.get(f"tests/test_properties.py::{name}")
        if outcome is None:
            # not run in this session: run the full randomized suite here
            try:
                getattr(test_properties, name)()
                outcome = "passed"
            except AssertionError:
                outcome = "failed"
        results[name] = outcome
    ok = all(v == "passed" for v in results.values())
    criterion(9, ok, f"{len(results)} property suites x {test_properties.PROPERTY_CASES} cases: "
              + ", ".join(f"{k.removeprefix('test_')}={v}" for k, v in results.items()))
    assert ok
