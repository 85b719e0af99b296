"""The ten numbered verification checks at their full sizes, one test per
check, each printing its single pass/fail line with the stated time
limit enforced."""

import time

from ficat import checks


def _run(fn, limit_seconds):
    start = time.time()
    rec = fn(profile="full", seed=0)
    elapsed = time.time() - start
    line = "criterion %02d (%s): %s in %.1fs (limit %ds) - %s" % (
        rec["criterion"],
        rec["name"],
        "PASS" if rec["pass"] else "FAIL",
        elapsed,
        limit_seconds,
        rec["detail"],
    )
    print(line)
    assert rec["pass"], line
    assert elapsed < limit_seconds, line
    return rec


def test_criterion_01_z16_composition_regression():
    _run(checks.check_01, 1)


def test_criterion_02_counting_identity():
    _run(checks.check_02, 120)


def test_criterion_03_unique_factorization():
    _run(checks.check_03, 300)


def test_criterion_04_order_laws():
    _run(checks.check_04, 300)


def test_criterion_05_realizing_morphisms():
    _run(checks.check_05, 300)


def test_criterion_06_chain_identities():
    _run(checks.check_06, 600)


def test_criterion_07_resolution_exactness():
    _run(checks.check_07, 300)


def test_criterion_08_finite_generation():
    _run(checks.check_08, 120)


def test_criterion_09_initial_term_engine():
    _run(checks.check_09, 600)


def test_criterion_10_axiom_suite():
    _run(checks.check_10, 300)
