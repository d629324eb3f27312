"""Acceptance criteria, each at its stated size and time budget.

Every test records one PASS/FAIL line (listed again in the terminal
summary).  Criteria 4 and 7 are checked as stated and fail; the companion
tests after them check the corrected statements.  The ledger explains why.
"""

import random
import time

from idelegenus import verify

SEED = 20261014


def run_timed(fn):
    start = time.perf_counter()
    result = fn()
    return result, time.perf_counter() - start


def judge(criterion, label, result, elapsed, budget):
    ok = result.passed and elapsed < budget
    detail = (f"{result.instances} instances, {result.failures} failures, "
              f"{elapsed:.1f}s (budget {budget}s)")
    if result.detail:
        detail += f"; first failure: {result.detail}"
        if result.reproducer is not None:
            detail += f"; reproducer {result.reproducer}"
    criterion(label, ok, detail)
    assert result.passed, result.detail
    assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"


def test_criterion_1_satz90_roundtrip(criterion):
    res, dt = run_timed(lambda: verify.check_satz90(random.Random(SEED), 1000, 12, 6, 3, 9))
    judge(criterion, "1 Satz 90 roundtrip", res, dt, 5)


def test_criterion_2_tate_vanishing(criterion):
    res, dt = run_timed(lambda: verify.check_tate(random.Random(SEED), 8, 200, 6, 6))
    judge(criterion, "2 Tate vanishing", res, dt, 30)


def test_criterion_3_genus_count(criterion):
    res, dt = run_timed(lambda: verify.check_genus_count(12, 4))
    judge(criterion, "3 genus count", res, dt, 10)


def test_criterion_4_image_characterization(criterion):
    res, dt = run_timed(lambda: verify.check_image_characterization(
        random.Random(SEED), 8, 3, 1000))
    judge(criterion, "4 image characterization (sum (n/e_i) x_i)", res, dt, 60)


def test_criterion_4_with_galois_sum(criterion):
    res, dt = run_timed(lambda: verify.check_image_characterization_galois(
        random.Random(SEED), 8, 3, 1000))
    judge(criterion, "4' image characterization (sum a_i x_i)", res, dt, 60)


def test_criterion_5_splitting_arithmetic(criterion):
    res, dt = run_timed(lambda: verify.check_splitting(12))
    judge(criterion, "5 splitting arithmetic", res, dt, 5)


def test_criterion_6_direct_sum(criterion):
    res, dt = run_timed(lambda: verify.check_direct_sum(random.Random(SEED), 1000, 6, 5, 40, 9))
    judge(criterion, "6 direct sum", res, dt, 10)


def test_criterion_7_reciprocity(criterion):
    res, dt = run_timed(lambda: verify.check_reciprocity(random.Random(SEED), 200, 8, 4))
    judge(criterion, "7 reciprocity on random windows", res, dt, 30)


def test_criterion_7_on_enriched_windows(criterion):
    res, dt = run_timed(lambda: verify.check_reciprocity(
        random.Random(SEED), 60, 8, 4, enriched=True))
    judge(criterion, "7' reciprocity on enriched windows", res, dt, 30)


def test_criterion_8_commuting_diagram(criterion):
    res, dt = run_timed(lambda: verify.check_commuting_diagram(random.Random(SEED), 500, 12, 6))
    judge(criterion, "8 commuting diagram", res, dt, 10)
