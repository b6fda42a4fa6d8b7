"""Acceptance suite: every reference check at its stated tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see one pass/fail line
per criterion (the same table ``infocap paper-numbers`` prints).
"""

import pytest

from infocap.checks import CHECK_NAMES, run_check


@pytest.mark.parametrize("name", CHECK_NAMES)
def test_criterion(name):
    result = run_check(name)
    status = "PASS" if result.passed else "FAIL"
    print(f"{status}  {name}  ({result.elapsed_s:.1f}s)  {result.detail}")
    assert result.passed, f"{name}: {result.detail}"
