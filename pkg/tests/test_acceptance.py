"""Acceptance criteria 1-12, each at its stated tolerance and runtime budget."""

import pytest

from maxrigid.experiments import criterion

pytestmark = pytest.mark.acceptance


@pytest.mark.parametrize("number", range(1, 13), ids=[f"AC{i}" for i in range(1, 13)])
def test_acceptance_criterion(number, report_line):
    check = criterion(number, seed=0)
    print(check.line())
    report_line(check.line())
    assert check.passed, check.line()
