"""The twelve acceptance criteria at full sample sizes; one PASS/FAIL line each."""

import pytest

from bqsm.analysis.suite import criteria
from conftest import ACCEPTANCE_LINES

CRITERIA = {c.number: c for c in criteria()}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    c = CRITERIA[number].execute()
    line = c.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    failed = [r.line() for r in c.reports if r.is_failure]
    assert c.passed, "\n".join(failed)
