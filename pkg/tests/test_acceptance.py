"""One test per acceptance criterion, each printing a pass/fail line."""

import pytest

from conftest import ACCEPTANCE_LINES
from depthcalc import acceptance


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion):
    result = criterion(seed=0)
    print(result.line())
    ACCEPTANCE_LINES.append(result.line())
    assert result.passed, result.detail
    assert result.seconds < result.limit, f"took {result.seconds:.2f}s, limit {result.limit}s"
