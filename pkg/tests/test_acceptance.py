"""One test per acceptance criterion; each prints its PASS/FAIL line."""

import pytest

from cubicpoints.acceptance import CRITERIA


@pytest.mark.parametrize("name", list(CRITERIA))
def test_criterion(name):
    result = CRITERIA[name]()
    print(result.line())
    assert result.passed, result.detail
