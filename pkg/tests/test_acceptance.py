"""Acceptance suite: one test per criterion, each printing its pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines, or ``torusbif selftest`` for the same sweeps outside pytest.
"""

import pytest

from torusbif import selftest


@pytest.mark.parametrize(
    "criterion",
    selftest.CRITERIA,
    ids=[fn.__name__.removeprefix("criterion_") for fn in selftest.CRITERIA],
)
def test_criterion(criterion):
    result = criterion(seed=0)
    print(selftest.format_result(result), end="")
    assert result.passed, f"{result.slug}: {result.detail}"
