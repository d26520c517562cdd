"""One test per acceptance criterion; each prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines and the
details behind them, or use ``qsymgb suite -v``.
"""

import pytest

from qsymgb.suite import CHECKS, SuiteContext, run_check

from conftest import ACCEPTANCE_LINES


@pytest.fixture(scope="module")
def ctx():
    return SuiteContext()


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number, ctx):
    res = run_check(number, ctx)
    print()
    print(res.line())
    ACCEPTANCE_LINES.append(res.line())
    for d in res.details:
        print("    " + d)
    assert res.ok, "\n".join(res.details)
