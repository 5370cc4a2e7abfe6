"""Exit criteria; one line per criterion is printed in the terminal summary."""

import pytest

from conftest import ACCEPTANCE_LINES
from nlshare.checks import CHECKS, run_checks


@pytest.mark.parametrize("name", list(CHECKS))
def test_criterion(name):
    (result,) = run_checks([name])
    ACCEPTANCE_LINES.append(result.line())
    print(result.line())
    assert result.passed, result.detail


def test_negative_control_fails():
    results = run_checks(["optimum", "certificates"], perturb=True)
    assert not any(r.passed for r in results)
