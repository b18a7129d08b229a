"""Release gate: every criterion runs at its stated tolerance and prints one
PASS/FAIL line (visible with pytest -s)."""

import pytest

from vacuum_kinetics import acceptance


@pytest.mark.parametrize("criterion", acceptance.ALL_CRITERIA,
                         ids=[f"criterion_{i}" for i in range(1, 12)])
def test_acceptance_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.line()
    assert result.in_budget, (
        f"criterion {result.number} exceeded its runtime budget: "
        f"{result.elapsed:.1f}s >= {result.budget:.0f}s")
