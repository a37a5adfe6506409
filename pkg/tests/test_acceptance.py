"""End-to-end acceptance gate: one test and one printed line per criterion, at full scale."""
import pytest

from magic_pareto.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1), ids=[name.replace(" ", "_") for name, _ in CRITERIA])
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print(f"\n{result.line()}")
    assert result.passed, result.line()
