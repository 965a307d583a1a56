import pytest

from invprimes.acceptance import CRITERIA, run_criterion, select


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: f"{c.number}-{c.name.replace(' ', '-')}")
def test_criterion(criterion, capsys):
    outcome = run_criterion(criterion)
    with capsys.disabled():
        print("\n" + outcome.line())
    assert outcome.passed, outcome.detail


def test_selection():
    assert [c.number for c in select("fgl")] == [4, 5, 6, 7]
    assert select("nonexistent") == []
    assert [c.number for c in select(None)] == list(range(1, 10))
    assert [c.number for c in select("3")] == [3]
