import pytest

# criterion id -> (passed, summary); filled by test_acceptance
CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(CRITERIA):
        passed, summary = CRITERIA[cid]
        terminalreporter.write_line(f"criterion {cid}: {'PASS' if passed else 'FAIL'}  {summary}")


@pytest.fixture
def criterion():
    """Record a criterion outcome, print it, then assert it."""

    def check(cid, passed, summary):
        CRITERIA[cid] = (bool(passed), summary)
        print(f"criterion {cid}: {'PASS' if passed else 'FAIL'}  {summary}")
        assert passed, f"criterion {cid}: {summary}"

    return check
