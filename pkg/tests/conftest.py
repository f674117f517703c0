import pytest

# criterion number -> (title, passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance criterion.

    Usage: ``criterion(3, "round trip")`` at the top of the test; the result is
    written when the test finishes and printed in the terminal summary.
    """
    holder = {}

    def declare(number, title):
        holder["number"], holder["title"] = number, title

    yield declare
    if "number" in holder:
        rep = getattr(request.node, "rep_call", None)
        passed = rep is not None and rep.passed
        detail = "" if passed or rep is None else rep.longreprtext.strip().splitlines()[-1]
        ACCEPTANCE[holder["number"]] = (holder["title"], passed, detail)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
