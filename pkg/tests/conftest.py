import contextlib

ACCEPTANCE: dict[int, tuple[str, str]] = {}


@contextlib.contextmanager
def criterion(number: int, title: str):
    """Record PASS/FAIL for an acceptance criterion and re-raise any failure."""
    try:
        yield
    except BaseException:
        ACCEPTANCE[number] = ("FAIL", title)
        print(f"FAIL criterion {number}: {title}")
        raise
    ACCEPTANCE[number] = ("PASS", title)
    print(f"PASS criterion {number}: {title}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        status, title = ACCEPTANCE[number]
        terminalreporter.write_line(f"{status} criterion {number}: {title}")
