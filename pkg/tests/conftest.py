import pytest


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, title, passed, elapsed, limit)``."""

    def record(number, title, passed, elapsed, limit=None):
        budget = f" (limit {limit:g}s)" if limit is not None else ""
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number:>2}: {title}  {elapsed:.2f}s{budget}"
        request.config._acceptance_lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
