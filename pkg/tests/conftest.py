import pytest

_LINES = []


class Recorder:
    def __call__(self, criterion, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
        _LINES.append(line)
        print(line)
        return passed


@pytest.fixture
def record():
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_LINES, key=_order):
        terminalreporter.write_line(line)


def _order(line):
    tag = line.split("criterion ", 1)[1].split(":", 1)[0]
    num = "".join(ch for ch in tag if ch.isdigit())
    return int(num), tag
