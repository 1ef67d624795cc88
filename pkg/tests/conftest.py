import pytest

_RESULTS: dict[int, tuple[str, bool, str]] = {}


class Recorder:
    def __call__(self, number: int, title: str, passed: bool, detail: str = ""):
        _RESULTS[number] = (title, bool(passed), detail)
        return passed


@pytest.fixture
def record():
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, passed, detail = _RESULTS[number]
        line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
