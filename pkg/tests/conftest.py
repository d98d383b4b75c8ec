from __future__ import annotations

import contextlib
import time

import pytest

_ACCEPTANCE: list[str] = []


class CriterionRecorder:
    """Records one PASS/FAIL line per acceptance criterion, even when the body raises."""

    @contextlib.contextmanager
    def criterion(self, number: int, title: str):
        start = time.perf_counter()
        details: list[str] = []
        try:
            yield details
        except BaseException as exc:
            line = f"FAIL criterion {number} ({title}): {exc!s}".splitlines()[0]
            _ACCEPTANCE.append(line)
            raise
        extra = f"; {'; '.join(details)}" if details else ""
        _ACCEPTANCE.append(
            f"PASS criterion {number} ({title}) in {time.perf_counter() - start:.1f}s{extra}"
        )


@pytest.fixture(scope="session")
def acceptance() -> CriterionRecorder:
    return CriterionRecorder()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[2])):
        terminalreporter.write_line(line)
