import time
from contextlib import contextmanager

import pytest

_LINES: list[str] = []


@contextmanager
def criterion(number: int, title: str, limit_s: float):
    """Time a block, enforce its runtime limit and record one PASS/FAIL line."""
    info: dict[str, str] = {}
    start = time.perf_counter()
    ok = False
    try:
        yield info
        elapsed = time.perf_counter() - start
        info.setdefault("runtime", f"{elapsed:.1f}s")
        assert elapsed < limit_s, f"runtime {elapsed:.1f}s exceeds {limit_s:g}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        detail = ", ".join(f"{k}={v}" for k, v in info.items() if k != "runtime")
        line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title} ({detail}; {elapsed:.1f}s)"
        _LINES.append(line)
        print(line)


@pytest.fixture
def acceptance():
    return criterion


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split(".")[0].split()[-1])):
            terminalreporter.write_line(line)
