import time
from contextlib import contextmanager

import pytest

_RESULTS: dict[int, tuple[str, bool, str]] = {}


class Criterion:
    """Records one acceptance criterion's outcome, runtime and detail line."""

    def __init__(self):
        self.detail = ""

    @contextmanager
    def __call__(self, number: int, title: str, budget: float | None = None):
        start = time.perf_counter()
        ok = False
        try:
            yield self
            elapsed = time.perf_counter() - start
            self.detail = (self.detail + f" [{elapsed:.2f}s]").strip()
            if budget is not None:
                assert elapsed < budget, f"runtime {elapsed:.2f}s exceeds {budget}s"
            ok = True
        finally:
            _RESULTS[number] = (title, ok, self.detail)
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {title} {self.detail}")


@pytest.fixture
def criterion():
    return Criterion()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        title, ok, detail = _RESULTS[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {title} {detail}")
