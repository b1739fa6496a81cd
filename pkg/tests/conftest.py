from __future__ import annotations

from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def unit_rationals(max_den: int = 60):
    """Rationals strictly inside (0, 1)."""
    return (
        st.integers(2, max_den)
        .flatmap(lambda q: st.tuples(st.integers(1, q - 1), st.just(q)))
        .map(lambda pq: Fraction(*pq))
    )


# -- acceptance reporting ----------------------------------------------------------

import time

import pytest

_LINES: list[str] = []


class _Criterion:
    def __init__(self, number: int, title: str, budget: float):
        self.number, self.title, self.budget = number, title, budget
        self.detail = ""

    def __enter__(self):
        self.started = time.perf_counter()
        return self

    def __exit__(self, kind, exc, tb):
        elapsed = time.perf_counter() - self.started
        ok = exc is None and elapsed <= self.budget
        why = self.detail
        if exc is not None:
            why = f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        elif elapsed > self.budget:
            why = f"over budget {self.budget:g} s; {why}"
        line = f"criterion {self.number:2d} {'PASS' if ok else 'FAIL'}  {self.title} ({elapsed:.1f} s) {why}".rstrip()
        _LINES.append(line)
        print(line)
        if exc is None and not ok:
            raise AssertionError(line)
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES):
            terminalreporter.write_line(line)
