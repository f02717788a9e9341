from __future__ import annotations

import pytest

from dyber import AlgebraContext, default_cap, shared_table

# filled by test_acceptance.py; printed once at the end of the session
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def tables_for(cap):
    return lambda c: shared_table(c.m, c.n, cap)


@pytest.fixture
def gl11():
    ctx = AlgebraContext(1, 1, 2, 2)
    return ctx, shared_table(1, 1, default_cap(2, 2))


@pytest.fixture
def gl21():
    ctx = AlgebraContext(2, 1, 2, 2)
    return ctx, shared_table(2, 1, default_cap(2, 2))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok, info = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2} {'PASS' if ok else 'FAIL'}  {title}  {info}")
