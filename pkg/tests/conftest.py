"""Shared test fixtures and the acceptance summary hook.

Unit tests draw random instances through CounterStream so every run sees the
same data.  Acceptance tests register one line per criterion here; the
terminal-summary hook prints them after the run, outside pytest's capture.
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from symgrowth.groups import (
    CyclicGroup,
    DihedralGroup,
    HeisenbergGroup,
    SymmetricGroup,
)
from symgrowth.gset import GSet
from symgrowth.prng import CounterStream

try:
    from hypothesis import settings

    settings.register_profile("repo", deadline=None, max_examples=60, derandomize=True)
    settings.load_profile("repo")
except ImportError:  # pragma: no cover
    pass


# (criterion, "PASS"/"FAIL", detail) triples appended by tests/test_acceptance.py.
ACCEPTANCE_LINES: list[tuple[str, str, str]] = []


def record_acceptance(name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append((name, "PASS" if ok else "FAIL", detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"[{status}] {name}: {detail}")


def small_group_pool():
    """Mixed abelian/non-abelian groups, all orders <= 60."""
    return [
        CyclicGroup(12),
        CyclicGroup(20),
        CyclicGroup(31),
        DihedralGroup(5),
        DihedralGroup(8),
        HeisenbergGroup(3),
        SymmetricGroup(4),
    ]


def draw_subset(group, size, stream: CounterStream) -> GSet:
    """Size distinct elements of group, drawn by index."""
    if size > group.order:
        raise ValueError("subset larger than group")
    seen = {}
    while len(seen) < size:
        seen.setdefault(group.element_at(stream.below(group.order)), None)
    return GSet(group, list(seen))


def draw_fraction(stream: CounterStream, max_den: int = 12) -> Fraction:
    """A fraction in (0, 1] with a small denominator."""
    den = 1 + stream.below(max_den)
    num = 1 + stream.below(den)
    return Fraction(num, den)


@pytest.fixture
def stream():
    return CounterStream(0xACCE55)
