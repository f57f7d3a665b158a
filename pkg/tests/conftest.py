from __future__ import annotations

import pytest

from crossnum.groups import parse_group
from crossnum.sequences import Sequence


def seq(group, terms) -> Sequence:
    """Build a sequence from ``{coords: multiplicity}`` or a list of coords."""
    G = parse_group(group) if isinstance(group, str) else group
    if isinstance(terms, dict):
        coords = [c for c, m in terms.items() for _ in range(m)]
    else:
        coords = list(terms)
    return Sequence.from_coords(G, [c if isinstance(c, tuple) else (c,) for c in coords])


@pytest.fixture
def make_seq():
    return seq


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda s: int(s.split("criterion ")[1].split(" ")[0])):
            terminalreporter.write_line(line)
