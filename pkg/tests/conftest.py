import sys
from fractions import Fraction

import pytest


def fraction_rank(rows):
    """Rank by exact Gaussian elimination over the rationals."""
    m = [[Fraction(x).limit_denominator(10**12) for x in row] for row in rows]
    rank, col = 0, 0
    n_cols = len(m[0])
    while rank < len(m) and col < n_cols:
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                factor = m[r][col] / m[rank][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


@pytest.fixture
def rank_oracle():
    return fraction_rank


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
