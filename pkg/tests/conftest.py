import random

import pytest

from divsudoku.core import LatinSquare


@pytest.fixture
def rng():
    return random.Random(20240917)


def cyclic(n: int) -> LatinSquare:
    return LatinSquare([[(x + y) % n for y in range(n)] for x in range(n)])


def pattern_sudoku(m: int) -> LatinSquare:
    """The classical shifted-row sudoku; a sudoku but not a division sudoku."""
    n = m * m
    return LatinSquare([[(m * (x % m) + x // m + y) % n for y in range(n)] for x in range(n)])


def klein_four() -> LatinSquare:
    return LatinSquare([[x ^ y for y in range(4)] for x in range(4)])


# acceptance criterion -> (ok, detail), filled in by test_acceptance
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(criterion: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE[criterion] = (bool(ok), detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    return ok


def _order(key: str):
    num = "".join(ch for ch in key if ch.isdigit())
    return int(num or 0), key


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for key in sorted(ACCEPTANCE, key=_order):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
