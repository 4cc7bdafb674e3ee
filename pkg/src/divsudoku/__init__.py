"""Division sudokus: latin squares all of whose conjugates are sudokus."""

from divsudoku.core import (
    Isotopism,
    LatinSquare,
    Permutation,
    SudokuPartition,
    TriPartition,
    apply_isotopism,
    conjugate,
    count_associative_triples,
    is_division_sudoku,
    is_division_sudoku_shred,
    is_sudoku,
    make_idempotent,
    shreds,
    standard_partition,
)

__version__ = "0.1.0"
