"""Embedded corpus: the 186 appendix squares, the named squares from the text,
and the published tables used as verification targets."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from divsudoku.core import LatinSquare, Permutation, apply_isotopism, Isotopism
from divsudoku.formats import parse_squares


def _read(name: str) -> str:
    return resources.files("divsudoku").joinpath("data", name).read_text()


@lru_cache(maxsize=None)
def appendix() -> dict[int, LatinSquare]:
    """``{i: DS(9,i)}`` for i = 1..186."""
    out = {}
    for label, L, _ in parse_squares(_read("appendix.txt")):
        i = int(label.split(",")[1].rstrip(")"))
        out[i] = L
    return out


def ds(i: int) -> LatinSquare:
    return appendix()[i]


@lru_cache(maxsize=None)
def _named_raw():
    return {label: (L, meta) for label, L, meta in parse_squares(_read("named.txt"))}


def named(label: str) -> LatinSquare:
    """A square displayed in the text, with relabeled displays undone.

    Displays with a ``columns`` comment list their column labels; the
    returned square is indexed by the labels, not by display position.
    """
    L, meta = _named_raw()[label]
    if "columns" in meta:
        labels = [int(t) - 1 for t in meta["columns"].split()]
        iso = Isotopism(Permutation.identity(L.n), Permutation(labels), Permutation.identity(L.n))
        L = apply_isotopism(L, iso)
    return L


def named_labels() -> list[str]:
    return list(_named_raw())


@lru_cache(maxsize=None)
def tables() -> dict:
    return json.loads(_read("tables.json"))


def main_class_of() -> dict[int, int]:
    """Appendix index -> position of its main ds-class in the published table."""
    out = {}
    for k, cls in enumerate(tables()["main_classes"]):
        for i in cls:
            out[i] = k
    return out
