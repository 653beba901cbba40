"""Brute-force ground truth on fully periodic words.

Everything here is exact and exhaustive: residue sets by direct comparison,
conjugacy by enumerating sliding block code tables.  Intended for small
instances (tests cap the radius at 2 and the period at 16); the library
itself imposes no limits.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd, lcm
from typing import Optional

from .codes import AlphabetMismatch, BlockCode, Window
from .core import Alphabet, AlphabetError, PartialCyclicWord
from .skeleton import NonDivisorError


@dataclass(frozen=True)
class PeriodicWord:
    alphabet: Alphabet
    cells: tuple[str, ...]

    def __post_init__(self):
        if not self.cells:
            raise ValueError("periodic word must be nonempty")
        for c in self.cells:
            if c not in self.alphabet:
                raise AlphabetError(f"symbol {c!r} not in alphabet")

    @classmethod
    def from_text(cls, alphabet: Alphabet, text: str) -> "PeriodicWord":
        return cls(alphabet, tuple(text))

    @property
    def period(self) -> int:
        return len(self.cells)

    def cell(self, i: int) -> str:
        return self.cells[i % len(self.cells)]


def _per_residues(word: PeriodicWord, modulus: int) -> frozenset[int]:
    n = word.period
    g = gcd(modulus, n)
    return frozenset(
        r
        for r in range(modulus)
        if len({word.cells[i] for i in range(r % g, n, g)}) == 1
    )


@dataclass(frozen=True)
class ExactAnalysis:
    per_residues: frozenset[int]
    skeleton: PartialCyclicWord
    essential: bool


def exact_periodic_analysis(word: PeriodicWord, p: int) -> ExactAnalysis:
    """Residues of the exact p-periodic part, the exact p-skeleton, and
    whether p is an essential period (nonempty part differing, as a set of
    integers, from every Per_q with q < p)."""
    n = word.period
    if p < 1 or n % p:
        raise NonDivisorError(f"{p} does not divide the period {n}")
    per = _per_residues(word, p)
    skeleton = PartialCyclicWord(
        tuple(word.cells[r] if r in per else None for r in range(p))
    )
    essential = bool(per)
    if essential:
        for q in range(1, p):
            g = gcd(q, n)
            per_g = _per_residues(word, g)
            window = lcm(g, p)
            if all((x % g in per_g) == (x % p in per) for x in range(window)):
                essential = False
                break
    return ExactAnalysis(per, skeleton, essential)


@dataclass(frozen=True)
class SearchWitness:
    forward: BlockCode
    backward: BlockCode
    shift: int


def _occurring_windows(word: PeriodicWord, m: int) -> list[Window]:
    n = word.period
    return sorted({tuple(word.cell(x + d) for d in range(-m, m + 1)) for x in range(n)})


def _apply_table(word: PeriodicWord, m: int, table: dict[Window, str]) -> tuple[str, ...]:
    n = word.period
    return tuple(
        table[tuple(word.cell(x + d) for d in range(-m, m + 1))] for x in range(n)
    )


def _full_code(alphabet: Alphabet, m: int, table: dict[Window, str]) -> BlockCode:
    filler = alphabet.symbols[0]
    entries = {
        w: table.get(w, filler) for w in product(alphabet.symbols, repeat=2 * m + 1)
    }
    return BlockCode(alphabet, m, entries)


def exact_conjugacy_search(
    v: PeriodicWord, w: PeriodicWord, max_radius: int
) -> Optional[SearchWitness]:
    """Exhaustive search for a conjugacy between the orbits of v and w.

    Enumeration order is fixed: radius ascending, forward table in
    lexicographic order over the sorted occurring windows of v (values in
    alphabet order), shift ascending, then the backward table the same way
    over the image word.  The first tuple whose forward image is the shifted
    w and whose backward image restores v exactly is returned, with both
    tables completed to total codes (unused windows map to the first symbol).
    Returns None when every radius up to max_radius is exhausted.
    """
    if v.alphabet != w.alphabet:
        raise AlphabetMismatch("words use different alphabets")
    symbols = v.alphabet.symbols
    span = lcm(v.period, w.period)
    w_long = tuple(w.cell(x) for x in range(span))
    for m in range(max_radius + 1):
        windows_v = _occurring_windows(v, m)
        for values in product(symbols, repeat=len(windows_v)):
            table = dict(zip(windows_v, values))
            y_cells = _apply_table(v, m, table)
            y_long = tuple(y_cells[x % v.period] for x in range(span))
            for shift in range(span):
                if any(y_long[x] != w_long[(x + shift) % span] for x in range(span)):
                    continue
                y = PeriodicWord(v.alphabet, y_cells)
                back = _inverse_search(y, v, max_radius)
                if back is not None:
                    return SearchWitness(
                        _full_code(v.alphabet, m, table), back, shift
                    )
                break  # other shifts give the same orbit; inverse cannot differ
    return None


def _inverse_search(y: PeriodicWord, v: PeriodicWord, max_radius: int) -> Optional[BlockCode]:
    for m in range(max_radius + 1):
        windows = _occurring_windows(y, m)
        for values in product(y.alphabet.symbols, repeat=len(windows)):
            table = dict(zip(windows, values))
            if _apply_table(y, m, table) == v.cells:
                return _full_code(y.alphabet, m, table)
    return None
