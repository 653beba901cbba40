"""Partial cyclic words and skeleton towers.

These are the finite descriptions everything else computes on: an alphabet of
symbols, cyclic words whose cells may be blank, and towers of such words along
a divisibility chain of periods.  A tower records a sequence built by
successive periodic refinement: the word at period ``p`` holds what is pinned
down with that period, and deeper levels extend shallower ones without ever
contradicting a filled cell.

Indexing is mathematical throughout: ``cell(i)`` reduces ``i`` modulo the
period, so negative positions are always meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .odometer import SupernaturalNumber, divides

BLANK = "_"


class TowerError(ValueError):
    """Base for structural failures of alphabets, words and towers."""


class AlphabetError(TowerError):
    pass


class DivisibilityError(TowerError):
    """Period geometry is broken: chain order, divisibility, or word length."""


class ConsistencyError(TowerError):
    """Adjacent levels disagree on a filled cell."""

    def __init__(self, shallow_period: int, deep_period: int, index: int, detail: str):
        super().__init__(
            f"levels {shallow_period}/{deep_period} disagree at position {index}: {detail}"
        )
        self.shallow_period = shallow_period
        self.deep_period = deep_period
        self.index = index


class ScaleError(TowerError):
    """Declared scale is incompatible with the declared periods."""


class ParseError(ValueError):
    """Text input rejected; carries 1-based line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "")
            loc = f" ({loc})"
        super().__init__(message + loc)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Alphabet:
    """Finite symbol set.  Symbols are nonempty, whitespace-free, distinct
    tokens; ``"_"`` is reserved as the blank marker and ``"#"`` would collide
    with comments in the text format, so both are rejected."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if len(self.symbols) < 2:
            raise AlphabetError("an alphabet needs at least two symbols")
        seen = set()
        for s in self.symbols:
            if not isinstance(s, str) or not s:
                raise AlphabetError(f"bad symbol {s!r}")
            if s == BLANK:
                raise AlphabetError("'_' is reserved for blank cells")
            if any(c.isspace() for c in s) or "#" in s:
                raise AlphabetError(f"symbol {s!r} contains whitespace or '#'")
            if s in seen:
                raise AlphabetError(f"duplicate symbol {s!r}")
            seen.add(s)

    def __contains__(self, s: object) -> bool:
        return s in self.symbols

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)


@dataclass(frozen=True)
class PartialCyclicWord:
    """Cyclic word over an alphabet with ``None`` for blank cells."""

    cells: tuple[Optional[str], ...]

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        if not self.cells:
            raise TowerError("a cyclic word needs at least one cell")

    @property
    def period(self) -> int:
        return len(self.cells)

    def cell(self, i: int) -> Optional[str]:
        return self.cells[i % len(self.cells)]

    @property
    def is_complete(self) -> bool:
        return all(c is not None for c in self.cells)

    def blank_positions(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.cells) if c is None)

    def filled_positions(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.cells) if c is not None)

    def rotated(self, k: int) -> "PartialCyclicWord":
        """The word ``w'`` with ``w'(x) = w(x + k)``."""
        p = len(self.cells)
        return PartialCyclicWord(tuple(self.cells[(x + k) % p] for x in range(p)))

    def repeated(self, times: int) -> "PartialCyclicWord":
        if times < 1:
            raise TowerError("repetition count must be positive")
        return PartialCyclicWord(self.cells * times)

    @classmethod
    def from_text(cls, text: str) -> "PartialCyclicWord":
        """One character per cell, ``_`` blank.  Single-character symbols only."""
        return cls(tuple(None if c == BLANK else c for c in text))

    def text(self) -> str:
        for c in self.cells:
            if c is not None and len(c) != 1:
                raise TowerError(f"symbol {c!r} has no single-character form")
        return "".join(BLANK if c is None else c for c in self.cells)


@dataclass(frozen=True)
class SkeletonTower:
    """Divisibility chain of periods with one partial cyclic word per level.

    ``levels`` is ordered shallow to deep; the deepest word is the
    authoritative description, shallower words are coarser views of it.
    ``declared_scale`` optionally asserts the limit scale of the structure the
    tower approximates.
    """

    alphabet: Alphabet
    levels: tuple[tuple[int, PartialCyclicWord], ...]
    declared_scale: Optional[SupernaturalNumber] = None

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple((p, w) for p, w in self.levels))
        validate_tower(self)

    @property
    def periods(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.levels)

    @property
    def deepest_period(self) -> int:
        return self.levels[-1][0]

    @property
    def deepest_word(self) -> PartialCyclicWord:
        return self.levels[-1][1]

    def word_at(self, p: int) -> Optional[PartialCyclicWord]:
        for q, w in self.levels:
            if q == p:
                return w
        return None


def validate_tower(tower: SkeletonTower) -> None:
    """Raise a ``TowerError`` subclass describing the first defect found.

    Checks, in order: period chain (positive, strictly increasing, each
    dividing the next), word lengths, symbol membership, adjacent-level
    consistency (a filled cell at period ``p`` must reappear verbatim at every
    congruent position of the next level), and declared-scale divisibility.
    """
    if not tower.levels:
        raise TowerError("a tower needs at least one level")
    prev = 0
    for p, w in tower.levels:
        if not isinstance(p, int) or p < 1:
            raise DivisibilityError(f"period {p!r} is not a positive integer")
        if prev and (p <= prev or p % prev):
            raise DivisibilityError(f"period {p} does not properly extend {prev}")
        if w.period != p:
            raise DivisibilityError(f"word of length {w.period} declared at period {p}")
        prev = p
    for p, w in tower.levels:
        for i, c in enumerate(w.cells):
            if c is not None and c not in tower.alphabet:
                raise AlphabetError(f"symbol {c!r} at level {p}, position {i}")
    for (p, shallow), (q, deep) in zip(tower.levels, tower.levels[1:]):
        for x in range(q):
            s = shallow.cell(x)
            if s is not None and deep.cells[x] != s:
                raise ConsistencyError(
                    p, q, x, f"{s!r} above, {deep.cells[x]!r} below"
                )
    if tower.declared_scale is not None:
        for p, _ in tower.levels:
            if not divides(p, tower.declared_scale):
                raise ScaleError(
                    f"declared period {p} does not divide scale {tower.declared_scale}"
                )


def rotate_tower(tower: SkeletonTower, k: int) -> SkeletonTower:
    """Shift the origin: every level word ``w`` becomes ``x -> w(x + k)``.

    Rotation is a conjugacy of the described structure, so the declared scale
    travels with it.
    """
    return SkeletonTower(
        tower.alphabet,
        tuple((p, w.rotated(k)) for p, w in tower.levels),
        tower.declared_scale,
    )


def symbol_at(tower: SkeletonTower, x: int) -> Optional[str]:
    """Authoritative cell value at position ``x``: the deepest word decides."""
    return tower.deepest_word.cell(x)
