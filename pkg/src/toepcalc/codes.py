"""Sliding block codes and positionwise alphabet permutations on towers.

A block code of length ``m`` maps (2m+1)-windows of symbols to symbols and
acts on the deepest level of a tower; an output cell is filled only when its
whole input window is.  Certification at shallower periods is then recomputed
from the output, which is exactly the sound margin rule: a residue stays
certified when its entire window was.

Positionwise permutations are the partial-data-compatible slice of the full
block-permutation group: one alphabet bijection per residue class mod ``p``.
Applying one is a conjugacy of the completed structures, so it preserves the
declared scale; a block code in general is only a factor map and drops it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .core import Alphabet, ParseError, PartialCyclicWord, SkeletonTower


class CodeError(ValueError):
    """Structural failure of a code or permutation family."""


class AlphabetMismatch(CodeError):
    pass


class PeriodMismatch(CodeError):
    pass


Window = tuple[str, ...]


@dataclass(frozen=True)
class BlockCode:
    """Total map from (2·length+1)-windows over the alphabet to symbols."""

    alphabet: Alphabet
    length: int
    table: tuple[tuple[Window, str], ...]

    def __post_init__(self):
        if not isinstance(self.length, int) or self.length < 0:
            raise CodeError(f"code length must be a non-negative integer, got {self.length!r}")
        entries = self.table.items() if isinstance(self.table, Mapping) else self.table
        order = {s: i for i, s in enumerate(self.alphabet.symbols)}
        width = 2 * self.length + 1
        mapping: dict[Window, str] = {}
        for window, out in entries:
            window = tuple(window)
            if len(window) != width:
                raise CodeError(f"window {window!r} does not have width {width}")
            for s in (*window, out):
                if s not in order:
                    raise CodeError(f"symbol {s!r} is not in the alphabet")
            if window in mapping:
                raise CodeError(f"window {window!r} listed twice")
            mapping[window] = out
        if len(mapping) != len(self.alphabet) ** width:
            raise CodeError(
                f"table has {len(mapping)} of {len(self.alphabet) ** width} required windows"
            )
        canonical = tuple(
            sorted(mapping.items(), key=lambda kv: tuple(order[s] for s in kv[0]))
        )
        object.__setattr__(self, "table", canonical)
        object.__setattr__(self, "_lookup", mapping)

    def apply(self, window: Sequence[str]) -> str:
        return self._lookup[tuple(window)]  # type: ignore[attr-defined]


def parse_block_code(text: str, alphabet: Optional[Alphabet] = None) -> BlockCode:
    """Parse the table format: header ``len = m``, then ``a b c -> d`` lines.

    Windows may come in any order; every window over the alphabet must appear
    exactly once.  Without an explicit alphabet the symbol set is inferred
    from the tokens present.  Blank lines and ``#`` comments are skipped.
    """
    length: Optional[int] = None
    rows: list[tuple[int, Window, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if length is None:
            left, eq, right = line.partition("=")
            if eq != "=" or left.strip() != "len":
                raise ParseError("expected header 'len = m'", lineno, 1)
            try:
                length = int(right.strip())
            except ValueError:
                raise ParseError(f"bad code length {right.strip()!r}", lineno) from None
            if length < 0:
                raise ParseError("code length must be non-negative", lineno)
            continue
        tokens = line.split()
        if "->" not in tokens:
            raise ParseError("expected 'window -> symbol'", lineno)
        arrow = tokens.index("->")
        window, rhs = tokens[:arrow], tokens[arrow + 1 :]
        if len(window) != 2 * length + 1 or len(rhs) != 1:
            raise ParseError(
                f"expected {2 * length + 1} window symbols and one output", lineno
            )
        rows.append((lineno, tuple(window), rhs[0]))
    if length is None:
        raise ParseError("missing 'len = m' header")
    if alphabet is None:
        seen: set[str] = set()
        for _, window, out in rows:
            seen.update(window)
            seen.add(out)
        try:
            alphabet = Alphabet(tuple(sorted(seen)))
        except ValueError as exc:
            raise ParseError(f"cannot infer an alphabet: {exc}") from None
    table: dict[Window, str] = {}
    for lineno, window, out in rows:
        for s in (*window, out):
            if s not in alphabet:
                raise ParseError(f"symbol {s!r} is not in the alphabet", lineno)
        if window in table:
            raise ParseError(f"window {' '.join(window)!r} listed twice", lineno)
        table[window] = out
    try:
        return BlockCode(alphabet, length, tuple(table.items()))
    except CodeError as exc:
        raise ParseError(str(exc)) from None


def serialize_block_code(code: BlockCode) -> str:
    lines = [f"len = {code.length}"]
    for window, out in code.table:
        lines.append(f"{' '.join(window)} -> {out}")
    return "\n".join(lines) + "\n"


def apply_block_code(tower: SkeletonTower, code: BlockCode) -> SkeletonTower:
    """Slide the code over the deepest level; recertify everything above.

    Output cell ``k`` is filled with the coded value exactly when the whole
    window ``k-m .. k+m`` is filled; shallower levels become the certified
    skeletons of the result.  The declared scale does not survive: a factor
    map certifies nothing about the limit scale.
    """
    if code.alphabet != tower.alphabet:
        raise AlphabetMismatch("code and tower alphabets differ")
    deep = tower.deepest_period
    w = tower.deepest_word
    m = code.length
    out_cells: list[Optional[str]] = []
    for k in range(deep):
        window = [w.cell(k + d) for d in range(-m, m + 1)]
        if any(c is None for c in window):
            out_cells.append(None)
        else:
            out_cells.append(code.apply(window))
    out_word = PartialCyclicWord(tuple(out_cells))
    levels: list[tuple[int, PartialCyclicWord]] = []
    for p, _ in tower.levels[:-1]:
        cells: list[Optional[str]] = []
        for r in range(p):
            values = {out_cells[x] for x in range(r, deep, p)}
            cells.append(values.pop() if len(values) == 1 and None not in values else None)
        levels.append((p, PartialCyclicWord(tuple(cells))))
    levels.append((deep, out_word))
    return SkeletonTower(tower.alphabet, tuple(levels), None)


@dataclass(frozen=True)
class PositionwisePermutation:
    """One alphabet bijection per residue class mod ``period``; each entry
    lists the images of the alphabet's symbols in alphabet order."""

    alphabet: Alphabet
    period: int
    perms: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "perms", tuple(tuple(p) for p in self.perms))
        if not isinstance(self.period, int) or self.period < 1:
            raise CodeError(f"block period must be positive, got {self.period!r}")
        if len(self.perms) != self.period:
            raise CodeError(f"{self.period} permutations required, got {len(self.perms)}")
        for i, images in enumerate(self.perms):
            if sorted(images) != sorted(self.alphabet.symbols):
                raise CodeError(f"entry {i} is not a bijection of the alphabet")

    @classmethod
    def identity(cls, alphabet: Alphabet, period: int) -> "PositionwisePermutation":
        return cls(alphabet, period, tuple(alphabet.symbols for _ in range(period)))

    def image(self, x: int, symbol: str) -> str:
        return self.perms[x % self.period][self.alphabet.symbols.index(symbol)]

    def inverse(self) -> "PositionwisePermutation":
        inv = []
        for images in self.perms:
            back = {img: s for s, img in zip(self.alphabet.symbols, images)}
            inv.append(tuple(back[s] for s in self.alphabet.symbols))
        return PositionwisePermutation(self.alphabet, self.period, tuple(inv))


def apply_positionwise_permutation(
    tower: SkeletonTower, phi: PositionwisePermutation
) -> SkeletonTower:
    """Relabel cell contents by the permutation attached to ``x mod p``.

    A cell of a level with period ``q`` stands for every absolute position of
    its residue class; those positions meet the classes ``r + gcd(q, p)·Z``
    mod ``p``, so the cell keeps a (relabelled) value only when all the
    permutations involved agree on it — with ``p | q`` that is the single
    obvious one.  Blanks stay blank.  This is a conjugacy of the completed
    structures, so the declared scale is preserved.
    """
    if phi.alphabet != tower.alphabet:
        raise AlphabetMismatch("permutation and tower alphabets differ")
    p = phi.period
    if tower.deepest_period % p:
        raise PeriodMismatch(f"{p} does not divide the deepest period")
    for q, _ in tower.levels:
        if q >= p and q % p:
            raise PeriodMismatch(f"{p} does not divide the declared period {q}")
    levels: list[tuple[int, PartialCyclicWord]] = []
    for q, w in tower.levels:
        g = math.gcd(q, p)
        cells: list[Optional[str]] = []
        for r in range(q):
            s = w.cells[r]
            if s is None:
                cells.append(None)
                continue
            images = {phi.image(r + j * g, s) for j in range(p // g)}
            cells.append(images.pop() if len(images) == 1 else None)
        levels.append((q, PartialCyclicWord(tuple(cells))))
    return SkeletonTower(tower.alphabet, tuple(levels), tower.declared_scale)
