"""Reference tower built by the period-doubling filling procedure.

Stage 0 is the 5-periodic seed ``0 _ _ _ 0``.  Each later stage doubles the
previous word and resolves part of the blanks:

* odd stages fill the middle cell of the leftmost blank triple with ``1``;
* even stages fill the first two single blanks (by start position) with
  ``0`` and the remaining singles with ``1``, then write ``1 0 1`` into the
  rightmost blank triple, leaving the leftmost triple untouched.

Every stage keeps one unresolved triple, so the limit word is Toeplitz but
never eventually periodic; the declared scale is 2^inf * 5.
"""

from __future__ import annotations

from typing import Optional

from .core import Alphabet, PartialCyclicWord, SkeletonTower
from .odometer import SupernaturalNumber

ALPHABET = Alphabet(("0", "1"))
SCALE = SupernaturalNumber.parse("2^inf * 5")

_SEED = ("0", None, None, None, "0")


def _blank_runs(cells: list[Optional[str]]) -> list[tuple[int, int]]:
    # (start, length); the seed pins cells 0 and -1, so runs never wrap
    runs = []
    i = 0
    while i < len(cells):
        if cells[i] is None:
            j = i
            while j < len(cells) and cells[j] is None:
                j += 1
            runs.append((i, j - i))
            i = j
        else:
            i += 1
    return runs


def _next_stage(cells: tuple[Optional[str], ...], stage: int) -> tuple[Optional[str], ...]:
    doubled = list(cells) * 2
    runs = _blank_runs(doubled)
    if stage % 2 == 1:
        start, _ = next((s, n) for s, n in runs if n == 3)
        doubled[start + 1] = "1"
    else:
        singles = [s for s, n in runs if n == 1]
        for s in singles[:2]:
            doubled[s] = "0"
        for s in singles[2:]:
            doubled[s] = "1"
        start, _ = [(s, n) for s, n in runs if n == 3][-1]
        doubled[start : start + 3] = ["1", "0", "1"]
    return tuple(doubled)


def reference_example(stages: int) -> SkeletonTower:
    """Tower whose levels are the stage words 0..stages of the procedure."""
    if stages < 0:
        raise ValueError("stages must be nonnegative")
    cells = _SEED
    levels = [(5, PartialCyclicWord(cells))]
    for j in range(1, stages + 1):
        cells = _next_stage(cells, j)
        levels.append((5 * 2**j, PartialCyclicWord(cells)))
    return SkeletonTower(ALPHABET, tuple(levels), SCALE)
