"""Shared builders for the test suite."""

from itertools import product

from toepcalc import Alphabet, PartialCyclicWord, SkeletonTower, SupernaturalNumber

BINARY = Alphabet(("0", "1"))


def tower(*words: str, scale: str | None = None, alphabet: Alphabet = BINARY) -> SkeletonTower:
    """Levels from literal strings ('_' = blank); periods are the lengths."""
    levels = tuple((len(w), PartialCyclicWord.from_text(w)) for w in words)
    declared = SupernaturalNumber.parse(scale) if scale else None
    return SkeletonTower(alphabet, levels, declared)


def completions(word: PartialCyclicWord, alphabet: Alphabet = BINARY):
    """Every total filling of the word's blanks, as cell tuples."""
    blanks = sorted(word.blank_positions())
    for fill in product(alphabet.symbols, repeat=len(blanks)):
        cells = list(word.cells)
        for i, s in zip(blanks, fill):
            cells[i] = s
        yield tuple(cells)


def per_residues(cells: tuple[str, ...], p: int) -> frozenset[int]:
    """Exact Per_p residues of a total periodic word given by one period."""
    n = len(cells)
    full = [cells[i % n] for i in range(n * p)]
    span = len(full)
    out = set()
    for r in range(p):
        if len({full[i] for i in range(r, span, p)}) == 1:
            out.add(r)
    return frozenset(out)
