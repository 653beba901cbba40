"""Certified periodic-part analysis of skeleton towers.

Every function here answers a question about the completed structure a tower
approximates, and tags the answer In / Out / Unknown.  The certification
discipline is asymmetric by design:

* at the deepest declared period the word is read literally — filled cells
  are the periodic part, blank cells are its holes at this stage;
* at a proper divisor ``p`` only filled cells testify: a residue is In when
  its whole class at the deepest period is filled with one symbol, Out when
  two filled cells disagree, and Unknown otherwise, because a blank left at
  this stage may still be filled by a deeper refinement.

In and conflict-Out verdicts survive refinement unchanged; only the literal
Out of a blank at the (moving) deepest level can soften to Unknown when a new
level arrives.  Nothing ever flips between In and Out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .core import (
    DivisibilityError,
    PartialCyclicWord,
    ScaleError,
    SkeletonTower,
)
from .odometer import (
    EmptyScale,
    OdometerError,
    SupernaturalNumber,
    divides,
    prime_index,
    supernatural_lcm,
)


class NonDivisorError(DivisibilityError):
    """Literal periodic-part queries require the period to divide the deepest one."""


class Status(Enum):
    IN = "In"
    OUT = "Out"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ResidueStatusSet:
    """Certified membership of each residue class mod ``modulus`` in a
    periodic part, with the certified symbol where membership holds."""

    modulus: int
    statuses: tuple[Status, ...]
    symbols: tuple[Optional[str], ...]

    def status_at(self, x: int) -> Status:
        return self.statuses[x % self.modulus]

    def symbol(self, x: int) -> Optional[str]:
        return self.symbols[x % self.modulus]

    def residues(self, status: Status) -> tuple[int, ...]:
        return tuple(r for r, s in enumerate(self.statuses) if s is status)


def periodic_part(tower: SkeletonTower, p: int) -> ResidueStatusSet:
    """Certified ``p``-periodic part, for ``p`` dividing the deepest period.

    At ``p`` equal to the deepest period the word is literal: filled is In,
    blank is Out.  At a proper divisor, a residue is In with symbol ``a`` when
    every deepest-level cell congruent to it is filled with ``a``, Out when
    two filled cells disagree, and Unknown otherwise.
    """
    deep = tower.deepest_period
    if p < 1 or deep % p:
        raise NonDivisorError(f"{p} does not divide the deepest period {deep}")
    w = tower.deepest_word
    statuses: list[Status] = []
    symbols: list[Optional[str]] = []
    if p == deep:
        for c in w.cells:
            statuses.append(Status.OUT if c is None else Status.IN)
            symbols.append(c)
    else:
        for r in range(p):
            cells = [w.cells[x] for x in range(r, deep, p)]
            filled = {c for c in cells if c is not None}
            if len(filled) > 1:
                statuses.append(Status.OUT)
                symbols.append(None)
            elif filled and None not in cells:
                statuses.append(Status.IN)
                symbols.append(next(iter(filled)))
            else:
                statuses.append(Status.UNKNOWN)
                symbols.append(None)
    return ResidueStatusSet(p, tuple(statuses), tuple(symbols))


def period_status(tower: SkeletonTower, q: int) -> ResidueStatusSet:
    """Certified status of the ``q``-periodic part for arbitrary ``q >= 1``.

    The positions congruent to ``x`` mod ``q`` meet exactly the residue
    classes of ``x`` modulo ``g = gcd(q, deepest)``, and they meet each one
    unboundedly often, so certification transfers both ways: the returned set
    (modulus ``g``) answers for the ``q``-periodic part at every position.
    """
    if q < 1:
        raise NonDivisorError(f"period {q} is not positive")
    return periodic_part(tower, math.gcd(q, tower.deepest_period))


def skeleton_word(tower: SkeletonTower, p: int) -> tuple[PartialCyclicWord, tuple[bool, ...]]:
    """The certified ``p``-skeleton as a word (In cells filled) plus a mask
    marking which blanks are Unknown rather than certified holes."""
    rss = periodic_part(tower, p)
    cells = tuple(
        rss.symbols[r] if rss.statuses[r] is Status.IN else None for r in range(p)
    )
    mask = tuple(s is Status.UNKNOWN for s in rss.statuses)
    return PartialCyclicWord(cells), mask


@dataclass(frozen=True)
class BlockSpan:
    """Maximal certified-In arc between two adjacent holes.

    ``length`` is None when the arc contains Unknown residues: its extent is
    then only an upper bound, so no length is certified.
    """

    start: int
    length: Optional[int]
    modulus: int

    @property
    def wraps(self) -> bool:
        return self.length is not None and self.start + self.length > self.modulus


@dataclass(frozen=True)
class FilledBlocks:
    period: int
    fully_periodic: bool
    spans: tuple[BlockSpan, ...]
    holes: tuple[int, ...]
    unknown_residues: tuple[int, ...]


def filled_blocks(tower: SkeletonTower, p: int) -> FilledBlocks:
    """Arcs of certified membership between certified holes at period ``p``.

    With no certified hole the structure is fully periodic as far as this
    stage can tell (``unknown_residues`` says how far that is).  Otherwise
    each pair of cyclically adjacent holes bounds one arc; the arc's length is
    certified only when every residue in it is In.
    """
    rss = periodic_part(tower, p)
    holes = rss.residues(Status.OUT)
    unknown = rss.residues(Status.UNKNOWN)
    if not holes:
        return FilledBlocks(p, True, (), (), unknown)
    spans: list[BlockSpan] = []
    for i, h in enumerate(holes):
        nxt = holes[(i + 1) % len(holes)]
        arc_len = (nxt - h - 1) % p if len(holes) > 1 else p - 1
        if arc_len == 0:
            continue
        start = (h + 1) % p
        arc = [(start + j) % p for j in range(arc_len)]
        certified = all(rss.statuses[r] is Status.IN for r in arc)
        spans.append(BlockSpan(start, arc_len if certified else None, p))
    return FilledBlocks(p, False, tuple(spans), holes, unknown)


class EssentialOutcome(Enum):
    ESSENTIAL = "EssentialCertified"
    NOT_ESSENTIAL = "NotEssentialCertified"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class EssentialStatus:
    period: int
    outcome: EssentialOutcome
    reason: str
    undetermined: tuple[int, ...] = ()


def essential_period_status(tower: SkeletonTower, p: int) -> EssentialStatus:
    """Certify whether ``p`` is an essential period: nonempty periodic part
    differing from the ``q``-periodic part for every ``q < p``.

    Separation from ``q`` needs a position certified In on one side and Out
    on the other; equality needs every position determined on both sides with
    matching membership.  Comparisons run over one period of the two status
    functions, whose moduli both divide the deepest period.
    """
    if p < 1:
        raise NonDivisorError(f"period {p} is not positive")
    cache: dict[int, ResidueStatusSet] = {}
    deep = tower.deepest_period

    def rss_for(m: int) -> ResidueStatusSet:
        g = math.gcd(m, deep)
        if g not in cache:
            cache[g] = periodic_part(tower, g)
        return cache[g]

    rp = rss_for(p)
    if all(s is Status.OUT for s in rp.statuses):
        return EssentialStatus(p, EssentialOutcome.NOT_ESSENTIAL, "periodic part certified empty")
    has_in = any(s is Status.IN for s in rp.statuses)
    undetermined: list[int] = []
    for q in range(1, p):
        rq = rss_for(q)
        window = math.lcm(rp.modulus, rq.modulus)
        separated = False
        determined_equal = True
        for x in range(window):
            a = rp.status_at(x)
            b = rq.status_at(x)
            if a is Status.UNKNOWN or b is Status.UNKNOWN:
                determined_equal = False
            elif a is not b:
                separated = True
                break
        if separated:
            continue
        if determined_equal:
            return EssentialStatus(
                p, EssentialOutcome.NOT_ESSENTIAL, f"certified equal to the {q}-periodic part"
            )
        undetermined.append(q)
    if undetermined:
        return EssentialStatus(
            p,
            EssentialOutcome.UNKNOWN,
            "separation undecided against " + ", ".join(map(str, undetermined)),
            tuple(undetermined),
        )
    if not has_in:
        return EssentialStatus(
            p, EssentialOutcome.UNKNOWN, "separated everywhere but nonemptiness uncertified"
        )
    return EssentialStatus(p, EssentialOutcome.ESSENTIAL, "separated from every shorter period")


@dataclass(frozen=True)
class ScaleTruncation:
    certified: SupernaturalNumber
    pending: tuple[int, ...]
    essentials: tuple[int, ...]


def scale_truncation(tower: SkeletonTower) -> ScaleTruncation:
    """lcm of the certified essential periods among divisors of the deepest
    period, plus the divisors whose essential status is still open.

    Only divisors of the deepest period can be certified essential at this
    stage (anything else is indistinguishable from its gcd with it), so the
    scan is complete.  A certified essential period that fails to divide a
    declared scale is a hard contradiction.
    """
    deep = tower.deepest_period
    essentials: list[int] = []
    pending: list[int] = []
    for p in (d for d in range(1, deep + 1) if deep % d == 0):
        st = essential_period_status(tower, p)
        if st.outcome is EssentialOutcome.ESSENTIAL:
            essentials.append(p)
        elif st.outcome is EssentialOutcome.UNKNOWN:
            pending.append(p)
    certified = supernatural_lcm(*(SupernaturalNumber.from_int(p) for p in essentials))
    if tower.declared_scale is not None:
        for p in essentials:
            if not divides(p, tower.declared_scale):
                raise ScaleError(
                    f"certified essential period {p} does not divide declared scale "
                    f"{tower.declared_scale}"
                )
    return ScaleTruncation(certified, tuple(pending), tuple(essentials))


def natural_factorization(u: SupernaturalNumber, count: int) -> tuple[int, ...]:
    """Stage sequence of a scale: the distinct values of
    ``prod_{i<=t+1} p_i ^ min(k_i, t+1)`` over the first ``t+1`` primes, with
    ones dropped.  Finite scales stabilize and the sequence ends there; for
    the rest exactly ``count`` terms are produced.
    """
    if count < 0:
        raise OdometerError("count must be nonnegative")
    if not u.factors:
        raise EmptyScale("the trivial scale has no stage factorization")
    target = u.as_int() if u.is_finite else None
    # only u's own primes contribute; the ambient sequence enters via indices
    entries = [(prime_index(p), p, k) for p, k in u.factors]
    out: list[int] = []
    t = 0
    while len(out) < count:
        value = 1
        for index, p, k in entries:
            if index <= t + 1:
                value *= p ** int(min(k, t + 1))
        if value != 1 and (not out or out[-1] != value):
            out.append(value)
        if target is not None and value == target:
            break
        t += 1
    return tuple(out)


@dataclass(frozen=True)
class GrowthRow:
    period: int
    min_block_length: Optional[int]
    min_hole_gap: Optional[int]
    unknown_count: int
    fully_periodic: bool


@dataclass(frozen=True)
class GrowthProfile:
    rows: tuple[GrowthRow, ...]
    trend: str


def growth_profile(tower: SkeletonTower) -> GrowthProfile:
    """Per-level census of certified block structure.

    The trend compares the certified minimum block lengths level by level:
    "increasing" (strictly), "stable" (all equal), or "non-monotone"; levels
    without a certified block are skipped in the comparison.
    """
    rows: list[GrowthRow] = []
    for p, _ in tower.levels:
        fb = filled_blocks(tower, p)
        certified = [s.length for s in fb.spans if s.length is not None]
        unknown = set(fb.unknown_residues)
        gaps: list[int] = []
        for i, h in enumerate(fb.holes):
            nxt = fb.holes[(i + 1) % len(fb.holes)]
            gap = (nxt - h) % p or p
            if all((h + 1 + j) % p not in unknown for j in range(gap - 1)):
                gaps.append(gap)
        rows.append(
            GrowthRow(
                period=p,
                min_block_length=min(certified) if certified else None,
                min_hole_gap=min(gaps) if gaps else None,
                unknown_count=len(fb.unknown_residues),
                fully_periodic=fb.fully_periodic,
            )
        )
    vals = [r.min_block_length for r in rows if r.min_block_length is not None]
    if len(vals) < 2 or all(b > a for a, b in zip(vals, vals[1:])):
        trend = "increasing"
    elif all(b == a for a, b in zip(vals, vals[1:])):
        trend = "stable"
    else:
        trend = "non-monotone"
    return GrowthProfile(tuple(rows), trend)
