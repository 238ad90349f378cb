"""Constructive linearization: deterministic insertion, block runs, splits.

All block constructions share one discipline: pick the least-enumerated
element not yet absorbed, ask an oracle for the complete finite set it pins
down, and emit that set (minus everything already emitted) as one block whose
internal order comes from the deterministic insertion rule.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    ClassifierInconsistent,
    FiniteDomainEnd,
    FormatError,
    OracleMissing,
    TooLarge,
)
from .kinds import BlockSide, FinSide, Kind
from .poset import FinitePoset, LinearOrder
from .streams import StreamPoset, oracle_answer, require_oracle

__all__ = [
    "Block",
    "BlockSeq",
    "szpilrajn_extend",
    "omega_linearize",
    "omega_star_linearize",
    "zeta_linearize",
    "split_linearize",
    "linearize",
]

# Liveness guard: stages examined while hunting one pivot.  Honest streams
# always have a pivot within the elements they have not emitted yet.
MAX_PIVOT_SCAN = 1_000_000


@dataclass(frozen=True)
class Block:
    """One emitted block: its pivot, its sorted members, its placement side."""

    pivot: int
    members: tuple[int, ...]
    side: BlockSide


@dataclass(frozen=True)
class BlockSeq:
    blocks: tuple[Block, ...]
    kind: Kind

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def block_of(self, x: int) -> int:
        for i, b in enumerate(self.blocks):
            if x in b.members:
                return i
        raise KeyError(x)

    def placement_le(self, x: int, y: int) -> bool:
        """Debug view of the derived block placement order.

        x is placed at-or-below y when they share a block, or when the later
        of the two blocks points away from the earlier one (RIGHT blocks go
        above everything older, LEFT blocks below).
        """
        i, j = self.block_of(x), self.block_of(y)
        if i == j:
            return True  # within a block only <=_P decides; caller refines
        if i < j:
            return self.blocks[j].side is BlockSide.RIGHT
        return self.blocks[i].side is BlockSide.LEFT


def szpilrajn_extend(poset: FinitePoset) -> LinearOrder:
    """Deterministic linear extension by insertion.

    Elements are processed in the poset's enumeration order; each is placed
    immediately after its rightmost already-placed predecessor, else
    immediately before its leftmost already-placed successor, else at the
    right end.  Placed predecessors always precede placed successors, so the
    rule keeps the list an extension at every step.
    """
    placed: list[int] = []
    for x in poset.elements:
        last_pred = None
        first_succ = None
        for i, y in enumerate(placed):
            if poset.le(y, x):
                last_pred = i
            if first_succ is None and poset.le(x, y):
                first_succ = i
        if last_pred is not None:
            placed.insert(last_pred + 1, x)
        elif first_succ is not None:
            placed.insert(first_succ, x)
        else:
            placed.append(x)
    return LinearOrder(tuple(placed))


def _induced(stream: StreamPoset, members: Sequence[int]) -> FinitePoset:
    pairs = [(x, y) for x in members for y in members if stream.leq(x, y)]
    return FinitePoset.from_closed(tuple(members), pairs)


def _segment(stream: StreamPoset, members: Sequence[int]) -> list[int]:
    if len(members) == 1:
        return [members[0]]
    return list(szpilrajn_extend(_induced(stream, members)))


class _PivotScan:
    """Walks the enumeration, yielding the least-enumerated unabsorbed id.

    With complete oracles, "not yet absorbed" is exactly the pivot
    eligibility condition of every block construction here, because the
    absorbed set is the union of the oracle-defined cones of all earlier
    pivots.
    """

    def __init__(self, stream: StreamPoset):
        self.stream = stream
        self.stage = 0

    def next_pivot(self, absorbed: set[int]) -> int | None:
        scanned = 0
        while True:
            try:
                x = self.stream.element_at(self.stage)
            except FiniteDomainEnd:
                return None
            self.stage += 1
            if x not in absorbed:
                return x
            scanned += 1
            if scanned > MAX_PIVOT_SCAN:
                raise TooLarge(
                    f"no new pivot within {MAX_PIVOT_SCAN} stages; stream may not satisfy its kind promise"
                )


def _budget_open(
    blocks: list, emitted: int, blocks_wanted: int | None, elements_wanted: int | None
) -> bool:
    # A block budget wins over an element budget; no budget means run until
    # the stream is exhausted.
    if blocks_wanted is not None:
        return len(blocks) < blocks_wanted
    if elements_wanted is not None:
        return emitted < elements_wanted
    return True


def _cone_run(
    stream: StreamPoset,
    *,
    dual: bool,
    blocks_wanted: int | None,
    elements_wanted: int | None,
) -> tuple[BlockSeq, LinearOrder]:
    """Shared body of the one-sided block constructions.

    ``dual=False`` consumes the predecessors oracle and appends blocks;
    ``dual=True`` consumes successors and prepends.
    """
    oracle_name = "successors" if dual else "predecessors"
    fn = require_oracle(stream, oracle_name)
    scan = _PivotScan(stream)
    absorbed: set[int] = set()
    blocks: list[Block] = []
    segs: list[list[int]] = []
    emitted = 0
    while _budget_open(blocks, emitted, blocks_wanted, elements_wanted):
        pivot = scan.next_pivot(absorbed)
        if pivot is None:
            break
        cone = oracle_answer(fn, pivot, what=f"{oracle_name} oracle")
        members = sorted(({pivot} | set(cone)) - absorbed)
        absorbed.update(members)
        blocks.append(Block(pivot=pivot, members=tuple(members), side=BlockSide.RIGHT))
        segs.append(_segment(stream, members))
        emitted += len(members)
    if dual:
        positions: list[int] = []
        for seg in reversed(segs):
            positions.extend(seg)
        anchor = positions.index(blocks[0].pivot) if blocks else None
    else:
        positions = [x for seg in segs for x in seg]
        anchor = None
    kind = Kind.OMEGA_STAR if dual else Kind.OMEGA
    return BlockSeq(tuple(blocks), kind), LinearOrder(tuple(positions), anchor_index=anchor)


def omega_linearize(
    stream: StreamPoset,
    blocks_wanted: int | None = None,
    *,
    elements_wanted: int | None = None,
) -> tuple[BlockSeq, LinearOrder]:
    """Block linearization for streams whose lower cones are finite.

    Block n's pivot is the least-enumerated element outside all earlier
    blocks; its members are the pivot's predecessors minus earlier blocks.
    The output order concatenates the blocks left to right.
    """
    return _cone_run(
        stream, dual=False, blocks_wanted=blocks_wanted, elements_wanted=elements_wanted
    )


def omega_star_linearize(
    stream: StreamPoset,
    blocks_wanted: int | None = None,
    *,
    elements_wanted: int | None = None,
) -> tuple[BlockSeq, LinearOrder]:
    """Dual block linearization: finite upper cones, blocks grow leftward.

    The returned order anchors block 0 rightmost (its pivot is signed
    position 0).
    """
    return _cone_run(
        stream, dual=True, blocks_wanted=blocks_wanted, elements_wanted=elements_wanted
    )


def zeta_linearize(
    stream: StreamPoset,
    blocks_wanted: int | None = None,
    *,
    elements_wanted: int | None = None,
) -> tuple[BlockSeq, LinearOrder]:
    """Two-ended block linearization for streams with finite intervals.

    Block n's pivot is the least-enumerated element not covered by any
    interval between earlier pivots; its members are everything in an
    interval between an earlier-or-current pivot and the new pivot, minus
    earlier coverage.  A block goes LEFT when its pivot sits below some
    earlier pivot, else RIGHT; the order is realized as a deque.
    """
    fn = require_oracle(stream, "interval")
    scan = _PivotScan(stream)
    covered: set[int] = set()
    pivots: list[int] = []
    blocks: list[Block] = []
    positions: deque[int] = deque()
    emitted = 0
    while _budget_open(blocks, emitted, blocks_wanted, elements_wanted):
        pivot = scan.next_pivot(covered)
        if pivot is None:
            break
        new_cover: set[int] = {pivot}
        for z in pivots + [pivot]:
            new_cover.update(oracle_answer(fn, z, pivot, what="interval oracle"))
        members = sorted(new_cover - covered)
        covered |= new_cover
        side = (
            BlockSide.LEFT
            if any(stream.leq(pivot, z) for z in pivots)
            else BlockSide.RIGHT
        )
        seg = _segment(stream, members)
        if side is BlockSide.LEFT:
            positions.extendleft(reversed(seg))
        else:
            positions.extend(seg)
        blocks.append(Block(pivot=pivot, members=tuple(members), side=side))
        pivots.append(pivot)
        emitted += len(members)
    order = tuple(positions)
    anchor = order.index(blocks[0].pivot) if blocks else None
    return BlockSeq(tuple(blocks), Kind.ZETA), LinearOrder(order, anchor_index=anchor)


def _substream(stream: StreamPoset, ids: Sequence[int], label: str) -> StreamPoset:
    seq = list(ids)
    return StreamPoset(
        lambda s: seq[s],
        stream.leq,
        oracles=stream.oracles,
        size=len(seq),
        name=f"{stream.name}/{label}",
        leq_block=stream._leq_block,
    )


_CROSS_CHECK_CAP = 400_000  # pairwise consistency checks without a bulk hook


def split_linearize(stream: StreamPoset, elements_wanted: int) -> LinearOrder:
    """Linearize a stream whose elements each promise one finite cone.

    The first ``elements_wanted`` enumerated elements are partitioned by the
    side oracle; the FIN_PRED part runs through omega_linearize, the FIN_SUCC
    part through omega_star_linearize, and the output is their concatenation
    (side-0 entirely below side-1), tagged with the per-element sides.
    """
    side_fn = require_oracle(stream, "side")
    horizon: list[int] = []
    for stage in range(elements_wanted):
        try:
            horizon.append(stream.element_at(stage))
        except FiniteDomainEnd:
            break
    lower: list[int] = []
    upper: list[int] = []
    for x in horizon:
        raw = side_fn(x)
        if raw is None:
            raise OracleMissing(f"side oracle gave no class for element {x}")
        try:
            tag = FinSide(raw)
        except ValueError as exc:
            raise FormatError(f"side oracle answered {raw!r} for element {x}") from exc
        if tag is FinSide.FIN_PRED:
            lower.append(x)
        else:
            upper.append(x)
    _, low_order = omega_linearize(_substream(stream, lower, "fin-pred"))
    _, high_order = omega_star_linearize(_substream(stream, upper, "fin-succ"))

    emitted_low = list(low_order)
    emitted_high = list(high_order)
    clash = set(emitted_low) & set(emitted_high)
    if clash:
        raise ClassifierInconsistent(
            f"elements {sorted(clash)[:4]} were emitted on both sides"
        )
    # Best-effort downward-closure check: nothing classified FIN_SUCC may sit
    # below anything classified FIN_PRED.
    if emitted_low and emitted_high:
        if stream._leq_block is not None:
            m = stream.relation_matrix(emitted_low + emitted_high)
            n0 = len(emitted_low)
            cross = m[n0:, :n0]
            if cross.any():
                i, j = np.argwhere(cross)[0]
                raise ClassifierInconsistent(
                    f"FIN_SUCC element {emitted_high[i]} lies below FIN_PRED element {emitted_low[j]}"
                )
        else:
            budget = _CROSS_CHECK_CAP // max(len(emitted_low), 1)
            for u in emitted_high[:budget]:
                for v in emitted_low:
                    if stream.leq(u, v):
                        raise ClassifierInconsistent(
                            f"FIN_SUCC element {u} lies below FIN_PRED element {v}"
                        )
    sides: dict[int, FinSide] = {x: FinSide.FIN_PRED for x in emitted_low}
    sides.update({x: FinSide.FIN_SUCC for x in emitted_high})
    return LinearOrder(
        tuple(emitted_low) + tuple(emitted_high),
        sides=sides,
    )


def linearize(
    stream: StreamPoset,
    kind: Kind,
    *,
    blocks: int | None = None,
    elements: int | None = None,
) -> tuple[BlockSeq | None, LinearOrder]:
    """Kind-dispatching front door used by the CLI."""
    if blocks is None and elements is None:
        raise FormatError("a blocks or elements budget is required")
    if kind is Kind.OMEGA:
        return omega_linearize(stream, blocks, elements_wanted=elements)
    if kind is Kind.OMEGA_STAR:
        return omega_star_linearize(stream, blocks, elements_wanted=elements)
    if kind is Kind.ZETA:
        return zeta_linearize(stream, blocks, elements_wanted=elements)
    if kind is Kind.OMEGA_PLUS_OMEGA_STAR:
        if elements is None:
            raise FormatError("the split construction takes an elements budget")
        return None, split_linearize(stream, elements)
    raise FormatError(f"unknown kind {kind!r}")
