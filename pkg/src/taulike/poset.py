"""Finite partial orders, linear orders, and canonical comparison points.

Element ids are non-negative ints throughout.  A :class:`FinitePoset` stores
the *full* reflexive-transitive relation, so ``le`` is a set lookup; every
constructor re-validates the partial-order axioms before returning.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    CycleError,
    FormatError,
    MissingPartError,
    UnknownIdError,
)
from .kinds import FinSide, Kind

__all__ = [
    "FinitePoset",
    "LinearOrder",
    "CanonicalPoint",
    "ExtensionCheck",
    "build_poset",
    "lex_sum",
    "disjoint_sum",
    "is_linear_extension",
    "pair_id",
    "unpair_id",
    "POSET_SCHEMA",
    "poset_to_json_dict",
    "poset_from_json_dict",
    "load_poset_json",
    "dump_poset_json",
]

POSET_SCHEMA = "taulike.poset/1"

# Pure-python closure/validation below this size; numpy above it.
_DENSE_CUTOFF = 16


def pair_id(part: int, member: int) -> int:
    """Cantor pairing; the stable id given to element ``member`` of part ``part``."""
    if part < 0 or member < 0:
        raise UnknownIdError(f"pairing needs non-negative ints, got ({part}, {member})")
    s = part + member
    return s * (s + 1) // 2 + member


def unpair_id(code: int) -> tuple[int, int]:
    """Inverse of :func:`pair_id`."""
    if code < 0:
        raise UnknownIdError(f"pair codes are non-negative, got {code}")
    s = (math.isqrt(8 * code + 1) - 1) // 2
    member = code - s * (s + 1) // 2
    return s - member, member


def _check_ids(elements: Sequence[int]) -> None:
    seen: set[int] = set()
    for x in elements:
        if not isinstance(x, int) or isinstance(x, bool) or x < 0:
            raise UnknownIdError(f"element ids must be non-negative ints, got {x!r}")
        if x in seen:
            raise UnknownIdError(f"duplicate element id {x}")
        seen.add(x)


@dataclass(frozen=True)
class FinitePoset:
    """A finite poset over explicit ids.

    ``elements`` fixes the enumeration order used by every deterministic
    algorithm downstream; ``leq`` is the complete closed relation as a set
    of ``(lower, upper)`` pairs, including the diagonal.
    """

    elements: tuple[int, ...]
    leq: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        _check_ids(self.elements)
        self._validate()

    # -- construction -------------------------------------------------

    @classmethod
    def from_closed(
        cls, elements: Iterable[int], pairs: Iterable[tuple[int, int]]
    ) -> "FinitePoset":
        """Build from an already-closed relation; axioms are still checked."""
        elems = tuple(elements)
        closed = set((int(a), int(b)) for a, b in pairs)
        closed.update((x, x) for x in elems)
        return cls(elems, frozenset(closed))

    def _validate(self) -> None:
        index = {x: i for i, x in enumerate(self.elements)}
        for a, b in self.leq:
            if a not in index or b not in index:
                raise UnknownIdError(f"relation pair ({a}, {b}) leaves the element set")
        n = len(self.elements)
        if n <= _DENSE_CUTOFF:
            leq = self.leq
            for x in self.elements:
                if (x, x) not in leq:
                    raise FormatError(f"relation is missing the diagonal at {x}")
            for a, b in leq:
                if a != b and (b, a) in leq:
                    raise CycleError(f"elements {a} and {b} are mutually below each other")
            for a, b in leq:
                for c in self.elements:
                    if (b, c) in leq and (a, c) not in leq:
                        raise FormatError(
                            f"relation is not transitive: {a}<={b}<={c} but not {a}<={c}"
                        )
        else:
            m = self._matrix
            if not m.diagonal().all():
                raise FormatError("relation is missing part of the diagonal")
            both = m & m.T
            np.fill_diagonal(both, False)
            if both.any():
                a, b = np.argwhere(both)[0]
                raise CycleError(
                    f"elements {self.elements[a]} and {self.elements[b]} are mutually below each other"
                )
            reach = (m.astype(np.float32) @ m.astype(np.float32)) > 0
            if (reach & ~m).any():
                raise FormatError("relation is not transitive")

    # -- cached views --------------------------------------------------

    @cached_property
    def _index(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.elements)}

    @cached_property
    def _matrix(self) -> np.ndarray:
        n = len(self.elements)
        m = np.zeros((n, n), dtype=bool)
        idx = {x: i for i, x in enumerate(self.elements)}
        for a, b in self.leq:
            m[idx[a], idx[b]] = True
        return m

    # -- queries -------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._index

    def le(self, x: int, y: int) -> bool:
        if x not in self._index or y not in self._index:
            raise UnknownIdError(f"le() saw unknown id in ({x}, {y})")
        return (x, y) in self.leq

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.le(x, y)

    def predecessors(self, x: int) -> list[int]:
        """All y with y <= x, in element order (includes x)."""
        return [y for y in self.elements if self.le(y, x)]

    def successors(self, x: int) -> list[int]:
        """All y with x <= y, in element order (includes x)."""
        return [y for y in self.elements if self.le(x, y)]

    def interval(self, x: int, y: int) -> list[int]:
        """All z with x <= z <= y or y <= z <= x, in element order."""
        return [
            z
            for z in self.elements
            if (self.le(x, z) and self.le(z, y)) or (self.le(y, z) and self.le(z, x))
        ]

    def restrict(self, keep: Iterable[int]) -> "FinitePoset":
        """Induced sub-poset on ``keep``, in the order given."""
        kept = tuple(keep)
        for x in kept:
            if x not in self._index:
                raise UnknownIdError(f"restrict() saw unknown id {x}")
        kept_set = set(kept)
        pairs = [(a, b) for a, b in self.leq if a in kept_set and b in kept_set]
        return FinitePoset.from_closed(kept, pairs)

    def covers(self) -> list[tuple[int, int]]:
        """The transitive reduction, sorted; closure recovers ``leq`` exactly."""
        strict = {(a, b) for a, b in self.leq if a != b}
        out = []
        for a, b in strict:
            if not any((a, c) in strict and (c, b) in strict for c in self.elements):
                out.append((a, b))
        return sorted(out)


def _close_and_check(
    elements: Sequence[int], generators: Iterable[tuple[int, int]]
) -> frozenset[tuple[int, int]]:
    idx = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    gen = []
    for a, b in generators:
        if a not in idx or b not in idx:
            raise UnknownIdError(f"relation pair ({a}, {b}) references an undeclared id")
        gen.append((idx[a], idx[b]))

    if n <= _DENSE_CUTOFF:
        adj = [set() for _ in range(n)]
        for i, j in gen:
            adj[i].add(j)
        for i in range(n):
            adj[i].add(i)
        # Warshall, row-at-a-time; n is small here.
        for k in range(n):
            for i in range(n):
                if k in adj[i]:
                    adj[i] |= adj[k]
        for i in range(n):
            for j in adj[i]:
                if i != j and i in adj[j]:
                    raise CycleError(
                        f"elements {elements[i]} and {elements[j]} are mutually below each other"
                    )
        return frozenset(
            (elements[i], elements[j]) for i in range(n) for j in adj[i]
        )

    m = np.eye(n, dtype=bool)
    for i, j in gen:
        m[i, j] = True
    for k in range(n):
        m |= np.outer(m[:, k], m[k, :])
    both = m & m.T
    np.fill_diagonal(both, False)
    if both.any():
        a, b = np.argwhere(both)[0]
        raise CycleError(
            f"elements {elements[a]} and {elements[b]} are mutually below each other"
        )
    ii, jj = np.nonzero(m)
    return frozenset((elements[i], elements[j]) for i, j in zip(ii.tolist(), jj.tolist()))


def build_poset(
    elements: Iterable[int], relation: Iterable[tuple[int, int]]
) -> FinitePoset:
    """Close ``relation`` reflexively and transitively over ``elements``.

    Raises :class:`CycleError` if the closure is not antisymmetric and
    :class:`UnknownIdError` on dangling or duplicate ids.
    """
    elems = tuple(elements)
    _check_ids(elems)
    closed = _close_and_check(elems, relation)
    return FinitePoset(elems, closed)


# -- sums ---------------------------------------------------------------


def lex_sum(index: FinitePoset, parts: Mapping[int, FinitePoset]) -> FinitePoset:
    """Lexicographic sum of ``parts`` along ``index``.

    Output ids are ``pair_id(i, x)`` for part ``i`` and member ``x``;
    ``(i, x) <= (j, y)`` iff ``i < j`` in the index or ``i == j`` and
    ``x <= y`` inside the part.
    """
    for i in index.elements:
        if i not in parts:
            raise MissingPartError(f"no part supplied for index element {i}")
    tagged = [(i, x) for i in index.elements for x in parts[i].elements]
    elems = [pair_id(i, x) for i, x in tagged]
    pairs = []
    for i, x in tagged:
        for j, y in tagged:
            if i == j:
                if parts[i].le(x, y):
                    pairs.append((pair_id(i, x), pair_id(j, y)))
            elif index.le(i, j):
                pairs.append((pair_id(i, x), pair_id(j, y)))
    return FinitePoset.from_closed(elems, pairs)


def disjoint_sum(parts: Sequence[FinitePoset]) -> FinitePoset:
    """Disjoint (parallel) sum: lex sum along an antichain index 0..n-1."""
    idx = FinitePoset.from_closed(range(len(parts)), [])
    return lex_sum(idx, dict(enumerate(parts)))


# -- linear orders -------------------------------------------------------


@dataclass(frozen=True)
class LinearOrder:
    """A finite linear order, read left (least) to right (greatest).

    ``anchor_index`` marks signed position 0 for two-ended outputs.
    ``sides`` records per-element finiteness classes when the order came out
    of a side-split run.  ``unstable`` lists elements whose position is not
    final (produced only by raw truncation helpers).
    """

    positions: tuple[int, ...]
    anchor_index: int | None = None
    sides: Mapping[int, FinSide] | None = None
    unstable: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        if len(set(self.positions)) != len(self.positions):
            raise FormatError("linear order repeats an element")
        if self.anchor_index is not None and not (
            0 <= self.anchor_index < max(len(self.positions), 1)
        ):
            raise FormatError("anchor index out of range")

    @cached_property
    def _index(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.positions)}

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self):
        return iter(self.positions)

    def __contains__(self, x: int) -> bool:
        return x in self._index

    def index_of(self, x: int) -> int:
        if x not in self._index:
            raise UnknownIdError(f"element {x} is not in this linear order")
        return self._index[x]

    def precedes(self, x: int, y: int) -> bool:
        return self.index_of(x) < self.index_of(y)

    def signed_position(self, x: int) -> int:
        """Offset from the anchor; requires an anchored (two-ended) order."""
        if self.anchor_index is None:
            raise FormatError("this linear order has no anchor")
        return self.index_of(x) - self.anchor_index


def truncate_order(order: LinearOrder, count: int) -> LinearOrder:
    """Keep the leftmost ``count`` positions, marking the cut edge unstable.

    The result is only for display and error-path tests; embeddings refuse
    elements in ``unstable``.
    """
    kept = order.positions[:count]
    unstable = frozenset(kept[-1:]) if len(kept) < len(order.positions) else frozenset()
    anchor = order.anchor_index if order.anchor_index is not None and order.anchor_index < len(kept) else None
    sides = None
    if order.sides is not None:
        sides = {x: order.sides[x] for x in kept if x in order.sides}
    return LinearOrder(kept, anchor_index=anchor, sides=sides, unstable=unstable)


@dataclass(frozen=True)
class ExtensionCheck:
    """Boolean verdict plus a reason code (falsy when the check fails)."""

    ok: bool
    code: str = "ok"
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_linear_extension(
    order: LinearOrder | Sequence[int], poset: FinitePoset
) -> ExtensionCheck:
    """Does ``order`` list exactly ``poset.elements`` consistently with <=?"""
    positions = tuple(order)
    if set(positions) != set(poset.elements) or len(positions) != poset.size:
        return ExtensionCheck(False, "element-mismatch", "orders a different element set")
    at = {x: i for i, x in enumerate(positions)}
    for a, b in poset.leq:
        if at[a] > at[b]:
            return ExtensionCheck(False, "order-violation", f"{a} <= {b} but {b} comes first")
    return ExtensionCheck(True)


# -- canonical comparison points ------------------------------------------


@dataclass(frozen=True)
class CanonicalPoint:
    """A point of one of the four canonical orders, with its native comparison.

    Coordinates: naturals for omega (ascending) and omega-star (descending),
    ``(side, k)`` pairs for omega-omega-star with side 0 below side 1, and
    signed ints for zeta.
    """

    kind: Kind
    coord: int | tuple[int, int]

    def __post_init__(self) -> None:
        k = self.coord
        if self.kind in (Kind.OMEGA, Kind.OMEGA_STAR):
            if not isinstance(k, int) or k < 0:
                raise FormatError(f"{self.kind.value} coordinates are naturals, got {k!r}")
        elif self.kind is Kind.ZETA:
            if not isinstance(k, int):
                raise FormatError(f"zeta coordinates are ints, got {k!r}")
        else:
            if (
                not isinstance(k, tuple)
                or len(k) != 2
                or k[0] not in (0, 1)
                or not isinstance(k[1], int)
                or k[1] < 0
            ):
                raise FormatError(
                    f"omega-omega-star coordinates are (side, k) with side in {{0,1}}, got {k!r}"
                )

    def sort_key(self) -> tuple[int, int]:
        if self.kind is Kind.OMEGA:
            return (0, self.coord)
        if self.kind is Kind.OMEGA_STAR:
            return (0, -self.coord)
        if self.kind is Kind.ZETA:
            return (0, self.coord)
        side, k = self.coord
        return (side, k if side == 0 else -k)

    def _need_same_kind(self, other: "CanonicalPoint") -> None:
        if not isinstance(other, CanonicalPoint):
            raise TypeError(f"cannot compare CanonicalPoint with {type(other).__name__}")
        if other.kind is not self.kind:
            raise TypeError(f"cannot compare {self.kind.value} with {other.kind.value}")

    def __lt__(self, other: "CanonicalPoint") -> bool:
        self._need_same_kind(other)
        return self.sort_key() < other.sort_key()

    def __le__(self, other: "CanonicalPoint") -> bool:
        self._need_same_kind(other)
        return self.sort_key() <= other.sort_key()

    def __gt__(self, other: "CanonicalPoint") -> bool:
        self._need_same_kind(other)
        return self.sort_key() > other.sort_key()

    def __ge__(self, other: "CanonicalPoint") -> bool:
        self._need_same_kind(other)
        return self.sort_key() >= other.sort_key()


# -- JSON ------------------------------------------------------------------

_ALLOWED_KEYS = {"schema", "elements", "relation", "meta"}


def poset_to_json_dict(poset: FinitePoset, meta: dict | None = None) -> dict:
    """Serialize as elements plus generator pairs (the transitive reduction)."""
    doc: dict = {
        "schema": POSET_SCHEMA,
        "elements": list(poset.elements),
        "relation": [list(p) for p in poset.covers()],
    }
    if meta is not None:
        doc["meta"] = meta
    return doc


def poset_from_json_dict(doc: object) -> FinitePoset:
    """Load a poset document; relation pairs are generators, closure applies."""
    if not isinstance(doc, dict):
        raise FormatError("poset document must be a JSON object")
    unknown = set(doc) - _ALLOWED_KEYS
    if unknown:
        raise FormatError(f"unknown keys in poset document: {sorted(unknown)}")
    if "elements" not in doc or "relation" not in doc:
        raise FormatError("poset document needs 'elements' and 'relation'")
    elements = doc["elements"]
    relation = doc["relation"]
    if not isinstance(elements, list) or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in elements
    ):
        raise FormatError("'elements' must be a list of ints")
    if not isinstance(relation, list):
        raise FormatError("'relation' must be a list of pairs")
    pairs = []
    for item in relation:
        if not (
            isinstance(item, list)
            and len(item) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in item)
        ):
            raise FormatError(f"relation entry {item!r} is not an id pair")
        pairs.append((item[0], item[1]))
    return build_poset(elements, pairs)


def dump_poset_json(poset: FinitePoset, path: str, meta: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(poset_to_json_dict(poset, meta), fh, indent=2)
        fh.write("\n")


def load_poset_json(path: str) -> FinitePoset:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"not valid JSON: {exc}") from exc
    return poset_from_json_dict(doc)
