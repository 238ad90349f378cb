"""Brute-force ground truth: exhaustive extension enumeration and generators.

Everything here is deliberately independent of the streaming algorithms so it
can sit on the other side of a dual-route check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import TooLarge, UnknownIdError
from .kinds import Kind
from .poset import FinitePoset, build_poset
from .streams import StreamPoset, take

__all__ = [
    "ExtensionSet",
    "all_linear_extensions",
    "iter_linear_extensions",
    "check_tau_like",
    "TauReport",
    "random_poset",
    "chain_poset",
    "antichain_poset",
    "fence_poset",
]

MAX_EXHAUSTIVE = 10  # default size guard for full enumeration
MAX_RANDOM = 64  # default size guard for random generation


def iter_linear_extensions(poset: FinitePoset) -> Iterator[tuple[int, ...]]:
    """Yield every linear extension, backtracking over minimal remaining
    elements in ascending id order (a canonical, deterministic sequence)."""
    order = sorted(poset.elements)
    # indeg[x] counts strict predecessors not yet placed
    strict_preds = {x: set() for x in order}
    strict_succs = {x: [] for x in order}
    for a, b in poset.leq:
        if a != b:
            strict_preds[b].add(a)
            strict_succs[a].append(b)
    indeg = {x: len(strict_preds[x]) for x in order}
    placed: list[int] = []
    n = len(order)

    def walk() -> Iterator[tuple[int, ...]]:
        if len(placed) == n:
            yield tuple(placed)
            return
        for x in order:
            if indeg[x] == 0:
                indeg[x] = -1  # mark placed
                placed.append(x)
                for y in strict_succs[x]:
                    indeg[y] -= 1
                yield from walk()
                for y in strict_succs[x]:
                    indeg[y] += 1
                placed.pop()
                indeg[x] = 0

    return walk()


@dataclass(frozen=True)
class ExtensionSet:
    """All linear extensions of a poset, in canonical enumeration order."""

    poset: FinitePoset
    orders: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.orders)

    def __iter__(self):
        return iter(self.orders)

    def __contains__(self, order) -> bool:
        return tuple(order) in set(self.orders)


def all_linear_extensions(poset: FinitePoset, max_size: int = MAX_EXHAUSTIVE) -> ExtensionSet:
    """Materialize every linear extension; refuses posets above ``max_size``."""
    if poset.size > max_size:
        raise TooLarge(f"{poset.size} elements exceeds the exhaustive guard {max_size}")
    return ExtensionSet(poset, tuple(iter_linear_extensions(poset)))


def extension_tree_contains(poset: FinitePoset, order) -> bool:
    """Would the backtracking enumeration emit ``order`` as a leaf?

    Walks the single branch that spells out ``order``: the branch exists
    exactly when each element is minimal among the ones not yet placed, so
    this decides membership in the enumeration without materializing it.
    """
    seq = tuple(order)
    if set(seq) != set(poset.elements) or len(seq) != poset.size:
        return False
    indeg = {x: 0 for x in poset.elements}
    strict_succs = {x: [] for x in poset.elements}
    for a, b in poset.leq:
        if a != b:
            indeg[b] += 1
            strict_succs[a].append(b)
    for x in seq:
        if indeg[x] != 0:
            return False
        for y in strict_succs[x]:
            indeg[y] -= 1
    return True


@dataclass
class TauReport:
    """What a finite inspection can certify about a kind promise."""

    kind: Kind
    ok: bool
    scope: str  # "finite" or "prefix"
    counts: dict[int, int]
    max_interval: int | None = None
    notes: list[str] | None = None

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "ok": self.ok,
            "scope": self.scope,
            "counts": {str(k): v for k, v in self.counts.items()},
            "max_interval": self.max_interval,
            "notes": list(self.notes or []),
        }


def check_tau_like(
    target: FinitePoset | StreamPoset, kind: Kind, prefix_size: int = 50
) -> TauReport:
    """Report per-element witnessed counts for the finiteness promise of ``kind``.

    A finite poset satisfies every kind vacuously, so the report carries the
    witnessed statistics; for a stream, the declared oracles are exercised on
    a prefix and their answers folded into the counts.
    """
    if isinstance(target, FinitePoset):
        # counts are strict: the element itself never witnesses its own bound
        counts: dict[int, int] = {}
        for x in target.elements:
            if kind is Kind.OMEGA:
                counts[x] = len(target.predecessors(x)) - 1
            elif kind is Kind.OMEGA_STAR:
                counts[x] = len(target.successors(x)) - 1
            elif kind is Kind.OMEGA_PLUS_OMEGA_STAR:
                counts[x] = min(len(target.predecessors(x)), len(target.successors(x))) - 1
            else:
                counts[x] = 0
        max_interval = None
        if kind is Kind.ZETA and target.size:
            mi = target._matrix.astype(np.int32)
            # (mi @ mi)[i, j] counts the z with i <= z <= j
            max_interval = int((mi @ mi).max())
            counts = {x: 0 for x in target.elements}
        return TauReport(kind=kind, ok=True, scope="finite", counts=counts, max_interval=max_interval)

    ids = take(target, prefix_size)
    bundle = target.oracles
    counts = {}
    notes: list[str] = []
    ok = True
    for x in ids:
        if kind is Kind.OMEGA:
            fn = bundle.predecessors if bundle else None
        elif kind is Kind.OMEGA_STAR:
            fn = bundle.successors if bundle else None
        elif kind is Kind.ZETA:
            fn = None
        else:
            fn = None
        if kind is Kind.OMEGA_PLUS_OMEGA_STAR:
            tag = bundle.side(x) if bundle and bundle.side else None
            if tag is None:
                ok = False
                notes.append(f"element {x} has no side answer")
                continue
            which = bundle.predecessors if tag.value == "FIN_PRED" else bundle.successors
            ans = which(x) if which else None
        elif kind is Kind.ZETA:
            ans = bundle.interval(ids[0], x) if bundle and bundle.interval else None
        else:
            ans = fn(x) if fn else None
        if ans is None:
            ok = False
            notes.append(f"element {x} has no finite answer for {kind.value}")
            continue
        counts[x] = len(set(ans) - {x})
        for y in ans:
            good = (
                target.leq(y, x)
                if kind is Kind.OMEGA
                else target.leq(x, y)
                if kind is Kind.OMEGA_STAR
                else True
            )
            if not good:
                ok = False
                notes.append(f"oracle listed {y} for {x} unsoundly")
                break
    return TauReport(kind=kind, ok=ok, scope="prefix", counts=counts, notes=notes)


def random_poset(n: int, density: float, seed: int, max_size: int = MAX_RANDOM) -> FinitePoset:
    """A seeded random poset: orient pairs along a random permutation.

    Each pair below the diagonal of the permutation becomes a generator with
    probability ``density``; the result is closed.  density=0 gives an
    antichain, density=1 a chain.  Deterministic for a fixed seed.
    """
    if n > max_size:
        raise TooLarge(f"{n} elements exceeds the random-generation guard {max_size}")
    if n < 0:
        raise UnknownIdError("poset size must be non-negative")
    if not 0.0 <= density <= 1.0:
        raise UnknownIdError(f"density must lie in [0, 1], got {density}")
    rng = random.Random(seed)
    perm = list(range(n))
    rng.shuffle(perm)
    gens = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                gens.append((perm[i], perm[j]))
    return build_poset(range(n), gens)


def chain_poset(n: int) -> FinitePoset:
    """0 < 1 < ... < n-1."""
    return build_poset(range(n), [(i, i + 1) for i in range(n - 1)])


def antichain_poset(n: int) -> FinitePoset:
    return build_poset(range(n), [])


def fence_poset(n: int) -> FinitePoset:
    """Alternating zigzag 0 < 1 > 2 < 3 > ...; a sparse two-ended test shape."""
    gens = []
    for i in range(n - 1):
        gens.append((i, i + 1) if i % 2 == 0 else (i + 1, i))
    return build_poset(range(n), gens)
