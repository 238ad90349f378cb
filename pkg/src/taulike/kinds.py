"""Shared vocabulary: order kinds, finiteness sides, block placement sides."""

from __future__ import annotations

from enum import Enum

__all__ = ["Kind", "FinSide", "BlockSide"]


class Kind(str, Enum):
    """The four canonical countable order types handled by this package."""

    OMEGA = "omega"
    OMEGA_STAR = "omega-star"
    OMEGA_PLUS_OMEGA_STAR = "omega-omega-star"
    ZETA = "zeta"


class FinSide(str, Enum):
    """Which cone of an element is promised to be finite."""

    FIN_PRED = "FIN_PRED"
    FIN_SUCC = "FIN_SUCC"


class BlockSide(str, Enum):
    """Where a block lands when the output order grows at both ends."""

    LEFT = "LEFT"
    RIGHT = "RIGHT"
