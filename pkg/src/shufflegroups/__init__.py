"""Generalised perfect-shuffle groups: construction and structure identification."""

from .bsgs import PermGroup, Verdict, contains_alternating, group_order, is_primitive
from .perm import Permutation
from .shuffle import DeckSpec, PileGroupSpec, shuffle_group, standard_shuffle

__all__ = [
    "DeckSpec",
    "PermGroup",
    "Permutation",
    "PileGroupSpec",
    "Verdict",
    "contains_alternating",
    "group_order",
    "is_primitive",
    "shuffle_group",
    "standard_shuffle",
]
