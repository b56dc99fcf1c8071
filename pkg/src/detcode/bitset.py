"""Bitmask helpers.

Vertex sets are plain Python ints: bit i set means vertex i is in the set.
int.bit_count() (3.10+) makes popcounts cheap, and subset/intersection
tests compile to single big-int ops, which is why the solver and verifier
use masks instead of Python sets on their hot paths.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def mask_from_iter(vertices: Iterable[int]) -> int:
    """Build a mask from an iterable of vertex ids."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


def lowest_bit(mask: int) -> int:
    """Index of the lowest set bit. mask must be nonzero."""
    return (mask & -mask).bit_length() - 1
