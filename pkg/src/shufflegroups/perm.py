"""Permutations of [d] = {0, ..., d-1} stored as dense image tuples.

Products use the right-action convention: ``i^(pq) = (i^p)^q``, so
``(p * q)(i) == q(p(i))``.  The helpers prefixed with an underscore work on
raw tuples and are what the group algorithms use in their inner loops.
"""

from __future__ import annotations

import re
from math import gcd
from typing import Iterable, Sequence


class DegreeMismatch(ValueError):
    """Two permutations of different degrees were combined."""


def _mul(p: tuple, q: tuple) -> tuple:
    return tuple(map(q.__getitem__, p))


def _inv(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _cycles(p: Sequence[int]) -> list[list[int]]:
    seen = bytearray(len(p))
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cycle = [i]
        seen[i] = 1
        j = p[i]
        while j != i:
            seen[j] = 1
            cycle.append(j)
            j = p[j]
        out.append(cycle)
    return out


def _cycle_lengths(p: Sequence[int]) -> list[int]:
    seen = bytearray(len(p))
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = 1
            j = p[j]
            length += 1
        out.append(length)
    return out


def _sign(p: Sequence[int]) -> int:
    lengths = _cycle_lengths(p)
    return -1 if (len(p) - len(lengths)) % 2 else 1


class Permutation:
    """An immutable permutation of ``range(degree)``.

    >>> p = Permutation.from_cycles(3, [[0, 1]])
    >>> q = Permutation.from_cycles(3, [[1, 2]])
    >>> (p * q).images
    (2, 0, 1)
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int], *, check: bool = True):
        images = tuple(images)
        if check:
            if not images:
                raise ValueError("permutation degree must be at least 1")
            if sorted(images) != list(range(len(images))):
                raise ValueError(f"not a permutation: {images!r}")
        self.images = images
        self._hash = None

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        images = list(range(degree))
        touched = set()
        for cycle in cycles:
            for a in cycle:
                if not 0 <= a < degree:
                    raise ValueError(f"point {a} outside [0, {degree})")
                if a in touched:
                    raise ValueError(f"point {a} repeated in cycle notation")
                touched.add(a)
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                images[a] = b
        return cls(images, check=False)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> Permutation:
        """Parse disjoint-cycle notation such as ``"(1 3 4 2)(0 5)"``.

        The degree defaults to one more than the largest point mentioned.
        """
        body = text.strip()
        if not re.fullmatch(r"(\s*\(\s*(\d+([\s,]+\d+)*)?\s*\))*\s*", body):
            raise ValueError(f"could not parse permutation {text!r}")
        cycles = [
            [int(x) for x in re.split(r"[\s,]+", c.strip())]
            for c in re.findall(r"\(([^()]*)\)", body)
            if c.strip()
        ]
        largest = max((max(c) for c in cycles), default=-1)
        if degree is None:
            degree = max(largest + 1, 1)
        return cls.from_cycles(degree, cycles)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __pow__(self, m: int) -> Permutation:
        base = self.images if m >= 0 else _inv(self.images)
        m = abs(m)
        result = tuple(range(self.degree))
        while m:
            if m & 1:
                result = _mul(result, base)
            base = _mul(base, base)
            m >>= 1
        return Permutation(result, check=False)

    def inverse(self) -> Permutation:
        return Permutation(_inv(self.images), check=False)

    def conjugate(self, g: Permutation) -> Permutation:
        """Return ``self^g = g^-1 * self * g``."""
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[list[int]]:
        return [c for c in _cycles(self.images) if len(c) > 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.images == other.images

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __str__(self) -> str:
        return format_cycles(self)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"


def _check_degrees(p: Permutation, q: Permutation) -> None:
    if p.degree != q.degree:
        raise DegreeMismatch(f"degrees differ: {p.degree} != {q.degree}")


def compose(p: Permutation, q: Permutation) -> Permutation:
    """First ``p`` then ``q``."""
    _check_degrees(p, q)
    return Permutation(_mul(p.images, q.images), check=False)


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def sign(p: Permutation) -> int:
    return _sign(p.images)


def cycle_type(p: Permutation) -> tuple[int, ...]:
    """Sorted cycle lengths, fixed points included as 1s."""
    return tuple(sorted(_cycle_lengths(p.images)))


def support(p: Permutation) -> frozenset[int]:
    return frozenset(i for i, x in enumerate(p.images) if i != x)


def order_of(p: Permutation) -> int:
    m = 1
    for length in _cycle_lengths(p.images):
        m = m * length // gcd(m, length)
    return m


def format_cycles(p: Permutation) -> str:
    cycles = p.cycles()
    if not cycles:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def parse_cycles(text: str, degree: int | None = None) -> Permutation:
    return Permutation.parse(text, degree)
