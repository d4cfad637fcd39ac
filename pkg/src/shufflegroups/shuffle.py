"""Decks, the standard shuffle, pile permutations and pile-group families.

Cards are labelled ``a*n + b`` for pile ``a`` in [k] and depth ``b`` in [n].
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, prod
from typing import Sequence

from .bsgs import PermGroup
from .perm import DegreeMismatch, Permutation, sign


class InvalidSpec(ValueError):
    pass


class NotInBn(ValueError):
    """The permutation does not preserve the central-symmetry pairing."""


@dataclass(frozen=True)
class DeckSpec:
    k: int
    n: int

    def __post_init__(self):
        if self.k < 2 or self.n < 2:
            raise ValueError(f"need k >= 2 and n >= 2, got k={self.k}, n={self.n}")

    @property
    def degree(self) -> int:
        return self.k * self.n


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p ** 0.5) + 1))


def integer_log(x: int, base: int) -> int | None:
    """``f`` with ``base**f == x`` (f >= 1), else None."""
    if base < 2 or x < base:
        return None
    f = 0
    while x % base == 0:
        x //= base
        f += 1
    return f if x == 1 else None


def to_digits(i: int, base: int, width: int) -> tuple[int, ...]:
    """Base-``base`` digits of ``i``, most significant first."""
    out = [0] * width
    for r in range(width - 1, -1, -1):
        i, out[r] = divmod(i, base)
    return tuple(out)


def from_digits(digits: Sequence[int], base: int) -> int:
    i = 0
    for x in digits:
        i = i * base + x
    return i


def shuffle_by_rows(deck: DeckSpec) -> tuple[int, ...]:
    """Card ``a*n + b`` goes to position ``b*k + a``."""
    k, n = deck.k, deck.n
    return tuple((i % n) * k + i // n for i in range(k * n))


def shuffle_by_multiplication(deck: DeckSpec) -> tuple[int, ...]:
    """``i -> k*i mod (kn - 1)`` with the last card fixed."""
    m = deck.degree - 1
    return tuple((deck.k * i) % m if i < m else m for i in range(deck.degree))


def standard_shuffle(deck: DeckSpec) -> Permutation:
    images = shuffle_by_rows(deck)
    assert images == shuffle_by_multiplication(deck)
    return Permutation(images, check=False)


def pile_perm(tau: Permutation, deck: DeckSpec) -> Permutation:
    """Move whole piles by ``tau``: ``a*n + b -> tau(a)*n + b``."""
    if tau.degree != deck.k:
        raise DegreeMismatch(f"pile permutation of degree {tau.degree} for k={deck.k}")
    n, t = deck.n, tau.images
    return Permutation((t[i // n] * n + i % n for i in range(deck.degree)), check=False)


def bit_flip(t: int, s: int) -> Permutation:
    """Flip bit ``s`` of every index in [2^t]."""
    if not 0 <= s < t:
        raise ValueError(f"bit {s} out of range for t={t}")
    return Permutation((a ^ (1 << s) for a in range(2 ** t)), check=False)


def _cycle(degree: int, points: Sequence[int]) -> Permutation:
    return Permutation.from_cycles(degree, [points])


def affine_map(matrix: Sequence[Sequence[int]], shift: Sequence[int], p: int) -> Permutation:
    """``x -> x*M + c`` on row vectors of F_p^d, points labelled by digits."""
    d = len(shift)
    images = []
    for i in range(p ** d):
        x = to_digits(i, p, d)
        y = [(sum(x[r] * matrix[r][c] for r in range(d)) + shift[c]) % p for c in range(d)]
        images.append(from_digits(y, p))
    return Permutation(images, check=False)


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = {q for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)}
    return next(g for g in range(2, p) if all(pow(g, (p - 1) // q, p) != 1 for q in factors))


def general_linear_generators(d: int, p: int) -> list[list[list[int]]]:
    """Matrices generating GL(d, p): a scalar-like diagonal, a transvection and
    coordinate permutations (which carry the transvection to every position)."""
    def identity():
        return [[int(r == c) for c in range(d)] for r in range(d)]

    mats = []
    w = _primitive_root(p)
    if w != 1:
        m = identity()
        m[0][0] = w
        mats.append(m)
    if d >= 2:
        m = identity()
        m[0][1] = 1
        mats.append(m)
        swap = identity()
        swap[0][0] = swap[1][1] = 0
        swap[0][1] = swap[1][0] = 1
        mats.append(swap)
    if d >= 3:
        mats.append([[int(c == (r + 1) % d) for c in range(d)] for r in range(d)])
    return mats


def affine_generators(d: int, p: int) -> list[Permutation]:
    zero = [0] * d
    ident = [[int(r == c) for c in range(d)] for r in range(d)]
    gens = [affine_map(ident, [int(c == r) for c in range(d)], p) for r in range(d)]
    gens.extend(affine_map(m, zero, p) for m in general_linear_generators(d, p))
    return gens


def product_action(coord_maps: Sequence[Permutation | None], coord_perm: Sequence[int],
                   base: int) -> Permutation:
    """Element of Sym(base) wr Sym(m) on [base]^m: apply ``coord_maps[r]`` to
    coordinate r, then move coordinate r to position ``coord_perm[r]``."""
    m = len(coord_perm)
    images = []
    for i in range(base ** m):
        x = to_digits(i, base, m)
        y = [0] * m
        for r in range(m):
            g = coord_maps[r]
            y[coord_perm[r]] = g.images[x[r]] if g is not None else x[r]
        images.append(from_digits(y, base))
    return Permutation(images, check=False)


def product_action_generators(base_gens: Sequence[Permutation], base: int, m: int,
                              top_gens: Sequence[Sequence[int]] | None = None) -> list[Permutation]:
    """Generators of A wr T in product action, A acting on coordinate 0.

    ``top_gens`` defaults to generators of Sym(m).
    """
    if top_gens is None:
        top_gens = []
        if m >= 2:
            top_gens.append([1, 0] + list(range(2, m)))
        if m >= 3:
            top_gens.append([(r + 1) % m for r in range(m)])
    ident_coords = list(range(m))
    gens = [product_action([g] + [None] * (m - 1), ident_coords, base) for g in base_gens]
    gens.extend(product_action([None] * m, list(t), base) for t in top_gens)
    return gens


def symmetric_generators(k: int) -> list[Permutation]:
    gens = [_cycle(k, [0, 1])]
    if k > 2:
        gens.append(_cycle(k, list(range(k))))
    return gens


def alternating_generators(k: int) -> list[Permutation]:
    if k < 3:
        return []
    gens = [_cycle(k, [0, 1, 2])]
    if k > 3:
        gens.append(_cycle(k, list(range(k)) if k % 2 else list(range(1, k))))
    return gens


_KINDS = {"sym": 0, "alt": 0, "cyclic": 0, "elem2": 1, "agl": 2, "wreath": 2}


@dataclass(frozen=True)
class PileGroupSpec:
    """A named subgroup P of Sym(k) acting on the piles.

    ``params`` is ``(t,)`` for elem2, ``(e, p)`` for agl and ``(l, e)`` for
    wreath; the other kinds take none.
    """

    kind: str
    k: int
    params: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidSpec(f"unknown pile group {self.kind!r}")
        if len(self.params) != _KINDS[self.kind]:
            raise InvalidSpec(f"{self.kind} takes {_KINDS[self.kind]} parameters")
        k = self.k
        if k < 2:
            raise InvalidSpec("need at least two piles")
        if self.kind == "elem2":
            (t,) = self.params
            if t < 1 or 2 ** t != k:
                raise InvalidSpec(f"elem2:{t} acts on {2 ** t} piles, not {k}")
        elif self.kind == "agl":
            e, p = self.params
            if e < 1 or not is_prime(p) or p ** e != k:
                raise InvalidSpec(f"agl:{e}:{p} needs a prime p and k = p^e, got k={k}")
        elif self.kind == "wreath":
            ell, e = self.params
            if ell < 2 or e < 1 or ell ** e != k:
                raise InvalidSpec(f"wreath:{ell}:{e} needs k = l^e, got k={k}")

    @classmethod
    def parse(cls, text: str, k: int) -> PileGroupSpec:
        parts = text.strip().lower().split(":")
        try:
            params = tuple(int(x) for x in parts[1:])
        except ValueError:
            raise InvalidSpec(f"bad pile group {text!r}") from None
        return cls(parts[0], k, params)

    @property
    def label(self) -> str:
        return ":".join([self.kind, *map(str, self.params)])

    def generators(self) -> list[Permutation]:
        k = self.k
        if self.kind == "sym":
            return symmetric_generators(k)
        if self.kind == "alt":
            return alternating_generators(k)
        if self.kind == "cyclic":
            return [_cycle(k, list(range(k)))]
        if self.kind == "elem2":
            (t,) = self.params
            return [bit_flip(t, s) for s in range(t)]
        if self.kind == "agl":
            e, p = self.params
            return affine_generators(e, p)
        ell, e = self.params
        return product_action_generators(symmetric_generators(ell), ell, e)

    def order(self) -> int:
        """Order of P from its closed form."""
        k = self.k
        if self.kind == "sym":
            return factorial(k)
        if self.kind == "alt":
            return max(factorial(k) // 2, 1)
        if self.kind == "cyclic":
            return k
        if self.kind == "elem2":
            return k
        if self.kind == "agl":
            e, p = self.params
            return affine_group_order(e, p)
        ell, e = self.params
        return factorial(ell) ** e * factorial(e)

    def group(self) -> PermGroup:
        return PermGroup(self.generators(), degree=self.k)

    def in_alt(self) -> bool:
        return all(sign(g) == 1 for g in self.generators())


def general_linear_order(d: int, p: int) -> int:
    return prod(p ** d - p ** i for i in range(d))


def affine_group_order(d: int, p: int) -> int:
    return p ** d * general_linear_order(d, p)


def shuffle_generators(pile_gens: Sequence[Permutation], deck: DeckSpec) -> list[Permutation]:
    return [standard_shuffle(deck)] + [pile_perm(t, deck) for t in pile_gens]


def shuffle_group(spec: PileGroupSpec, deck: DeckSpec, seed: int = 0) -> PermGroup:
    """Sh(P, n): the standard shuffle together with every pile move from P."""
    if spec.k != deck.k:
        raise ValueError(f"pile group acts on {spec.k} piles, deck has {deck.k}")
    return PermGroup(shuffle_generators(spec.generators(), deck), deck.degree, seed=seed)


def parity_containment(spec: PileGroupSpec, deck: DeckSpec) -> bool:
    """Whether Sh(P, n) <= Alt(kn), decided from k, n mod 4 and the parity of P."""
    k4, n4 = deck.k % 4, deck.n % 4
    if n4 == 0:
        return True
    if n4 == 2:
        return k4 in (0, 1)
    if n4 % 2 == 1:
        return spec.in_alt() and (n4 == 1 or k4 in (0, 1))
    return False


def sgn_and_sgnbar(g: Permutation) -> tuple[int, int]:
    """Sign on the 2n cards and sign on the n pairs ``{i, 2n-1-i}``."""
    d = g.degree
    if d % 2:
        raise NotInBn("odd degree has no central-symmetry pairing")
    im = g.images
    last = d - 1
    half = d // 2
    pairs = [0] * half
    for i in range(half):
        if im[last - i] != last - im[i]:
            raise NotInBn(f"pair {{{i}, {last - i}}} is not mapped to a pair")
        j = im[i]
        pairs[i] = min(j, last - j)
    return sign(g), sign(Permutation(pairs, check=False))
