"""Permutation groups given by generators.

Orders and membership come from a stabiliser chain (base and strong
generating set).  The chain is grown by randomized Schreier-Sims.  It is
then either certified by reaching a proven upper bound on the order (a
partial chain can only undercount) or closed by a deterministic pass over
all Schreier generators, so the final chain is complete regardless of the
random stream that seeded it.  Every group carries the bound d! (d!/2 when
all generators are even); callers that know more add tighter bounds.

Giant recognition (does G contain Alt(d)?) has two routes: compare the exact
order with d!/2, or find a prime cycle witness in a primitive group.  A
witness is a proof, so a group certified that way gets its exact order
without building a chain.
"""

from __future__ import annotations

import enum
import random
import threading
from dataclasses import dataclass
from math import factorial
from typing import Iterable, Sequence

from .perm import DegreeMismatch, Permutation, _cycle_lengths, _inv, _mul


class NotTransitive(ValueError):
    pass


class Verdict(str, enum.Enum):
    CONTAINS_ALT = "ContainsAlt"
    NO_ALT = "DoesNotContainAlt"
    UNKNOWN = "Unknown"


# consecutive trivial sifts before randomized Schreier-Sims hands over to
# the deterministic closing pass
RANDOM_SIFT_PATIENCE = 20
PRODUCT_REPLACEMENT_SLOTS = 10
PRODUCT_REPLACEMENT_BURN_IN = 50
MONTE_CARLO_TRIES = 200


class ProductReplacement:
    """Random group elements by product replacement with an accumulator."""

    def __init__(self, generators: Sequence[tuple], degree: int, rng: random.Random,
                 slots: int = PRODUCT_REPLACEMENT_SLOTS,
                 burn_in: int = PRODUCT_REPLACEMENT_BURN_IN):
        ident = tuple(range(degree))
        gens = [g for g in generators if g != ident] or [ident]
        state = list(gens)
        while len(state) < slots:
            state.extend(gens)
        self._state = state[:max(slots, len(gens))]
        self._acc = ident
        self._rng = rng
        for _ in range(burn_in):
            self.next()

    def next(self) -> tuple:
        state, rng = self._state, self._rng
        i, j = rng.sample(range(len(state)), 2)
        other = state[j] if rng.random() < 0.5 else _inv(state[j])
        if rng.random() < 0.5:
            state[i] = _mul(state[i], other)
        else:
            state[i] = _mul(other, state[i])
        self._acc = _mul(self._acc, state[i])
        return self._acc


class _Level:
    __slots__ = ("point", "gens", "orbit", "reps", "invs")

    def __init__(self, point: int, degree: int):
        ident = tuple(range(degree))
        self.point = point
        self.gens: list[tuple] = []
        self.orbit = [point]
        self.reps: list = [None] * degree
        self.invs: list = [None] * degree
        self.reps[point] = ident
        self.invs[point] = ident

    def add_generator(self, s: tuple) -> None:
        self.gens.append(s)
        reps, invs, orbit = self.reps, self.invs, self.orbit
        fresh = []
        for g in orbit:
            h = s[g]
            if reps[h] is None:
                rep = _mul(reps[g], s)
                reps[h] = rep
                invs[h] = _inv(rep)
                fresh.append(h)
        orbit.extend(fresh)
        queue = fresh
        while queue:
            nxt = []
            for g in queue:
                rep_g = reps[g]
                for t in self.gens:
                    h = t[g]
                    if reps[h] is None:
                        rep = _mul(rep_g, t)
                        reps[h] = rep
                        invs[h] = _inv(rep)
                        nxt.append(h)
            orbit.extend(nxt)
            queue = nxt


class StabChain:
    """Stabiliser chain G = G^(0) >= G^(1) >= ... >= 1 along a base."""

    def __init__(self, degree: int):
        self.degree = degree
        self.identity = tuple(range(degree))
        self.levels: list[_Level] = []

    @property
    def base(self) -> list[int]:
        return [lvl.point for lvl in self.levels]

    def order(self) -> int:
        result = 1
        for lvl in self.levels:
            result *= len(lvl.orbit)
        return result

    def transversal_sizes(self) -> list[int]:
        return [len(lvl.orbit) for lvl in self.levels]

    def strong_generators(self) -> list[tuple]:
        return list(self.levels[0].gens) if self.levels else []

    def sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        """Return the residue of ``g`` and the level at which sifting stopped."""
        levels = self.levels
        for i in range(start, len(levels)):
            lvl = levels[i]
            inv = lvl.invs[g[lvl.point]]
            if inv is None:
                return g, i
            g = _mul(g, inv)
        return g, len(levels)

    def contains(self, g: tuple) -> bool:
        residue, _ = self.sift(g)
        return residue == self.identity

    def add(self, h: tuple, depth: int) -> None:
        """Insert ``h``, which fixes the first ``depth`` base points."""
        if depth == len(self.levels):
            point = next(i for i, x in enumerate(h) if i != x)
            self.levels.append(_Level(point, self.degree))
        for lvl in self.levels[:depth + 1]:
            lvl.add_generator(h)

    def absorb(self, g: tuple, start: int = 0) -> bool:
        residue, depth = self.sift(g, start)
        if residue == self.identity:
            return False
        self.add(residue, depth)
        return True

    def close(self) -> None:
        """Sift every Schreier generator, bottom level upwards, until complete."""
        ident = self.identity
        i = len(self.levels) - 1
        while i >= 0:
            lvl = self.levels[i]
            added_at = None
            for g in list(lvl.orbit):
                rep = lvl.reps[g]
                for s in list(lvl.gens):
                    h = s[g]
                    schreier = _mul(_mul(rep, s), lvl.invs[h])
                    if schreier == ident:
                        continue
                    residue, depth = self.sift(schreier, i + 1)
                    if residue != ident:
                        self.add(residue, depth)
                        added_at = depth
                        break
                if added_at is not None:
                    break
            if added_at is None:
                i -= 1
            else:
                i = added_at


def schreier_sims(generators: Sequence[tuple], degree: int, rng: random.Random,
                  order_bound: int | None = None, close: bool = True) -> StabChain | None:
    """Build a complete stabiliser chain for the group generated by ``generators``.

    The orbit product of a partial chain never exceeds the group order, so
    when ``order_bound`` is a proven upper bound and the chain reaches it the
    chain is complete and the closing pass is skipped.  With ``close=False``
    an uncertified chain is discarded and None returned instead.
    """
    chain = StabChain(degree)
    for g in generators:
        chain.absorb(g)
    if not chain.levels or chain.order() == order_bound:
        return chain
    source = ProductReplacement(generators, degree, rng)
    misses = 0
    while misses < RANDOM_SIFT_PATIENCE:
        if chain.absorb(source.next()):
            misses = 0
            if chain.order() == order_bound:
                return chain
        else:
            misses += 1
    if not close:
        return None
    chain.close()
    return chain


class PermGroup:
    """Subgroup of Sym(d) given by generators, with a lazily built chain.

    Chain construction is guarded by a lock so concurrent first queries build
    it once.
    """

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None,
                 seed: int = 0):
        gens = [g if isinstance(g, Permutation) else Permutation(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree is required for an empty generating set")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatch(f"generator of degree {g.degree} in a group of degree {degree}")
        self.degree = degree
        self.generators = gens
        self.seed = seed
        self._tuples = [g.images for g in gens if not g.is_identity()]
        self._chain: StabChain | None = None
        self._lock = threading.Lock()
        self._giant: str | None = None  # "alt" or "sym" once certified
        full = factorial(degree)
        self._bound = full // 2 if all(_sign_tuple(g) == 1 for g in self._tuples) else full

    @property
    def gen_tuples(self) -> list[tuple]:
        return self._tuples

    def chain(self) -> StabChain:
        with self._lock:
            if self._chain is None:
                rng = random.Random(self.seed)
                self._chain = schreier_sims(self._tuples, self.degree, rng, self._bound)
            return self._chain

    def certified_chain(self) -> StabChain | None:
        """The chain if randomized sifting alone reaches the order bound, else None."""
        with self._lock:
            if self._chain is None:
                rng = random.Random(self.seed)
                self._chain = schreier_sims(self._tuples, self.degree, rng, self._bound, close=False)
            return self._chain

    def note_order_bound(self, bound: int) -> None:
        """Record a proven upper bound on the order (tightens the chain's stopping rule)."""
        if bound < 1:
            raise ValueError("order bound must be positive")
        with self._lock:
            self._bound = min(self._bound, bound)

    @property
    def order_bound(self) -> int:
        return self._bound

    def _giant_order(self) -> int:
        full = factorial(self.degree)
        return full // 2 if self._giant == "alt" else full

    def mark_giant(self) -> None:
        """Record a proof that the group contains Alt(d)."""
        even = all(_sign_tuple(g) == 1 for g in self._tuples)
        self._giant = "alt" if even else "sym"
        self._bound = self._giant_order()

    @property
    def giant(self) -> str | None:
        return self._giant

    def order(self) -> int:
        if self._giant:
            return self._giant_order()
        return self.chain().order()

    def __contains__(self, g: Permutation) -> bool:
        return contains(self, g)

    def random_source(self, rng: random.Random) -> ProductReplacement:
        return ProductReplacement(self._tuples, self.degree, rng)

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, generators={len(self.generators)})"


def _sign_tuple(p: tuple) -> int:
    return -1 if (len(p) - len(_cycle_lengths(p))) % 2 else 1


def generators_even(G: PermGroup) -> bool:
    """True iff G <= Alt(d)."""
    return all(_sign_tuple(g) == 1 for g in G.gen_tuples)


def build_bsgs(G: PermGroup) -> StabChain:
    return G.chain()


def group_order(G: PermGroup) -> int:
    return G.order()


def contains(G: PermGroup, g: Permutation) -> bool:
    if g.degree != G.degree:
        raise DegreeMismatch(f"element of degree {g.degree}, group of degree {G.degree}")
    if G.giant == "sym":
        return True
    if G.giant == "alt":
        return _sign_tuple(g.images) == 1
    return G.chain().contains(g.images)


def orbit(G: PermGroup, x: int) -> set[int]:
    if not 0 <= x < G.degree:
        raise ValueError(f"point {x} outside [0, {G.degree})")
    seen = {x}
    queue = [x]
    gens = G.gen_tuples
    while queue:
        nxt = []
        for y in queue:
            for g in gens:
                z = g[y]
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        queue = nxt
    return seen


def is_transitive(G: PermGroup) -> bool:
    return len(orbit(G, 0)) == G.degree


@dataclass(frozen=True)
class BlockSystem:
    block_of: tuple[int, ...]
    num_blocks: int
    block_size: int

    @property
    def trivial(self) -> bool:
        return self.num_blocks in (1, len(self.block_of))

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for x, b in enumerate(self.block_of):
            out[b].append(x)
        return out

    def preserved_by(self, g: Sequence[int]) -> bool:
        """True if ``g`` maps every block onto a block."""
        image_block: dict[int, int] = {}
        for x, b in enumerate(self.block_of):
            target = self.block_of[g[x]]
            if image_block.setdefault(b, target) != target:
                return False
        return True


def _block_closure(gens: Sequence[tuple], degree: int, a: int, b: int) -> list[int]:
    parent = list(range(degree))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pending = [(a, b)]
    parent[find(b)] = find(a)
    merged = 1
    while pending and merged < degree - 1:
        x, y = pending.pop()
        for g in gens:
            u, v = find(g[x]), find(g[y])
            if u != v:
                parent[v] = u
                merged += 1
                pending.append((u, v))
    return [find(x) for x in range(degree)]


def minimal_blocks(G: PermGroup, a: int, b: int) -> BlockSystem:
    """Finest block system in which ``a`` and ``b`` share a block."""
    if a == b:
        raise ValueError("seed points must differ")
    if not is_transitive(G):
        raise NotTransitive("block systems are computed for transitive groups only")
    roots = _block_closure(G.gen_tuples, G.degree, a, b)
    labels: dict[int, int] = {}
    block_of = tuple(labels.setdefault(r, len(labels)) for r in roots)
    num = len(labels)
    return BlockSystem(block_of, num, G.degree // num)


def is_primitive(G: PermGroup) -> bool:
    if not is_transitive(G):
        return False
    d = G.degree
    gens = G.gen_tuples
    for b in range(1, d):
        roots = _block_closure(gens, d, 0, b)
        if len(set(roots)) > 1:
            return False
    return True


def is_2transitive(G: PermGroup) -> bool:
    d = G.degree
    if d < 2:
        raise ValueError("2-transitivity needs degree at least 2")
    seen = bytearray(d * d)
    seen[1] = 1
    queue = [(0, 1)]
    count = 1
    gens = G.gen_tuples
    while queue:
        nxt = []
        for x, y in queue:
            for g in gens:
                u, v = g[x], g[y]
                key = u * d + v
                if not seen[key]:
                    seen[key] = 1
                    count += 1
                    nxt.append((u, v))
        queue = nxt
    return count == d * (d - 1)


def _primes_between(lo: float, hi: float) -> set[int]:
    """Primes p with lo < p < hi."""
    out = set()
    for p in range(max(2, int(lo) + 1), int(hi) + 1):
        if p <= lo or p >= hi:
            continue
        if all(p % q for q in range(2, int(p ** 0.5) + 1)):
            out.add(p)
    return out


@dataclass(frozen=True)
class GiantWitness:
    element: Permutation
    prime: int

    def prime_cycle(self) -> Permutation:
        """The power of the witness that is a single prime cycle."""
        m = 1
        for length in _cycle_lengths(self.element.images):
            if length != self.prime:
                m = m * length // _gcd(m, length)
        return self.element ** m


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def find_giant_witness(G: PermGroup, rng: random.Random,
                       tries: int = MONTE_CARLO_TRIES) -> GiantWitness | None:
    """Search random elements for a cycle of prime length p, d/2 < p < d-2.

    Such a cycle is the only one of its length, so a suitable power of the
    element is a p-cycle; a primitive group containing one contains Alt(d).
    """
    d = G.degree
    primes = _primes_between(d / 2, d - 2)
    if not primes or not G.gen_tuples:
        return None
    source = G.random_source(rng)
    for _ in range(tries):
        g = source.next()
        for length in _cycle_lengths(g):
            if length in primes:
                return GiantWitness(Permutation(g, check=False), length)
    return None


def contains_alternating(G: PermGroup, mode: str = "deterministic",
                         rng: random.Random | None = None,
                         tries: int = MONTE_CARLO_TRIES) -> Verdict:
    d = G.degree
    if mode == "deterministic":
        return Verdict.CONTAINS_ALT if 2 * G.order() >= factorial(d) else Verdict.NO_ALT
    if mode != "monte_carlo":
        raise ValueError(f"unknown mode {mode!r}")
    if G.giant:
        return Verdict.CONTAINS_ALT
    if d < 5:
        return Verdict.UNKNOWN
    if not is_primitive(G):
        return Verdict.NO_ALT
    witness = find_giant_witness(G, rng or random.Random(G.seed), tries)
    if witness is None:
        return Verdict.UNKNOWN
    G.mark_giant()
    return Verdict.CONTAINS_ALT


def elements(G: PermGroup, limit: int) -> list[tuple] | None:
    """All elements by closure under the generators, or None past ``limit``."""
    ident = tuple(range(G.degree))
    seen = {ident}
    queue = [ident]
    while queue:
        nxt = []
        for x in queue:
            for g in G.gen_tuples:
                y = _mul(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > limit:
                        return None
                    nxt.append(y)
        queue = nxt
    return list(seen)


def minimal_degree_brute(G: PermGroup, element_budget: int = 10 ** 5) -> int | None:
    """Least support size of a non-identity element; None if too many elements."""
    if G.order() > element_budget:
        return None
    best = None
    for g in elements(G, element_budget):
        moved = sum(1 for i, x in enumerate(g) if i != x)
        if moved and (best is None or moved < best):
            best = moved
    return best
