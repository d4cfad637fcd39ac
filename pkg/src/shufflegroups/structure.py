"""Identify the structure of a shuffle group and predict it from (P, k, n).

``classify`` observes: it computes the group and names what it finds.
``expected_structure`` predicts from the parameters alone, using the known
results on shuffle groups; predictions resting on conjectures or on
published computations rather than proofs are flagged ``conjectural``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import factorial, gcd
from typing import Sequence

from . import bsgs
from .bsgs import PermGroup
from .perm import Permutation, order_of
from .shuffle import (
    DeckSpec,
    NotInBn,
    PileGroupSpec,
    affine_group_order,
    from_digits,
    integer_log,
    is_prime,
    parity_containment,
    sgn_and_sgnbar,
    shuffle_group,
    standard_shuffle,
    to_digits,
)

EXACT_DEGREE = 600
MAX_DEGREE = 2000


class BudgetExceeded(RuntimeError):
    pass


# (degree, order) -> name; identification by fingerprint only
EXCEPTIONAL = {
    (12, 7680): "2^6:PGL(2,5)",
    (24, 194641920): "2^11:M12",
    (8, 1344): "AGL(3,2)",
    (12, 3840): "2^5:Sym(5)",
}

KERNEL_TAGS = {
    frozenset(): "BnFull",
    frozenset({"sgn"}): "KerSgn",
    frozenset({"sgnbar"}): "KerSgnBar",
    frozenset({"sgn*sgnbar"}): "KerSgnSgnBar",
    frozenset({"sgn", "sgnbar", "sgn*sgnbar"}): "KerBoth",
}


def hyperoctahedral_order(m: int) -> int:
    return 2 ** m * factorial(m)


def product_wreath_order(ell: int, m: int) -> int:
    """|Sym(ell) wr Sym(m)|."""
    return factorial(ell) ** m * factorial(m)


def kernel_order(tag: str, m: int) -> int:
    index = {"BnFull": 1, "KerSgn": 2, "KerSgnBar": 2, "KerSgnSgnBar": 2, "KerBoth": 4}[tag]
    return hyperoctahedral_order(m) // index


@dataclass(frozen=True)
class PowerCaseParams:
    l: int
    e: int
    f: int

    @property
    def m(self) -> int:
        return self.e + self.f


def _factorize(x: int) -> dict[int, int]:
    out: dict[int, int] = {}
    q = 2
    while q * q <= x:
        while x % q == 0:
            out[q] = out.get(q, 0) + 1
            x //= q
        q += 1
    if x > 1:
        out[x] = out.get(x, 0) + 1
    return out


def power_case_params(deck: DeckSpec) -> PowerCaseParams | None:
    """The base ``l`` (not a proper power) with k = l^e and n = l^f, if any."""
    fk, fn = _factorize(deck.k), _factorize(deck.n)
    if fk.keys() != fn.keys():
        return None
    e = f = 0
    for q in fk:
        e = gcd(e, fk[q])
        f = gcd(f, fn[q])
    ell_k = {q: a // e for q, a in fk.items()}
    ell_n = {q: b // f for q, b in fn.items()}
    if ell_k != ell_n:
        return None
    ell = 1
    for q, a in ell_k.items():
        ell *= q ** a
    return PowerCaseParams(ell, e, f)


def shift_map(ell: int, m: int, e: int) -> Permutation:
    """Left shift of the digit tuple in [ell]^m by ``e`` places."""
    images = []
    for i in range(ell ** m):
        x = to_digits(i, ell, m)
        images.append(from_digits(x[e:] + x[:e], ell))
    return Permutation(images, check=False)


def verify_shift_action(deck: DeckSpec, params: PowerCaseParams) -> bool:
    """The standard shuffle is the left shift by e on digit tuples, of order (e+f)/gcd(e,f)."""
    ell, e, f = params.l, params.e, params.f
    if ell ** e != deck.k or ell ** f != deck.n:
        raise ValueError(f"{params} does not describe k={deck.k}, n={deck.n}")
    sigma = standard_shuffle(deck)
    return sigma == shift_map(ell, e + f, e) and order_of(sigma) == (e + f) // gcd(e, f)


def affine_decomposition(g: Sequence[int], p: int, d: int):
    """Return (M, c) with g(x) = x*M + c on F_p^d, or None if g is not affine."""
    c = to_digits(g[0], p, d)
    rows = []
    for r in range(d):
        img = to_digits(g[p ** (d - 1 - r)], p, d)
        rows.append(tuple((img[j] - c[j]) % p for j in range(d)))
    for i in range(p ** d):
        x = to_digits(i, p, d)
        y = [(sum(x[r] * rows[r][j] for r in range(d)) + c[j]) % p for j in range(d)]
        if from_digits(y, p) != g[i]:
            return None
    return rows, c


def check_affine(G: PermGroup, p: int, d: int) -> int | None:
    """Order of the group of linear parts if every generator is affine, else None."""
    if not is_prime(p) or d < 1:
        raise ValueError(f"degree must be a prime power, got p={p}, d={d}")
    if G.degree != p ** d:
        raise ValueError(f"degree {G.degree} is not {p}^{d}")
    linear = []
    for g in G.gen_tuples:
        dec = affine_decomposition(g, p, d)
        if dec is None:
            return None
        rows, _ = dec
        images = []
        for i in range(p ** d):
            x = to_digits(i, p, d)
            images.append(from_digits([sum(x[r] * rows[r][j] for r in range(d)) % p
                                       for j in range(d)], p))
        lin = Permutation(images, check=False)
        if not lin.is_identity():
            linear.append(lin)
    return PermGroup(linear, degree=G.degree).order() if linear else 1


def product_decomposition(g: Sequence[int], ell: int, m: int):
    """Return (coord_maps, coord_perm) if g acts coordinatewise on [ell]^m, else None.

    The image coordinate ``coord_perm[r]`` is the only one that depends on
    input coordinate ``r``.
    """
    origin = to_digits(g[0], ell, m)
    coord_perm = [-1] * m
    maps = [[0] * ell for _ in range(m)]
    for r in range(m):
        weight = ell ** (m - 1 - r)
        changed = set()
        columns = []
        for v in range(ell):
            img = to_digits(g[v * weight], ell, m)
            columns.append(img)
            changed.update(j for j in range(m) if img[j] != origin[j])
        if len(changed) != 1:
            return None
        (c,) = changed
        coord_perm[r] = c
        maps[r] = [col[c] for col in columns]
    if sorted(coord_perm) != list(range(m)):
        return None
    for i in range(ell ** m):
        x = to_digits(i, ell, m)
        y = [0] * m
        for r in range(m):
            y[coord_perm[r]] = maps[r][x[r]]
        if from_digits(y, ell) != g[i]:
            return None
    return maps, coord_perm


def check_product_action(G: PermGroup, ell: int, m: int) -> bool:
    """True iff every generator lies in Sym(ell) wr Sym(m) in product action."""
    if ell < 2 or m < 1 or G.degree != ell ** m:
        raise ValueError(f"degree {G.degree} is not {ell}^{m}")
    return all(product_decomposition(g, ell, m) is not None for g in G.gen_tuples)


def in_cyclic_wreath(G: PermGroup, P: PermGroup, c: int) -> bool:
    """True iff every generator acts on [k]^c by maps from P followed by a
    rotation of the coordinates, so that G <= P wr C_c."""
    k = P.degree
    rotations = {tuple((r + s) % c for r in range(c)) for s in range(c)}
    for g in G.gen_tuples:
        dec = product_decomposition(g, k, c)
        if dec is None:
            return False
        maps, coord_perm = dec
        if tuple(coord_perm) not in rotations:
            return False
        if not all(Permutation(m_, check=False) in P for m_ in maps):
            return False
    return True


def central_pair_kernels(gens: Sequence[Sequence[int]], degree: int) -> frozenset[str] | None:
    """Characters among sgn, sgnbar and their product that vanish on every
    generator, or None if some generator breaks the pairs {i, d-1-i}."""
    if degree % 2:
        return None
    trivial = {"sgn", "sgnbar", "sgn*sgnbar"}
    for g in gens:
        try:
            s, b = sgn_and_sgnbar(Permutation(g, check=False))
        except NotInBn:
            return None
        if s != 1:
            trivial.discard("sgn")
        if b != 1:
            trivial.discard("sgnbar")
        if s * b != 1:
            trivial.discard("sgn*sgnbar")
    return frozenset(trivial)


@dataclass
class Classification:
    tag: str
    params: dict
    order: int
    degree: int
    transitive: bool
    primitive: bool
    two_transitive: bool | None
    in_alt: bool
    flags: dict = field(default_factory=dict)
    note: str = ""

    def label(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.tag}({inner})"

    def to_json(self) -> dict:
        return {"tag": self.tag, "params": dict(self.params), **self.flags}


@dataclass(frozen=True)
class Prediction:
    tag: str
    params: dict
    order: int | None
    conjectural: bool
    source: str

    def label(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.tag}({inner})"

    def to_json(self) -> dict:
        return {"tag": self.tag, "params": dict(self.params),
                "order": None if self.order is None else str(self.order),
                "conjectural": self.conjectural, "source": self.source}

    def matches(self, c: Classification) -> bool:
        if self.tag != c.tag or self.params != c.params:
            return False
        return self.order is None or self.order == c.order


def _giant(deck: DeckSpec, even: bool, conjectural: bool, source: str) -> Prediction:
    d = deck.degree
    if even:
        return Prediction("AltFull", {"degree": d}, factorial(d) // 2, conjectural, source)
    return Prediction("SymFull", {"degree": d}, factorial(d), conjectural, source)


def _kernel(tag: str, m: int, source: str) -> Prediction:
    return Prediction(tag, {"n": m}, kernel_order(tag, m), False, source)


def _exceptional(name: str, degree: int, source: str) -> Prediction:
    order = next(o for (d, o), nm in EXCEPTIONAL.items() if nm == name and d == degree)
    return Prediction("Exceptional", {"name": name}, order, False, source)


def _affine_full(p: int, d: int, source: str) -> Prediction:
    return Prediction("AffineFull", {"p": p, "d": d}, affine_group_order(d, p), False, source)


def two_pile_prediction(n: int) -> Prediction:
    """The shuffle group on 2n cards, by n."""
    src = "two-pile classification"
    if integer_log(n, 2) is not None:
        c = integer_log(n, 2) + 1
        return Prediction("WreathCyclic", {"base": "sym", "k": 2, "cycle_len": c},
                          2 ** c * c, False, src)
    if n == 6:
        return _exceptional("2^6:PGL(2,5)", 12, src)
    if n == 12:
        return _exceptional("2^11:M12", 24, src)
    tag = {0: "KerBoth", 1: "KerSgnBar", 2: "BnFull", 3: "KerSgnSgnBar"}[n % 4]
    return _kernel(tag, n, src)


def conjectured_sym_giant(k: int, n: int) -> bool | None:
    """Alt (True) or Sym (False) for Sh(Sym(k), n) under the maximality conjecture;
    None outside its hypotheses."""
    if k < 3 or integer_log(n, k) is not None or (k == 4 and integer_log(n, 2) is not None):
        return None
    k4, n4 = k % 4, n % 4
    if n4 == 0 or (k4, n4) in ((0, 2), (1, 2)):
        return True
    return False


def cascade_prediction(e: int, n: int) -> Prediction:
    """Structure of Sh(V_e, n) for k = 2^e >= 4 and n not a power of two."""
    src = "cascading groups"
    k = 2 ** e
    if (k, n) == (4, 3):
        return _exceptional("2^5:Sym(5)", 12, src)
    if (k, n) in ((4, 6), (8, 3)):
        return _exceptional("2^11:M12", 24, src)
    if k == 4 and n >= 5 and n % 2:
        return _kernel("KerSgn", 2 * n, src)
    return _kernel("KerBoth", 2 ** (e - 1) * n, src)


def expected_structure(spec: PileGroupSpec, deck: DeckSpec) -> Prediction | None:
    """Predicted structure of Sh(P, n); None where nothing is claimed."""
    k, n = deck.k, deck.n
    kind = spec.kind
    even = parity_containment(spec, deck)

    c = integer_log(n, k)
    if c is not None:
        c += 1
        return Prediction("WreathCyclic", {"base": spec.label, "k": k, "cycle_len": c},
                          spec.order() ** c * c, False, "power of the pile count")
    if k == 2:
        return two_pile_prediction(n)
    if kind == "wreath":
        ell, e = spec.params
        f = integer_log(n, ell)
        if f is not None and f % e:
            m = e + f
            return Prediction("ProductAction", {"l": ell, "m": m}, product_wreath_order(ell, m),
                              False, "product structure")
    if kind == "agl":
        e, p = spec.params
        f = integer_log(n, p)
        if f is not None and f % e:
            return _affine_full(p, e + f, "affine structure")
    if kind == "sym" and k == 4 and integer_log(n, 2) is not None:
        return _affine_full(2, integer_log(n, 2) + 2, "affine structure")
    if k > n and (kind == "sym" or (kind == "alt" and k >= 4)):
        if (k, n) == (4, 2):
            return _affine_full(2, 3, "more piles than cards")
        return _giant(deck, even, False, "more piles than cards")
    if kind == "agl" and k > n and k >= 3 and integer_log(n, spec.params[1]) is None:
        return _giant(deck, even, False, "affine pile group, more piles than cards")
    if kind == "sym":
        pc = power_case_params(deck)
        if pc is not None and pc.f % pc.e and k != 4:
            return _giant(deck, pc.l % 2 == 0, False, "power case")
        e = integer_log(k, 2)
        if e is not None and e >= 2 and integer_log(n, 2) is None:
            return _giant(deck, n % 2 == 0, False, "pile count a power of two")
        alt = conjectured_sym_giant(k, n)
        if alt is not None:
            return _giant(deck, alt, True, "maximality conjecture")
    if kind == "elem2":
        (t,) = spec.params
        if t >= 2 and integer_log(n, 2) is None:
            return cascade_prediction(t, n)
    if kind == "cyclic" and n > k and (3 <= k <= 13 or is_prime(k)):
        if not (k == 4 and integer_log(n, 2) is not None):
            return _giant(deck, even, True, "cyclic pile group computations")
    return None


def _certified_order(G: PermGroup, exact_degree: int) -> int:
    if G.giant or G.degree <= exact_degree:
        return G.order()
    chain = G.certified_chain()
    if chain is None:
        raise BudgetExceeded(
            f"degree {G.degree} exceeds the exact limit {exact_degree} and no certificate was found")
    return chain.order()


def classify(spec: PileGroupSpec, deck: DeckSpec, *, seed: int = 0,
             exact_degree: int = EXACT_DEGREE, max_degree: int = MAX_DEGREE) -> Classification:
    """Compute Sh(P, n) and name its structure."""
    d = deck.degree
    if d > max_degree:
        raise BudgetExceeded(f"degree {d} exceeds the budget {max_degree}")
    G = shuffle_group(spec, deck, seed=seed)
    transitive = bsgs.is_transitive(G)
    in_alt = bsgs.generators_even(G)
    primitive = bsgs.is_primitive(G)
    if primitive and d >= 5:
        bsgs.contains_alternating(G, "monte_carlo", random.Random(seed))

    flags = {"affine": False, "product_action": False}
    k, n = deck.k, deck.n
    kernels = central_pair_kernels(G.gen_tuples, d)
    if kernels is not None:
        G.note_order_bound(kernel_order(KERNEL_TAGS[kernels], d // 2))

    c = integer_log(n, k)
    wreath_cyclic = False
    if c is not None and not G.giant:
        c += 1
        wreath_cyclic = in_cyclic_wreath(G, spec.group(), c)
        if wreath_cyclic:
            G.note_order_bound(spec.order() ** c * c)

    pc = power_case_params(deck)
    affine_ok = False
    product_bases: list[tuple[int, int]] = []
    if pc is not None and not G.giant:
        if is_prime(pc.l) and check_affine(G, pc.l, pc.m) is not None:
            affine_ok = True
            G.note_order_bound(affine_group_order(pc.m, pc.l))
        candidates = []
        if spec.kind == "wreath":
            candidates.append(spec.params[0])
        candidates.append(pc.l)
        for ell in dict.fromkeys(candidates):
            m = integer_log(d, ell)
            if m is not None and check_product_action(G, ell, m):
                product_bases.append((ell, m))
                G.note_order_bound(product_wreath_order(ell, m))
    flags["affine"] = affine_ok
    flags["product_action"] = bool(product_bases) or wreath_cyclic

    order = _certified_order(G, exact_degree)
    if not G.giant and 2 * order >= factorial(d):
        G.mark_giant()

    if G.giant:
        two_trans: bool | None = d >= 4 or G.giant == "sym"
    elif not primitive:
        two_trans = False
    elif d <= exact_degree:
        two_trans = bsgs.is_2transitive(G)
    else:
        two_trans = None

    def result(tag: str, params: dict, note: str = "") -> Classification:
        return Classification(tag, params, order, d, transitive, primitive, two_trans,
                              in_alt, flags, note)

    if G.giant == "alt":
        return result("AltFull", {"degree": d})
    if G.giant == "sym":
        return result("SymFull", {"degree": d})

    if wreath_cyclic and order == spec.order() ** c * c:
        return result("WreathCyclic", {"base": spec.label, "k": k, "cycle_len": c})

    if kernels is not None:
        tag = KERNEL_TAGS[kernels]
        if order == kernel_order(tag, d // 2):
            return result(tag, {"n": d // 2})

    if pc is not None:
        if affine_ok and order == affine_group_order(pc.m, pc.l):
            return result("AffineFull", {"p": pc.l, "d": pc.m})
        for ell, m in product_bases:
            if order == product_wreath_order(ell, m):
                return result("ProductAction", {"l": ell, "m": m})
        if affine_ok:
            return result("AffineProper", {"p": pc.l, "d": pc.m, "order": order})

    name = EXCEPTIONAL.get((d, order))
    if name is not None:
        return result("Exceptional", {"name": name}, "identified by degree and order")
    return result("Other", {"order": order})
