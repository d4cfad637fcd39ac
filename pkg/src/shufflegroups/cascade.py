"""Cascading shuffle groups G_t = Sh(V_t, 2^(e-t) n), t = 1..e, on 2^e n cards.

V_t is the bit-flip group on [2^t]: v_{t,s} flips bit s (bit 0 least
significant).  All G_t act on the same deck, which lets them be compared
directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bsgs import PermGroup
from .perm import Permutation
from .shuffle import DeckSpec, bit_flip, integer_log, pile_perm, standard_shuffle
from .structure import (
    BudgetExceeded,
    central_pair_kernels,
    hyperoctahedral_order,
    kernel_order,
    KERNEL_TAGS,
)

MAX_CASCADE_DEGREE = 96


@dataclass(frozen=True)
class CascadeSpec:
    e: int
    n: int

    def __post_init__(self):
        if self.e < 2:
            raise ValueError(f"need e >= 2, got {self.e}")
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        if self.n & (self.n - 1) == 0:
            raise ValueError(f"n = {self.n} is a power of 2")

    @property
    def k(self) -> int:
        return 2 ** self.e

    @property
    def degree(self) -> int:
        return 2 ** self.e * self.n

    def deck(self, t: int) -> DeckSpec:
        """The deck of G_t: 2^t piles of 2^(e-t) n cards."""
        return DeckSpec(2 ** t, 2 ** (self.e - t) * self.n)


def v_generator(t: int, s: int) -> Permutation:
    return bit_flip(t, s)


def rho_t_embed(tau: Permutation, e: int, n: int) -> Permutation:
    """Move blocks of 2^(e-t) n consecutive cards rigidly by ``tau`` on [2^t]."""
    t = integer_log(tau.degree, 2)
    if t is None:
        raise ValueError(f"pile permutation degree {tau.degree} is not a power of 2")
    if t > e:
        raise ValueError(f"t = {t} exceeds e = {e}")
    return pile_perm(tau, DeckSpec(2 ** t, 2 ** (e - t) * n))


def cascade_generators(spec: CascadeSpec, t: int) -> list[Permutation]:
    deck = spec.deck(t)
    return [standard_shuffle(deck)] + [pile_perm(v_generator(t, s), deck) for s in range(t)]


def _bounded_group(gens: list[Permutation], degree: int) -> PermGroup:
    G = PermGroup(gens, degree=degree)
    kernels = central_pair_kernels(G.gen_tuples, degree)
    if kernels is not None:
        G.note_order_bound(kernel_order(KERNEL_TAGS[kernels], degree // 2))
    return G


def cascade_groups(spec: CascadeSpec) -> list[PermGroup]:
    """[G_1, ..., G_e]."""
    return [_bounded_group(cascade_generators(spec, t), spec.degree)
            for t in range(1, spec.e + 1)]


def subgroup_of(H: PermGroup, G: PermGroup) -> bool:
    return all(g in G for g in H.generators)


def same_group(G: PermGroup, H: PermGroup) -> bool:
    return subgroup_of(G, H) and subgroup_of(H, G)


@dataclass(frozen=True)
class BranchPrediction:
    branch: int
    orders: tuple[int, ...]
    all_equal: bool
    kernel: str | None = None  # kernel tag of G_e within B_(degree/2)


def predicted_branch(spec: CascadeSpec) -> BranchPrediction:
    k, n, e = spec.k, spec.n, spec.e
    m = 2 ** (e - 1) * n
    if (k, n) == (4, 3):
        return BranchPrediction(1, (7680, 3840), False)
    if (k, n) == (4, 6):
        return BranchPrediction(2, (194641920,) * 2, True)
    if (k, n) == (8, 3):
        return BranchPrediction(3, (194641920,) * 3, True)
    if k == 4 and n >= 5 and n % 2:
        full = hyperoctahedral_order(m)
        return BranchPrediction(4, (full, full // 2), False, "KerSgn")
    return BranchPrediction(5, (kernel_order("KerBoth", m),) * e, True, "KerBoth")


@dataclass
class CascadeReport:
    spec: CascadeSpec
    checks: dict[str, bool] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    orders: list[int] = field(default_factory=list)
    equal_to_next: list[bool] = field(default_factory=list)
    kernel: str | None = None
    prediction: BranchPrediction | None = None

    @property
    def lemmas_hold(self) -> bool:
        return all(self.checks.values())

    @property
    def branch_matches(self) -> bool:
        p = self.prediction
        if p is None or tuple(self.orders) != p.orders:
            return False
        if p.all_equal != all(self.equal_to_next):
            return False
        return p.kernel is None or p.kernel == self.kernel

    @property
    def ok(self) -> bool:
        return self.lemmas_hold and self.branch_matches


def verify_cascade_lemmas(spec: CascadeSpec, max_degree: int = MAX_CASCADE_DEGREE) -> CascadeReport:
    """Check the shuffle-power, bit-flip and normalising identities, then the
    orders and equalities of the cascade against the predicted branch."""
    if spec.degree > max_degree:
        raise BudgetExceeded(f"cascade degree {spec.degree} exceeds {max_degree}")
    e, n, d = spec.e, spec.n, spec.degree
    report = CascadeReport(spec)

    def check(name: str, ok: bool, detail: str = "") -> None:
        report.checks[name] = report.checks.get(name, True) and ok
        if not ok:
            report.failures.append(f"{name}: {detail}")

    sigma = standard_shuffle(spec.deck(1))
    for t in range(1, e + 1):
        sigma_t = standard_shuffle(spec.deck(t))
        check("shuffle power", sigma_t == sigma ** t, f"sigma_{t} != sigma^{t}")

    full = DeckSpec(spec.k, n)
    x = [pile_perm(v_generator(e, r), full) for r in range(e)]
    for t in range(1, e + 1):
        for s in range(t):
            lhs = rho_t_embed(v_generator(t, s), e, n)
            check("bit-flip embedding", lhs == x[e - t + s],
                  f"rho_{t}(v_{t},{s}) != x_{e - t + s}")
    for r in range(e - 1):
        check("shift conjugation", x[r].conjugate(sigma) == x[r + 1], f"x_{r}^sigma != x_{r + 1}")

    groups = cascade_groups(spec)
    for t, G in enumerate(groups, start=1):
        H = _bounded_group(x[e - t:] + [sigma ** t], d)
        check("generating set", same_group(G, H), f"G_{t} != <x_{e - t}..x_{e - 1}, sigma^{t}>")
        check("inside G_1", subgroup_of(G, groups[0]), f"G_{t} is not contained in G_1")
        if t < e:
            nxt = groups[t]
            bad = [(a, b) for a in G.generators for b in nxt.generators if b.conjugate(a) not in nxt]
            check("normalises next", not bad, f"G_{t} does not normalise G_{t + 1}")

    report.orders = [G.order() for G in groups]
    report.equal_to_next = [same_group(groups[i], groups[i + 1]) for i in range(e - 1)]
    kernels = central_pair_kernels(groups[-1].gen_tuples, d)
    if kernels is not None:
        tag = KERNEL_TAGS[kernels]
        if report.orders[-1] == kernel_order(tag, d // 2):
            report.kernel = tag
    report.prediction = predicted_branch(spec)
    return report
