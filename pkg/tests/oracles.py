"""Independent reference computations used by the tests.

Nothing here imports the package: these are slow, obvious implementations
(card dealing simulations, closure enumeration, inversion counts) that the
library results are checked against.
"""

from __future__ import annotations

from math import factorial, gcd, prod


def compose(p, q):
    """First p, then q."""
    return tuple(q[p[i]] for i in range(len(p)))


def inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def sign_by_inversions(p) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1 if inv % 2 else 1


def power(p, m):
    r = tuple(range(len(p)))
    for _ in range(m):
        r = compose(r, p)
    return r


def order_by_powering(p) -> int:
    ident = tuple(range(len(p)))
    q, m = p, 1
    while q != ident:
        q = compose(q, p)
        m += 1
    return m


def closure(gens, degree, limit=10 ** 6):
    """All elements of <gens> by breadth-first multiplication."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if len(seen) > limit:
            raise OverflowError("group too large to enumerate")
        frontier = nxt
    return seen


def dealt_shuffle(k, n):
    """Simulate the shuffle: piles of n consecutive cards, then pick up the top
    card of each pile left to right, repeatedly.  Returns card -> new position."""
    piles = [list(range(a * n, (a + 1) * n)) for a in range(k)]
    order = []
    for depth in range(n):
        for pile in piles:
            order.append(pile[depth])
    position = [0] * (k * n)
    for pos, card in enumerate(order):
        position[card] = pos
    return tuple(position)


def dealt_pile_move(tau, n):
    """Rearrange whole piles by tau (pile a goes to slot tau[a]); card -> new position."""
    k = len(tau)
    slots = [None] * k
    for a in range(k):
        slots[tau[a]] = list(range(a * n, (a + 1) * n))
    position = [0] * (k * n)
    for s, pile in enumerate(slots):
        for depth, card in enumerate(pile):
            position[card] = s * n + depth
    return tuple(position)


def support_size(p) -> int:
    return sum(1 for i, x in enumerate(p) if i != x)


def min_support(elements) -> int:
    return min(support_size(g) for g in elements if support_size(g))


def agl_order(d, p):
    return p ** d * prod(p ** d - p ** i for i in range(d))


def b_order(m):
    return 2 ** m * factorial(m)


def digits_msd(i, base, width):
    out = []
    for _ in range(width):
        out.append(i % base)
        i //= base
    return tuple(reversed(out))


def product_action_element(maps, perm, base):
    """(x_0..x_{m-1}) -> y with y[perm[r]] = maps[r][x_r]."""
    m = len(perm)
    images = []
    for i in range(base ** m):
        x = digits_msd(i, base, m)
        y = [0] * m
        for r in range(m):
            y[perm[r]] = maps[r][x[r]]
        v = 0
        for c in y:
            v = v * base + c
        images.append(v)
    return tuple(images)


def sigma_order_power_case(e, f):
    return (e + f) // gcd(e, f)
