"""Acceptance criteria, each checked exactly and against its time limit.

Run with pytest (PASS/FAIL lines appear in the terminal summary) or as a
script: ``python tests/test_acceptance.py``.
"""

import json
import random
import sys
import tempfile
import time
from math import factorial, gcd
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from shufflegroups import cli  # noqa: E402
from shufflegroups.bsgs import PermGroup, minimal_degree_brute  # noqa: E402
from shufflegroups.cascade import (  # noqa: E402
    CascadeSpec,
    rho_t_embed,
    v_generator,
    verify_cascade_lemmas,
)
from shufflegroups.perm import Permutation, order_of, sign  # noqa: E402
from shufflegroups.shuffle import (  # noqa: E402
    DeckSpec,
    PileGroupSpec,
    parity_containment,
    pile_perm,
    product_action_generators,
    shuffle_by_multiplication,
    shuffle_by_rows,
    shuffle_generators,
    shuffle_group,
    standard_shuffle,
    symmetric_generators,
)
from shufflegroups.structure import classify, power_case_params, verify_shift_action  # noqa: E402

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:
    ACCEPTANCE_LINES = []


def criterion(number, title, limit_s):
    def wrap(fn):
        def run():
            start = time.perf_counter()
            error = None
            try:
                fn()
            except AssertionError as exc:
                error = exc
            elapsed = time.perf_counter() - start
            in_time = elapsed < limit_s
            ok = error is None and in_time
            detail = "" if error is None else f" ({error})"
            if error is None and not in_time:
                detail = " (too slow)"
            line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} [{elapsed:.1f}s / {limit_s}s]{detail}"
            ACCEPTANCE_LINES.append(line)
            print(line)
            if error is not None:
                raise error
            assert in_time, f"took {elapsed:.1f}s, limit {limit_s}s"
        run.__name__ = fn.__name__
        run.criterion = number
        return run
    return wrap


def order(kind, k, n, params=()):
    return shuffle_group(PileGroupSpec(kind, k, params), DeckSpec(k, n)).order()


def giant_kind(spec, deck):
    gens = shuffle_generators(spec.generators(), deck)
    return "AltFull" if all(oracles.sign_by_inversions(g.images) == 1 for g in gens) else "SymFull"


@criterion(1, "two-pile table for n = 2..16", 30)
def test_criterion_1_two_pile_table():
    b = oracles.b_order
    expected = {
        2: 8, 3: 24, 4: 24, 5: b(5) // 2, 6: 7680, 7: b(7) // 2, 8: 64, 9: b(9) // 2,
        10: b(10), 11: b(11) // 2, 12: 194641920, 13: b(13) // 2, 14: b(14), 15: b(15) // 2,
        16: 160,
    }
    assert expected[5] == 1920 and expected[7] == 2 ** 7 * factorial(7) // 2
    for n in range(2, 17):
        rec = cli.make_record(2, n, "sym")
        assert rec["match"] is True, (n, rec["classification"], rec["expected"])
        assert int(rec["order"]) == expected[n], n


@criterion(2, "power case orders", 10)
def test_criterion_2_power_case():
    assert order("sym", 4, 8) == oracles.agl_order(5, 2) == 319979520
    assert order("sym", 3, 3) == 72
    assert order("sym", 4, 4) == factorial(4) ** 2 * 2 == 1152


@criterion(3, "Sh(Sym(9),3) = Sym(27)", 60)
def test_criterion_3_sym27():
    c = classify(PileGroupSpec("sym", 9), DeckSpec(9, 3))
    assert c.tag == "SymFull" and c.order == factorial(27)


@criterion(4, "primitive iff k >= 3", 60)
def test_criterion_4_primitivity():
    for k in range(2, 7):
        for n in range(2, 9):
            c = classify(PileGroupSpec("sym", k), DeckSpec(k, n))
            assert c.primitive == (k >= 3), (k, n)


@criterion(5, "more piles than cards gives a giant", 120)
def test_criterion_5_k_greater_than_n():
    for k in range(3, 8):
        for n in range(2, k):
            spec, deck = PileGroupSpec("sym", k), DeckSpec(k, n)
            c = classify(spec, deck)
            if (k, n) == (4, 2):
                assert c.order == 1344
                continue
            want = giant_kind(spec, deck)
            assert c.tag == want, (k, n, c.tag)
            assert c.order == (factorial(k * n) // 2 if want == "AltFull" else factorial(k * n))


@criterion(6, "affine pile groups give giants", 120)
def test_criterion_6_affine_piles():
    for params, k, n in [((1, 7), 7, 4), ((1, 5), 5, 3), ((1, 13), 13, 5), ((3, 2), 8, 5)]:
        c = classify(PileGroupSpec("agl", k, params), DeckSpec(k, n))
        assert c.tag in ("AltFull", "SymFull"), (params, n, c.tag)
        assert c.order >= factorial(k * n) // 2


@criterion(7, "cascading groups, all five branches", 300)
def test_criterion_7_cascade():
    b = oracles.b_order
    r = verify_cascade_lemmas(CascadeSpec(2, 3))
    assert r.orders == [7680, 3840] and r.equal_to_next == [False] and r.ok
    r = verify_cascade_lemmas(CascadeSpec(2, 6))
    assert r.orders == [194641920] * 2 and r.equal_to_next == [True] and r.ok
    r = verify_cascade_lemmas(CascadeSpec(3, 3))
    assert r.orders == [194641920] * 3 and all(r.equal_to_next) and r.ok
    r = verify_cascade_lemmas(CascadeSpec(2, 7))
    assert r.orders == [b(14), b(14) // 2] and r.equal_to_next == [False] and r.ok
    for e, n in [(2, 10), (3, 5)]:
        m = 2 ** (e - 1) * n
        r = verify_cascade_lemmas(CascadeSpec(e, n))
        assert r.orders == [b(m) // 4] * e and all(r.equal_to_next) and r.ok, (e, n)


def conjectured(k, n):
    k4, n4 = k % 4, n % 4
    if n4 == 0 or (k4, n4) in ((0, 2), (1, 2)):
        return "AltFull"
    return "SymFull"


@criterion(8, "conjecture sweeps", 900)
def test_criterion_8_sweeps():
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "cyclic.jsonl"
        cli.run_sweep("cyclic", [3, 5], 2, 30, str(out), quiet=True)
        recs = read_jsonl(out)
        powers = {3: (9, 27), 5: (25,)}
        want = {(k, n) for k in (3, 5) for n in range(k + 1, 31) if n not in powers[k]}
        assert {(r["k"], r["n"]) for r in recs} == want
        bad = [(r["k"], r["n"]) for r in recs if r["classification"]["tag"] not in ("AltFull", "SymFull")]
        assert not bad, bad

        out = Path(tmp) / "sym.jsonl"
        cli.run_sweep("sym", [3, 4, 5], 2, 40, str(out), quiet=True)
        recs = read_jsonl(out)
        assert len(recs) > 100
        bad = [(r["k"], r["n"], r["classification"]["tag"]) for r in recs
               if r["classification"]["tag"] != conjectured(r["k"], r["n"])]
        assert not bad, bad


def read_jsonl(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


@criterion(9, "property suites", 300)
def test_criterion_9_properties():
    rng = random.Random(2024)

    def rperm(d):
        x = list(range(d))
        rng.shuffle(x)
        return Permutation(x)

    for _ in range(500):
        d = rng.randint(1, 20)
        p, q, r = rperm(d), rperm(d), rperm(d)
        assert (p * q) * r == p * (q * r)
        assert (p * p.inverse()).is_identity()
        assert (p * q).images == oracles.compose(p.images, q.images)
        assert sign(p * q) == sign(p) * sign(q)

    for k in range(2, 2049):
        for n in range(2, 4096 // k + 1):
            deck = DeckSpec(k, n)
            assert shuffle_by_rows(deck) == shuffle_by_multiplication(deck)

    for _ in range(300):
        k, n = rng.randint(2, 12), rng.randint(2, 6)
        deck = DeckSpec(k, n)
        t1, t2 = rperm(k), rperm(k)
        assert pile_perm(t1, deck) * pile_perm(t2, deck) == pile_perm(t1 * t2, deck)
        assert pile_perm(t1, deck).inverse() == pile_perm(t1.inverse(), deck)

    for k in range(2, 13):
        for n in range(2, 13):
            deck = DeckSpec(k, n)
            s = sign(standard_shuffle(deck))
            assert (s == 1) == (n % 4 in (0, 1) or k % 4 in (0, 1))
            tau = rperm(k)
            assert (sign(pile_perm(tau, deck)) == 1) == (n % 2 == 0 or sign(tau) == 1)
            for kind in ("sym", "alt", "cyclic"):
                if kind == "alt" and k < 3:
                    continue
                spec = PileGroupSpec(kind, k)
                gens = shuffle_generators(spec.generators(), deck)
                assert parity_containment(spec, deck) == all(sign(g) == 1 for g in gens)

    for ell in (2, 3, 5, 6, 7, 10, 11, 12, 13, 14, 15, 17, 19, 20, 21, 22):
        for e in range(1, 9):
            for f in range(1, 9):
                if ell ** (e + f) > 512:
                    continue
                deck = DeckSpec(ell ** e, ell ** f)
                assert verify_shift_action(deck, power_case_params(deck))
                assert order_of(standard_shuffle(deck)) == (e + f) // gcd(e, f)

    full = PermGroup(product_action_generators(symmetric_generators(3), 3, 2))
    semi = PermGroup(product_action_generators([Permutation([1, 2, 0])], 3, 2))
    assert minimal_degree_brute(full) == 6 == oracles.min_support(oracles.closure(full.gen_tuples, 9))
    assert minimal_degree_brute(semi) == 6 == oracles.min_support(oracles.closure(semi.gen_tuples, 9))

    for e in range(2, 5):
        for n in range(3, 13):
            if n & (n - 1) == 0:
                continue
            spec = CascadeSpec(e, n)
            sigma = standard_shuffle(spec.deck(1))
            x = [pile_perm(v_generator(e, r), DeckSpec(2 ** e, n)) for r in range(e)]
            for t in range(1, e + 1):
                assert standard_shuffle(spec.deck(t)) == sigma ** t
                for s in range(t):
                    assert rho_t_embed(v_generator(t, s), e, n) == x[e - t + s]
            for r in range(e - 1):
                assert x[r].conjugate(sigma) == x[r + 1]


if __name__ == "__main__":
    failed = 0
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for fn in sorted(tests, key=lambda f: f.criterion):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
