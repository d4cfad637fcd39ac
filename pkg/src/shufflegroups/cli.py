"""Command-line front end.

    shufflegroups classify --k 2 --n 12 --pile-group sym
    shufflegroups table1 --n-max 16
    shufflegroups cascade --e 2 --n 7
    shufflegroups sweep --pile-group cyclic --k-list 3,5 --n-max 30 --out cyc.jsonl
    shufflegroups conjecture --k-list 3,4,5 --n-max 40 --out sym.jsonl

Exit status: 0 when nothing proven was contradicted, 1 when a prediction
that rests on a theorem disagrees with the computation, 2 on usage errors.
Disagreement with a conjectural prediction is reported as a finding and
does not change the exit status.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Iterator

from . import bsgs
from .cascade import MAX_CASCADE_DEGREE, CascadeSpec, verify_cascade_lemmas
from .shuffle import DeckSpec, InvalidSpec, PileGroupSpec, integer_log, shuffle_group
from .structure import (
    EXACT_DEGREE,
    MAX_DEGREE,
    BudgetExceeded,
    classify,
    expected_structure,
)

OK, MISMATCH, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def derive_seed(k: int, n: int, label: str, base: int | None = None) -> int:
    """Per-task seed from (k, n, pile group), so results never depend on scheduling."""
    text = f"{'' if base is None else base}|{k}|{n}|{label}"
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:4], "big")


def make_record(k: int, n: int, pile_group: str, seed: int | None = None,
                exact_degree: int = EXACT_DEGREE, max_degree: int = MAX_DEGREE) -> dict:
    """One ResultRecord as a JSON-ready dict."""
    spec = PileGroupSpec.parse(pile_group, k)
    deck = DeckSpec(k, n)
    if seed is None:
        seed = derive_seed(k, n, spec.label)
    start = time.perf_counter()
    expected = expected_structure(spec, deck)
    record = {
        "k": k, "n": n, "pile_group": spec.label, "degree": deck.degree,
        "order": None, "transitive": None, "primitive": None, "in_alt": None,
        "two_transitive": None, "classification": None,
        "expected": expected.to_json() if expected else None, "match": None,
        "seed": seed, "elapsed_ms": 0,
    }
    try:
        c = classify(spec, deck, seed=seed, exact_degree=exact_degree, max_degree=max_degree)
    except BudgetExceeded as exc:
        G = shuffle_group(spec, deck, seed=seed)
        record["transitive"] = bsgs.is_transitive(G)
        record["in_alt"] = bsgs.generators_even(G)
        record["classification"] = {"tag": "Other", "params": {}, "note": f"BudgetExceeded: {exc}"}
    else:
        record.update(order=str(c.order), transitive=c.transitive, primitive=c.primitive,
                      in_alt=c.in_alt, two_transitive=c.two_transitive,
                      classification={**c.to_json(), **({"note": c.note} if c.note else {})})
        if expected is not None:
            record["match"] = expected.matches(c)
    record["elapsed_ms"] = int((time.perf_counter() - start) * 1000)
    return record


def verdict(record: dict) -> str:
    """'match', 'mismatch', 'finding', 'no-prediction' or 'budget'."""
    if record["order"] is None:
        return "budget"
    if record["expected"] is None:
        return "no-prediction"
    if record["match"]:
        return "match"
    return "finding" if record["expected"]["conjectural"] else "mismatch"


def _label(part: dict | None) -> str:
    if part is None:
        return "-"
    inner = ", ".join(f"{k}={v}" for k, v in part["params"].items())
    return f"{part['tag']}({inner})"


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def cmd_classify(args) -> int:
    if args.k < 2 or args.n < 2:
        raise UsageError("need k >= 2 and n >= 2")
    if args.k * args.n > args.max_degree:
        raise UsageError(f"degree {args.k * args.n} exceeds --max-degree {args.max_degree}")
    rec = make_record(args.k, args.n, args.pile_group, args.seed,
                      args.exact_degree, args.max_degree)
    v = verdict(rec)
    if v == "budget":
        print(rec["classification"]["note"], file=sys.stderr)
        return USAGE
    if args.json:
        print(json.dumps(rec))
    else:
        print(f"Sh({rec['pile_group']}, n={rec['n']}) on {rec['degree']} cards (k={rec['k']})")
        print(f"  classification: {_label(rec['classification'])}")
        print(f"  order:          {rec['order']}")
        print(f"  transitive={rec['transitive']} primitive={rec['primitive']} "
              f"2-transitive={rec['two_transitive']} in_alt={rec['in_alt']}")
        if rec["expected"] is None:
            print("  expected:       none")
        else:
            kind = "conjectural" if rec["expected"]["conjectural"] else "proven"
            print(f"  expected:       {_label(rec['expected'])} [{kind}, {rec['expected']['source']}]")
            print(f"  match:          {rec['match']}" + ("  (finding)" if v == "finding" else ""))
    return MISMATCH if v == "mismatch" else OK


def cmd_table1(args) -> int:
    if args.n_max < 2:
        raise UsageError("--n-max must be at least 2")
    good = 0
    total = 0
    for n in range(2, args.n_max + 1):
        rec = make_record(2, n, "sym", args.seed)
        total += 1
        ok = rec["match"] is True
        good += ok
        print(f"n={n:<3} {_label(rec['classification']):<42} order={rec['order']:<24} "
              f"expected={_label(rec['expected'])} {'OK' if ok else 'MISMATCH'}")
    print(f"{good}/{total} match")
    return OK if good == total else MISMATCH


def cmd_cascade(args) -> int:
    if args.e < 2 or args.n < 2:
        raise UsageError("need e >= 2 and n >= 2")
    if integer_log(args.n, 2) is not None:
        raise UsageError(f"n = {args.n} is a power of 2, outside the cascade hypotheses")
    spec = CascadeSpec(args.e, args.n)
    if spec.degree > args.max_degree:
        raise UsageError(f"degree {spec.degree} exceeds --max-degree {args.max_degree}")
    report = verify_cascade_lemmas(spec, max_degree=args.max_degree)
    p = report.prediction
    print(f"k={spec.k} n={spec.n} degree={spec.degree}")
    for name, ok in report.checks.items():
        print(f"  {name:<20} {'ok' if ok else 'FAILED'}")
    for line in report.failures:
        print(f"    {line}")
    for t, order in enumerate(report.orders, start=1):
        print(f"  |G_{t}| = {order}")
    for t, eq in enumerate(report.equal_to_next, start=1):
        print(f"  G_{t} {'==' if eq else '!='} G_{t + 1}")
    if report.kernel:
        print(f"  G_{spec.e} = {report.kernel} in B_{spec.degree // 2}")
    print(f"  predicted branch {p.branch}: orders {list(p.orders)}, "
          f"{'all equal' if p.all_equal else 'not all equal'}"
          + (f", G_{spec.e} = {p.kernel}" if p.kernel else ""))
    print(f"  branch {'matches' if report.branch_matches else 'DOES NOT match'}")
    return OK if report.ok else MISMATCH


def excluded(kind: str, k: int, n: int) -> bool:
    """Cases outside the hypotheses of the conjectures a sweep targets."""
    if kind == "sym":
        return integer_log(n, k) is not None or (k == 4 and integer_log(n, 2) is not None)
    if kind == "cyclic":
        return n <= k or integer_log(n, k) is not None
    return False


def sweep_tasks(pile_group: str, k_list: Iterable[int], n_min: int, n_max: int,
                exclude: bool) -> list[tuple[int, int]]:
    kind = pile_group.split(":")[0].strip().lower()
    return [(k, n) for k in k_list for n in range(max(n_min, 2), n_max + 1)
            if not (exclude and excluded(kind, k, n))]


def _load_done(path: str) -> set[tuple[int, int, str]]:
    """Keys already present; a partial trailing line is cut off."""
    done: set[tuple[int, int, str]] = set()
    if not os.path.exists(path):
        return done
    with open(path, "rb+") as fh:
        data = fh.read()
        cut = data.rfind(b"\n") + 1
        if cut < len(data):
            fh.truncate(cut)
        for line in data[:cut].splitlines():
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                continue
            done.add((rec["k"], rec["n"], rec["pile_group"]))
    return done


def _run_task(task: tuple) -> dict:
    return make_record(*task)


def _records(tasks: list[tuple], jobs: int) -> Iterator[dict]:
    if jobs <= 1 or len(tasks) <= 1:
        for t in tasks:
            yield _run_task(t)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_run_task, tasks)


def run_sweep(pile_group: str, k_list: list[int], n_min: int, n_max: int, out: str, *,
              jobs: int = 1, seed: int | None = None, resume: bool = False,
              exclude: bool = True, exact_degree: int = EXACT_DEGREE,
              max_degree: int = MAX_DEGREE, quiet: bool = False) -> dict[str, int]:
    for k in k_list:
        PileGroupSpec.parse(pile_group, k)  # validate before any work
    label = PileGroupSpec.parse(pile_group, k_list[0]).label if k_list else pile_group
    done = _load_done(out) if resume else set()
    tasks = []
    for k, n in sweep_tasks(pile_group, k_list, n_min, n_max, exclude):
        if (k, n, label) in done:
            continue
        s = None if seed is None else derive_seed(k, n, label, seed)
        tasks.append((k, n, pile_group, s, exact_degree, max_degree))
    counts = {"match": 0, "mismatch": 0, "finding": 0, "no-prediction": 0, "budget": 0}
    with open(out, "a" if resume else "w", encoding="utf-8") as fh:
        for rec in _records(tasks, jobs):
            fh.write(json.dumps(rec) + "\n")
            fh.flush()
            v = verdict(rec)
            counts[v] += 1
            if not quiet and v in ("mismatch", "finding", "budget"):
                print(f"{v}: k={rec['k']} n={rec['n']} observed {_label(rec['classification'])} "
                      f"expected {_label(rec['expected'])}", file=sys.stderr)
    return counts


def _sweep(args, pile_group: str, exclude: bool) -> int:
    k_list = _parse_int_list(args.k_list)
    if not k_list or min(k_list) < 2:
        raise UsageError("--k-list needs integers >= 2")
    counts = run_sweep(pile_group, k_list, args.n_min, args.n_max, args.out, jobs=args.jobs,
                       seed=args.seed, resume=args.resume, exclude=exclude,
                       exact_degree=args.exact_degree, max_degree=args.max_degree)
    print(" ".join(f"{k}={v}" for k, v in counts.items()))
    return MISMATCH if counts["mismatch"] else OK


def cmd_sweep(args) -> int:
    return _sweep(args, args.pile_group, not args.no_exclude)


def cmd_conjecture(args) -> int:
    return _sweep(args, "sym", True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shufflegroups",
                                     description="Generalised shuffle groups Sh(P, n).")
    sub = parser.add_subparsers(dest="command", required=True)

    def budget(p):
        p.add_argument("--max-degree", type=int, default=MAX_DEGREE)
        p.add_argument("--exact-degree", type=int, default=EXACT_DEGREE,
                       help="largest degree at which orders are computed without a certificate")

    p = sub.add_parser("classify", help="classify one shuffle group")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pile-group", default="sym")
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")
    budget(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("table1", help="the two-pile groups for n = 2..n-max")
    p.add_argument("--n-max", type=int, default=16)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("cascade", help="verify the cascading groups for k = 2^e")
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=MAX_CASCADE_DEGREE)
    p.set_defaults(func=cmd_cascade)

    for name, helptext in (("sweep", "classify a range of (k, n) into a JSONL file"),
                           ("conjecture", "sweep Sym(k) over the conjecture's hypotheses")):
        p = sub.add_parser(name, help=helptext)
        if name == "sweep":
            p.add_argument("--pile-group", required=True)
            p.add_argument("--no-exclude", action="store_true",
                           help="keep cases outside the targeted conjecture's hypotheses")
        p.add_argument("--k-list", required=True)
        p.add_argument("--n-min", type=int, default=2)
        p.add_argument("--n-max", type=int, required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--seed", type=int)
        p.add_argument("--resume", action="store_true")
        budget(p)
        p.set_defaults(func=cmd_sweep if name == "sweep" else cmd_conjecture)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except (UsageError, InvalidSpec, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
