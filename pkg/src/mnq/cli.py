"""Command line front end tying the search, census, and planning layers together.

Ten subcommands cover the package surface: construct / verify / product for
table work, search / scan / cases for witness discovery and its audit trail,
weil / disc / threshold for the character-sum census, and exists for order
decisions.  All machine output is JSON with sorted keys on stdout (scan emits
one JSON object per line so interrupted runs keep every finished field);
identical invocations produce byte-identical output.  Timestamps exist only
inside the witness cache CSV.

Exit codes: 0 success or positive verdict, 1 verified negative (empty
search, non-MNQ table, order not guaranteed), 2 usage or domain errors,
3 failed internal invariants.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .construct import (
    WitnessRecord,
    append_witness,
    build_table,
    load_cache,
    search_general,
    search_theorem,
    theorem_conditions,
    verify_case_tables,
)
from .existence import SEARCHED_RANGE_HOLES, Status, decide, materialize
from .fields import Field, InternalCheckError, field_for_order
from .intpoly import discriminant_reports, exceptional_primes, factor
from .quasigroup import (
    DEFAULT_TABLE_CAP,
    OpTable,
    count_associative_naive,
    direct_product,
    is_idempotent,
    is_latin,
    load_table,
    save_table,
)
from .weil import census_report, threshold

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

CACHE_ENV = "MNQ_CACHE"
DEFAULT_CACHE = "witness_cache.csv"

# orders where a fruitless search is a theorem, not a discovery
KNOWN_EMPTY = frozenset({3, 5, 7, 11}) | SEARCHED_RANGE_HOLES


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation; one subcommand plus the knobs it consumes."""

    command: str
    workers: int = 1
    table_cap: int = DEFAULT_TABLE_CAP
    cache: str = DEFAULT_CACHE
    q: int | None = None
    n: int | None = None
    a: int | None = None
    b: int | None = None
    qmin: int | None = None
    qmax: int | None = None
    mode: str | None = None
    all_witnesses: bool = False
    subsets: bool = False
    residue: int | None = None
    direct: bool = False
    build: bool = False
    certify: bool = False
    fmt: str | None = None
    output: str | None = None
    inputs: tuple[str, ...] = ()


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
    sys.stdout.flush()


def _table_verdict(t: OpTable) -> dict:
    latin = is_latin(t)
    count = count_associative_naive(t).total
    return {
        "n": t.n,
        "latin": latin,
        "idempotent": is_idempotent(t),
        "assoc_count": count,
        "mnq": bool(latin and count == t.n),
    }


def _cmd_construct(cfg: RunConfig) -> int:
    fld = field_for_order(cfg.q)
    a = cfg.a
    b = fld.mul(a, a) if cfg.b is None else cfg.b
    for name, v in (("a", a), ("b", b)):
        if not 0 <= v < fld.q:
            raise ValueError(f"slope {name}={v} is not a canonical encoding below {fld.q}")
    t = build_table(fld, a, b, cap=cfg.table_cap)
    doc = _table_verdict(t)
    doc.update(q=fld.q, p=fld.p, e=fld.e, modulus=fld.modulus_encoding, a=a, b=b)
    del doc["n"]
    if cfg.output:
        save_table(t, cfg.output, fmt=cfg.fmt)
        doc["output"] = cfg.output
    _emit(doc)
    return EXIT_OK if doc["mnq"] else EXIT_NEGATIVE


def _cmd_verify(cfg: RunConfig) -> int:
    doc = _table_verdict(load_table(cfg.inputs[0]))
    _emit(doc)
    return EXIT_OK if doc["mnq"] else EXIT_NEGATIVE


def _cmd_search(cfg: RunConfig) -> int:
    fld = field_for_order(cfg.q)
    mode = cfg.mode or ("general" if fld.q <= 343 else "theorem")
    first = not cfg.all_witnesses
    if mode == "theorem":
        hits = search_theorem(fld, stop_at_first=first, workers=cfg.workers)
        witnesses = [[a, fld.mul(a, a)] for a in hits]
    else:
        pairs = search_general(fld, stop_at_first=first, workers=cfg.workers, cap=cfg.table_cap)
        witnesses = [list(p) for p in pairs]
    _emit({"q": fld.q, "mode": mode, "witnesses": witnesses})
    return EXIT_OK if witnesses else EXIT_NEGATIVE


def _scan_witness(fld: Field, cfg: RunConfig) -> tuple[int, int, str] | None:
    """Condition scan first; on tiny or condition-silent fields fall back to
    the exhaustive pair search while the table fits under the cap."""
    hits = search_theorem(fld, stop_at_first=True, workers=cfg.workers)
    if hits:
        return hits[0], fld.mul(hits[0], hits[0]), "theorem"
    if fld.q <= cfg.table_cap:
        pairs = search_general(fld, stop_at_first=True, workers=cfg.workers, cap=cfg.table_cap)
        if pairs:
            return pairs[0][0], pairs[0][1], "general"
    return None


def _cmd_scan(cfg: RunConfig) -> int:
    if not 0 < cfg.qmin <= cfg.qmax:
        raise ValueError("scan needs 0 < qmin <= qmax")
    cache = load_cache(cfg.cache)
    failures = 0
    for q in range(max(cfg.qmin, 3) | 1, cfg.qmax + 1, 2):
        if len(set(factor(q))) != 1:
            continue
        if q in KNOWN_EMPTY:
            _emit({"q": q, "status": "known-empty"})
            continue
        if q in cache:
            rec = cache[q]
            _emit({"q": q, "status": "cached", "a": rec.a, "b": rec.b,
                   "method": rec.method, "assoc_count": rec.assoc_count})
            continue
        found = _scan_witness(field_for_order(q), cfg)
        if found is None:
            failures += 1
            _emit({"q": q, "status": "empty"})
            continue
        a, b, method = found
        rec = WitnessRecord.for_witness(field_for_order(q), a, b, method, assoc_count=q)
        append_witness(cfg.cache, rec)
        _emit({"q": q, "status": "found", "a": a, "b": b,
               "method": method, "assoc_count": q})
    return EXIT_NEGATIVE if failures else EXIT_OK


def _cmd_cases(cfg: RunConfig) -> int:
    fld = field_for_order(cfg.q)
    report = verify_case_tables(fld, cfg.a)
    _emit({
        "q": report.q,
        "a": report.a,
        "residue": report.residue,
        "all_passed": report.all_passed,
        "rows": [
            {"probe": r.probe, "parities": "".join(r.parities),
             "passed": r.passed, "detail": r.detail}
            for r in report.rows
        ],
    })
    return EXIT_OK if report.all_passed else EXIT_NEGATIVE


def _cmd_weil(cfg: RunConfig) -> int:
    fld = field_for_order(cfg.q)
    rep = census_report(fld, with_subsets=cfg.subsets)
    doc = {
        "q": rep.q,
        "residue": rep.residue,
        "s_scaled": rep.s_scaled,
        "s": str(rep.s),
        "weil_floor": rep.weil_floor,
        "guaranteed_count": rep.guaranteed_count,
        "actual_count": rep.actual_count,
    }
    if cfg.subsets:
        doc["subset_sums"] = [
            {"mask": m, "sum": v} for m, v in sorted(rep.subset_sums.items())
        ]
    _emit(doc)
    return EXIT_OK


def _cmd_disc(cfg: RunConfig) -> int:
    cs = theorem_conditions(cfg.residue)
    doc = {
        "residue": cfg.residue,
        "exceptional_primes": sorted(exceptional_primes(cs)),
        "subsets": [
            {"mask": r.subset, "degree": r.degree, "discriminant": r.discriminant,
             "odd_prime_factors": list(r.odd_prime_factors)}
            for r in discriminant_reports(cs)
        ],
    }
    if cfg.direct:
        direct = sorted(exceptional_primes(cs, direct=True))
        doc["direct_route_primes"] = direct
        if direct != doc["exceptional_primes"]:
            raise InternalCheckError(
                f"discriminant routes disagree for residue {cfg.residue}: "
                f"{doc['exceptional_primes']} vs {direct}"
            )
    _emit(doc)
    return EXIT_OK


def _cmd_threshold(cfg: RunConfig) -> int:
    sys.stdout.write(f"{threshold(theorem_conditions(1))}\n")
    return EXIT_OK


def _cmd_exists(cfg: RunConfig) -> int:
    d = decide(cfg.n)
    doc = {
        "n": d.n,
        "status": d.status.value,
        "reason": d.reason,
        "plan": [
            {"order": blk.order, "in_scope": blk.in_scope, "route": blk.route}
            for blk in d.plan
        ],
    }
    if cfg.build:
        if d.status is not Status.EXISTS:
            raise ValueError(f"cannot build order {d.n}: {d.status.value}")
        table = materialize(d.plan, cap=cfg.table_cap, workers=cfg.workers)
        out = cfg.output or f"mnq-{d.n}.json"
        save_table(table, out, fmt=cfg.fmt)
        doc["output"] = out
        doc["assoc_count"] = d.n
    _emit(doc)
    return EXIT_OK if d.status is Status.EXISTS else EXIT_NEGATIVE


def _cmd_product(cfg: RunConfig) -> int:
    t1 = load_table(cfg.inputs[0])
    t2 = load_table(cfg.inputs[1])
    t = direct_product(t1, t2, cap=cfg.table_cap)
    save_table(t, cfg.output, fmt=cfg.fmt)
    doc = {"n": t.n, "latin": True, "idempotent": is_idempotent(t), "output": cfg.output}
    if cfg.certify:
        doc["assoc_count"] = count_associative_naive(t).total
        doc["mnq"] = doc["assoc_count"] == t.n
    _emit(doc)
    return EXIT_OK


_HANDLERS = {
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "search": _cmd_search,
    "scan": _cmd_scan,
    "cases": _cmd_cases,
    "weil": _cmd_weil,
    "disc": _cmd_disc,
    "threshold": _cmd_threshold,
    "exists": _cmd_exists,
    "product": _cmd_product,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mnq",
        description="Construct, certify, and count maximally nonassociative quasigroups.",
    )
    parser.add_argument("--workers", type=int, default=1,
                        help="parallel workers for searches (default 1)")
    parser.add_argument("--table-cap", type=int, default=DEFAULT_TABLE_CAP,
                        help=f"largest materialized table order (default {DEFAULT_TABLE_CAP})")
    parser.add_argument("--cache", default=None,
                        help=f"witness cache CSV (default ${CACHE_ENV} or {DEFAULT_CACHE})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build the two-slope table for (q, a, b) and certify it")
    p.add_argument("q", type=int)
    p.add_argument("a", type=int)
    p.add_argument("b", type=int, nargs="?", default=None,
                   help="second slope; defaults to a*a in GF(q)")
    p.add_argument("-o", "--output", help="write the table to this file")
    p.add_argument("--format", dest="fmt", choices=("json", "text"),
                   help="table file format (default: by extension)")

    p = sub.add_parser("verify", help="re-certify a table file")
    p.add_argument("file")

    p = sub.add_parser("search", help="find certified slope witnesses for order q")
    p.add_argument("q", type=int)
    p.add_argument("--mode", choices=("theorem", "general"),
                   help="theorem: a with b=a*a via the condition scan; "
                        "general: exhaustive (a, b) pairs (default: general up to 343)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--all", dest="all_witnesses", action="store_true",
                   help="collect every witness")
    g.add_argument("--first", dest="all_witnesses", action="store_false",
                   help="stop at the first witness (default)")

    p = sub.add_parser("scan", help="discover witnesses for all odd prime powers in a range")
    p.add_argument("qmin", type=int)
    p.add_argument("qmax", type=int)

    p = sub.add_parser("cases", help="run the associativity case analysis for a condition witness")
    p.add_argument("q", type=int)
    p.add_argument("a", type=int)

    p = sub.add_parser("weil", help="exact census of condition-satisfying elements of GF(q)")
    p.add_argument("q", type=int)
    p.add_argument("--subsets", action="store_true",
                   help="include all 255 subset character sums and check the expansion identity")

    p = sub.add_parser("disc", help="discriminant survey of the condition polynomials")
    p.add_argument("--residue", type=int, choices=(1, 3), required=True)
    p.add_argument("--direct", action="store_true",
                   help="cross-check against factoring full product discriminants")

    sub.add_parser("threshold", help="smallest q where the census floor clears every root bound")

    p = sub.add_parser("exists", help="decide existence of an order-n specimen")
    p.add_argument("n", type=int)
    p.add_argument("--build", action="store_true",
                   help="materialize the plan into a certified table file")
    p.add_argument("-o", "--output", help="table file for --build (default mnq-<n>.json)")
    p.add_argument("--format", dest="fmt", choices=("json", "text"))

    p = sub.add_parser("product", help="direct product of two table files")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--format", dest="fmt", choices=("json", "text"))
    p.add_argument("--certify", action="store_true",
                   help="also run the cubic-cost naive associativity count")

    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    inputs = tuple(
        getattr(ns, name) for name in ("file", "file1", "file2") if hasattr(ns, name)
    )
    return RunConfig(
        command=ns.command,
        workers=ns.workers,
        table_cap=ns.table_cap,
        cache=ns.cache or os.environ.get(CACHE_ENV, DEFAULT_CACHE),
        q=getattr(ns, "q", None),
        n=getattr(ns, "n", None),
        a=getattr(ns, "a", None),
        b=getattr(ns, "b", None),
        qmin=getattr(ns, "qmin", None),
        qmax=getattr(ns, "qmax", None),
        mode=getattr(ns, "mode", None),
        all_witnesses=getattr(ns, "all_witnesses", False),
        subsets=getattr(ns, "subsets", False),
        residue=getattr(ns, "residue", None),
        direct=getattr(ns, "direct", False),
        build=getattr(ns, "build", False),
        certify=getattr(ns, "certify", False),
        fmt=getattr(ns, "fmt", None),
        output=getattr(ns, "output", None),
        inputs=inputs,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = _config(ns)
    try:
        return _HANDLERS[cfg.command](cfg)
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
