"""Dense operation tables and exact associative-triple counting.

A table of order n stores entries[x][y] = x*y as integers in [0, n). The
naive counter enumerates all n^3 triples; with rows held in numpy the inner
two loops collapse to one gather-and-compare per x, which keeps exhaustive
certification usable into the thousands.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

DEFAULT_TABLE_CAP = 4096


@dataclass
class AssocCount:
    """Exact count of associative triples, optionally with orbit breakdown.

    breakdown, when present, is (n_diag, n_sq, n_nsq): the number of
    associative completions z of the three representative pairs (0,0),
    (0,1) and (0, non-square).
    """
    total: int
    breakdown: tuple[int, int, int] | None = None
    aborted: bool = False


@dataclass
class OpTable:
    n: int
    entries: np.ndarray
    latin: bool | None = None
    idempotent: bool | None = None
    provenance: tuple[int, int, int] | None = None  # (q, a, b) for built tables

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.int32)
        if arr.shape != (self.n, self.n):
            raise ValueError(f"expected a {self.n}x{self.n} table, got shape {arr.shape}")
        if self.n > 0 and (arr.min() < 0 or arr.max() >= self.n):
            raise ValueError("table entries must lie in [0, n)")
        arr.setflags(write=False)
        self.entries = arr


def make_table(rows, provenance=None) -> OpTable:
    arr = np.asarray(rows, dtype=np.int32)
    return OpTable(n=len(arr), entries=arr, provenance=provenance)


def is_latin(t: OpTable) -> bool:
    """Every row and every column is a permutation; result cached on t."""
    if t.latin is None:
        want = np.arange(t.n, dtype=t.entries.dtype)
        t.latin = bool(
            np.array_equal(np.sort(t.entries, axis=1), np.broadcast_to(want, (t.n, t.n)))
            and np.array_equal(np.sort(t.entries, axis=0), np.broadcast_to(want[:, None], (t.n, t.n)))
        )
    return t.latin


def is_idempotent(t: OpTable) -> bool:
    if t.idempotent is None:
        t.idempotent = bool(np.array_equal(np.diagonal(t.entries), np.arange(t.n)))
    return t.idempotent


def count_associative_naive(t: OpTable, abort_above: int | None = None) -> AssocCount:
    """Count triples with (x*y)*z == x*(y*z) by full enumeration.

    If abort_above is given and the running count exceeds it, returns early
    with aborted=True; a non-aborted result is always the exact total.
    """
    T = t.entries
    total = 0
    for x in range(t.n):
        # rows T[T[x,y],:] against T[x, T[y,z]] for all (y, z) at once
        total += int(np.count_nonzero(T[T[x]] == T[x][T]))
        if abort_above is not None and total > abort_above:
            return AssocCount(total=total, aborted=True)
    return AssocCount(total=total)


def direct_product(t1: OpTable, t2: OpTable, cap: int = DEFAULT_TABLE_CAP) -> OpTable:
    """Componentwise product table on pairs, encoded as i1*n2 + i2."""
    if not is_latin(t1) or not is_latin(t2):
        raise ValueError("direct product requires two Latin squares")
    n1, n2 = t1.n, t2.n
    n = n1 * n2
    if n > cap:
        raise ValueError(f"product order {n} exceeds cap {cap}")
    a = t1.entries.astype(np.int64)
    b = t2.entries.astype(np.int64)
    prod = (a[:, None, :, None] * n2 + b[None, :, None, :]).reshape(n, n)
    idem = True if (t1.idempotent and t2.idempotent) else None
    return OpTable(n=n, entries=prod.astype(np.int32), latin=True, idempotent=idem)


# ---------------------------------------------------------------------------
# File formats. Text: first line n, then n rows of n space-separated entries.
# JSON: {"n": n, "rows": [[...], ...]}. Both round-trip bit-exactly.

def dump_text(t: OpTable) -> str:
    lines = [str(t.n)]
    lines.extend(" ".join(str(int(v)) for v in row) for row in t.entries)
    return "\n".join(lines) + "\n"


def parse_text(s: str) -> OpTable:
    lines = [ln for ln in s.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty table file")
    n = int(lines[0])
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        row = [int(v) for v in ln.split()]
        if len(row) != n:
            raise ValueError(f"row of length {len(row)}, expected {n}")
        rows.append(row)
    return make_table(rows)


def dump_json(t: OpTable) -> str:
    doc = {"n": t.n, "rows": [[int(v) for v in row] for row in t.entries]}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def parse_json(s: str) -> OpTable:
    doc = json.loads(s)
    if not isinstance(doc, dict) or "n" not in doc or "rows" not in doc:
        raise ValueError("expected an object with keys n and rows")
    n = doc["n"]
    rows = doc["rows"]
    if len(rows) != n:
        raise ValueError(f"expected {n} rows, found {len(rows)}")
    return make_table(rows)


def save_table(t: OpTable, path, fmt: str | None = None) -> None:
    path = str(path)
    if fmt is None:
        fmt = "json" if path.endswith(".json") else "text"
    text = dump_json(t) if fmt == "json" else dump_text(t)
    with open(path, "w") as fh:
        fh.write(text)


def load_table(path) -> OpTable:
    with open(str(path)) as fh:
        s = fh.read()
    return parse_json(s) if s.lstrip().startswith("{") else parse_text(s)
