"""Operation tables: structure checks, the cubic counter, products, formats."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_latin, triple_count_oracle
from mnq.quasigroup import (
    AssocCount,
    OpTable,
    count_associative_naive,
    direct_product,
    dump_json,
    dump_text,
    is_idempotent,
    is_latin,
    load_table,
    make_table,
    parse_json,
    parse_text,
    save_table,
)


def cyclic(n: int) -> OpTable:
    return make_table((np.arange(n)[:, None] + np.arange(n)[None, :]) % n)


def random_rows(rng, n):
    """Arbitrary operation table, usually not Latin."""
    return make_table(rng.integers(0, n, size=(n, n)))


# --- construction and structure ----------------------------------------------

def test_make_table_validation():
    make_table([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        make_table([[0, 1], [1]])
    with pytest.raises(ValueError):
        make_table([[0, 2], [1, 0]])
    with pytest.raises(ValueError):
        make_table([[0, -1], [1, 0]])
    with pytest.raises(ValueError):
        make_table(np.zeros((2, 3), dtype=int))


def test_entries_are_frozen():
    t = cyclic(4)
    with pytest.raises(ValueError):
        t.entries[0, 0] = 1


def test_is_latin_and_caching(rng):
    t = cyclic(5)
    assert is_latin(t) and t.latin is True
    for n in (1, 2, 6, 11):
        assert is_latin(random_latin(rng, n))
    rows = np.array([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    rows[0, 0] = 1  # duplicate in row 0 and column 0
    assert not is_latin(make_table(rows))


def test_is_idempotent():
    assert not is_idempotent(cyclic(3))
    assert is_idempotent(make_table([[0, 2, 1], [2, 1, 0], [1, 0, 2]]))


# --- associativity counting ----------------------------------------------------

def test_group_table_is_fully_associative():
    for n in (1, 2, 5, 8):
        got = count_associative_naive(cyclic(n))
        assert got == AssocCount(total=n**3)
        assert not got.aborted


def test_naive_counter_matches_oracle_on_arbitrary_tables(rng):
    for n in range(1, 11):
        for t in (random_rows(rng, n), random_latin(rng, n)):
            assert count_associative_naive(t).total == triple_count_oracle(t.entries.tolist())


def test_quasigroup_triple_count_is_at_least_order(rng):
    for n in range(1, 25):
        t = random_latin(rng, n)
        assert count_associative_naive(t).total >= n


def test_abort_threshold():
    got = count_associative_naive(cyclic(6), abort_above=10)
    assert got.aborted and got.total > 10
    exact = count_associative_naive(cyclic(6), abort_above=6**3)
    assert not exact.aborted and exact.total == 216


# --- direct products -------------------------------------------------------------

def test_direct_product_of_groups_multiplies_counts():
    t = direct_product(cyclic(2), cyclic(3))
    assert t.n == 6 and is_latin(t)
    assert count_associative_naive(t).total == 8 * 27


def test_direct_product_multiplicativity_random(rng):
    for _ in range(6):
        n1, n2 = rng.integers(2, 7, size=2)
        t1, t2 = random_latin(rng, int(n1)), random_latin(rng, int(n2))
        prod = direct_product(t1, t2)
        a1 = count_associative_naive(t1).total
        a2 = count_associative_naive(t2).total
        assert count_associative_naive(prod).total == a1 * a2


def test_direct_product_entry_formula(rng):
    t1, t2 = random_latin(rng, 3), random_latin(rng, 4)
    prod = direct_product(t1, t2)
    for x1 in range(3):
        for x2 in range(4):
            for y1 in range(3):
                for y2 in range(4):
                    left = prod.entries[x1 * 4 + x2, y1 * 4 + y2]
                    assert left == t1.entries[x1, y1] * 4 + t2.entries[x2, y2]


def test_direct_product_idempotence_propagation():
    idem = make_table([[0, 2, 1], [2, 1, 0], [1, 0, 2]])
    assert is_idempotent(idem)  # cache the flag so the product can propagate it
    assert direct_product(idem, idem).idempotent is True
    prod = direct_product(cyclic(2), idem)
    assert prod.idempotent is not True
    assert not is_idempotent(prod)


def test_direct_product_rejections(rng):
    nonlatin = make_table([[0, 0], [1, 1]])
    with pytest.raises(ValueError):
        direct_product(nonlatin, cyclic(2))
    with pytest.raises(ValueError):
        direct_product(cyclic(70), cyclic(70), cap=4096)


# --- file formats ------------------------------------------------------------------

@given(st.integers(1, 9), st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_text_and_json_roundtrips(n, seed):
    t = random_latin(np.random.default_rng(seed), n)
    for dump, parse in ((dump_text, parse_text), (dump_json, parse_json)):
        back = parse(dump(t))
        assert np.array_equal(back.entries, t.entries)
        assert back.n == t.n
        # serialization is canonical: one byte stream per table
        assert dump(back) == dump(t)


def test_save_load_both_formats(tmp_path, rng):
    t = random_latin(rng, 7)
    for name in ("t.json", "t.txt"):
        path = tmp_path / name
        save_table(t, path)
        back = load_table(path)
        assert np.array_equal(back.entries, t.entries)
    assert (tmp_path / "t.json").read_text().lstrip().startswith("{")
    assert (tmp_path / "t.txt").read_text().splitlines()[0] == "7"


def test_parse_rejects_malformed_inputs():
    for bad in ("", "2\n0 1", "2\n0 1\n1 2", "x\n0", '{"n": 2}', '{"rows": [[0]]}',
                '{"n": 2, "rows": [[0, 1], [1, 2]]}'):
        with pytest.raises(ValueError):
            (parse_json if bad.startswith("{") else parse_text)(bad)
