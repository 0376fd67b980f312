"""Linear codes: layout, verification, and the brute-force oracle."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from uniprior import (CapExceededError, Gf2Basis, LinearIndexCode,
                      MalformedCodeError, bit_layout, check_code, load_code,
                      oracle_min_linear, parse_code, serialize_code, symbol,
                      verify_exhaustive, verify_linear)

from generators import make_instance, rand_code, rand_multi, rand_single
from oracles import brute_min_linear

EX2 = make_instance(5, [[2, 1], [3, 1], [1, 2], [3, 2], [1, 3], [2, 3], [4, 5]],
                    [[1, 2, 3, 4, 5]], q=[1, 2, 2, 2, 2])
TWO_CYCLE = make_instance(2, [[1, 2], [2, 1]], [[1, 2]])
D1 = make_instance(3, [[1, 2], [2, 1], [3, 1]], [[1, 3], [2, 3]])

EX2_CODE = LinearIndexCode((
    symbol(1, (1, 1), (2, 1)),
    symbol(1, (2, 1), (3, 1)),
    symbol(1, (2, 2)),
    symbol(1, (3, 2)),
    symbol(1, (4, 1)),
    symbol(1, (4, 2)),
))


def test_bit_layout():
    offsets, total = bit_layout(EX2)
    assert total == 9
    assert offsets == (0, 1, 3, 5, 7)


def test_symbol_sorts_terms():
    assert symbol(1, (3, 1), (1, 2)).terms == ((1, 2), (3, 1))


def test_code_round_trip(tmp_path):
    text = serialize_code(EX2_CODE)
    assert parse_code(text) == EX2_CODE
    p = tmp_path / "c.json"
    p.write_text(text)
    assert load_code(str(p)) == EX2_CODE


@pytest.mark.parametrize("sym", [
    symbol(3, (1, 1)),            # no such sender
    symbol(1, (2, 1)),            # message outside the sender's set
    symbol(2, (3, 2)),            # bit index beyond q_3
    symbol(2, (3, 0)),
])
def test_check_code_rejects(sym):
    with pytest.raises(MalformedCodeError):
        check_code(D1, LinearIndexCode((sym,)))


def test_check_code_rejects_empty_terms():
    with pytest.raises(MalformedCodeError):
        check_code(D1, LinearIndexCode((symbol(1),)))


def test_gf2_basis_basics():
    b = Gf2Basis()
    assert b.add(0b101)
    assert b.add(0b011)
    assert not b.add(0b110)  # dependent
    assert b.rank == 2
    assert b.contains(0b110)
    assert not b.contains(0b001)
    assert not b.add(0)


@given(st.lists(st.integers(1, 2 ** 8 - 1), max_size=10), st.randoms())
def test_gf2_basis_snapshot_is_order_independent(vectors, pyrand):
    b1 = Gf2Basis()
    for v in vectors:
        b1.add(v)
    shuffled = list(vectors)
    pyrand.shuffle(shuffled)
    b2 = Gf2Basis()
    for v in shuffled:
        b2.add(v)
    assert b1.snapshot() == b2.snapshot()
    assert b1.rank == b2.rank


def test_verify_two_cycle():
    ok = verify_linear(TWO_CYCLE, LinearIndexCode((symbol(1, (1, 1), (2, 1)),)))
    assert ok.valid
    empty = verify_linear(TWO_CYCLE, LinearIndexCode(()))
    assert not empty.valid
    assert empty.failures == ((1, (2, 1)), (2, (1, 1)))


def test_verify_example_code():
    assert verify_linear(EX2, EX2_CODE).valid
    assert verify_exhaustive(EX2, EX2_CODE).valid
    # dropping any symbol breaks it: the length is optimal
    for k in range(len(EX2_CODE.symbols)):
        rest = EX2_CODE.symbols[:k] + EX2_CODE.symbols[k + 1:]
        assert not verify_linear(EX2, LinearIndexCode(rest)).valid
    # losing the chain link x2[1]^x3[1] strands receiver 1 on x3[1]
    short = LinearIndexCode(EX2_CODE.symbols[:1] + EX2_CODE.symbols[2:])
    assert verify_linear(EX2, short).failures[0] == (1, (3, 1))


def test_empty_code_suffices_when_nothing_is_wanted():
    lonely = make_instance(2, [], [[1, 2]])
    rep = verify_linear(lonely, LinearIndexCode(()))
    assert rep.valid and rep.failures == ()


def test_verify_reports_first_failures_in_receiver_order():
    naive = LinearIndexCode((symbol(1, (1, 1), (2, 1)), symbol(2, (3, 1), (4, 1))))
    split = make_instance(4, [[1, 3], [4, 2], [1, 2], [2, 1], [3, 4], [4, 3]],
                       [[1, 2], [3, 4]])
    rep = verify_linear(split, naive)
    assert not rep.valid
    assert rep.failures == ((2, (4, 1)), (3, (1, 1)))


def test_verify_exhaustive_cap():
    big = make_instance(21, [], [list(range(1, 22))])
    with pytest.raises(CapExceededError):
        verify_exhaustive(big, LinearIndexCode(()), cap=20)


def test_verifiers_agree_on_random_codes():
    rng = random.Random(31)
    for _ in range(250):
        inst = rand_multi(rng, n_max=5)
        code = rand_code(rng, inst)
        a = verify_linear(inst, code)
        b = verify_exhaustive(inst, code)
        assert a.valid == b.valid
        assert a.failures == b.failures


def test_oracle_frozen_values():
    ex1 = make_instance(4, [[4, 1], [3, 2], [1, 3], [2, 3], [1, 4], [2, 4]],
                        [[1, 2, 3, 4]])
    assert oracle_min_linear(ex1).length == 3

    singles = make_instance(5, [[2, 1], [3, 1], [1, 2], [3, 2], [1, 3],
                                [2, 3], [4, 5]],
                            [[1], [2], [3], [4], [5]], q=[1, 2, 2, 2, 2])
    assert oracle_min_linear(singles).length == 7

    res = oracle_min_linear(D1)
    assert res.length == 2 and res.exact
    assert verify_linear(D1, res.code).valid


def test_oracle_deterministic_witness():
    a = oracle_min_linear(D1)
    b = oracle_min_linear(D1)
    assert a.code == b.code
    assert a.code.symbols == (symbol(1, (1, 1), (3, 1)), symbol(2, (2, 1), (3, 1)))


def test_oracle_matches_plain_combination_scan():
    rng = random.Random(37)
    for _ in range(40):
        inst = rand_multi(rng, n_max=4)
        res = oracle_min_linear(inst)
        assert res.exact
        assert res.length == brute_min_linear(inst, max_len=res.length)
        assert verify_linear(inst, res.code).valid


def test_oracle_monotone_under_arc_removal():
    rng = random.Random(41)
    for _ in range(60):
        inst = rand_single(rng, n_max=5)
        base = oracle_min_linear(inst).length
        arcs = [list(a) for a in inst.arcs]
        if not arcs:
            continue
        keep = [a for a in arcs if rng.random() < 0.6]
        sub = make_instance(inst.n, keep, [list(s) for s in inst.senders],
                            list(inst.q))
        assert oracle_min_linear(sub).length <= base


def test_oracle_bit_cap():
    with pytest.raises(CapExceededError):
        oracle_min_linear(EX2, max_bits=8)


def test_oracle_length_cap_falls_back_to_uncoded():
    res = oracle_min_linear(D1, max_len=1)
    assert not res.exact
    assert res.length == 3  # every wanted message sent uncoded
    assert res.note
    assert verify_linear(D1, res.code).valid
