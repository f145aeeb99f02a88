import itertools

import pytest

from certlab.instances import int_to_bits
from certlab.machine import run
from certlab.problems.rotation import (
    build_rotation_naive_solver,
    build_rotation_verifier,
    cert_width,
    decode,
    encode,
    gen_rotation,
    gen_worst_nonrotation,
    rotation_brute,
    rotation_oracle,
)
from certlab.verifier import decide_by_enumeration

FUEL = 200_000


def verify(a: str, b: str, k: int) -> str:
    v = build_rotation_verifier()
    inst = encode((a, b))
    return run(v.machine, inst.symbols, int_to_bits(k, cert_width(inst.n)), fuel=FUEL).status


@pytest.mark.parametrize("a,b,want,want_k", [
    ("abcde", "cdeab", True, 2),
    ("", "", False, None),          # k range [0, 0) is empty
    ("aaaa", "aaaa", True, 0),
    ("ab", "ba", True, 1),
    ("ab", "ab", True, 0),
    ("a", "b", False, None),
    ("ab", "aba", False, None),
])
def test_oracle_examples(a, b, want, want_k):
    assert rotation_oracle(a, b) == (want, want_k)


def test_oracle_agrees_with_brute_force():
    for n in range(1, 7):
        for ta in itertools.product("ab", repeat=n):
            a = "".join(ta)
            for tb in itertools.product("ab", repeat=n):
                b = "".join(tb)
                want_member, _ = rotation_brute(a, b)
                got_member, got_k = rotation_oracle(a, b)
                assert got_member == want_member, (a, b)
                if got_member:
                    assert b == a[got_k:] + a[:got_k]


@pytest.mark.parametrize("a,b,k,status", [
    ("ab", "ba", 0, "rejected"),
    ("ab", "ba", 1, "accepted"),
    ("abbab", "babab", 2, "accepted"),
    ("aa", "aa", 0, "accepted"),
    ("aa", "aa", 1, "accepted"),
    ("", "", 0, "rejected"),
    ("", "", 1, "rejected"),
    ("ab", "ab", 1, "rejected"),  # right pair, wrong offset
])
def test_verifier_examples(a, b, k, status):
    assert verify(a, b, k) == status


def test_verifier_accepts_exactly_valid_offsets():
    for n in range(0, 6):
        for ta in itertools.product("ab", repeat=n):
            a = "".join(ta)
            for tb in itertools.product("ab", repeat=n):
                b = "".join(tb)
                for k in range(1 << cert_width(n)):
                    want = n > 0 and k < n and b == a[k:] + a[:k]
                    assert (verify(a, b, k) == "accepted") == want, (a, b, k)


def test_verifier_rejects_unequal_lengths():
    assert verify("ab", "aba", 0) == "rejected"
    assert verify("aba", "ab", 1) == "rejected"
    assert verify("", "a", 0) == "rejected"
    assert verify("a", "", 0) == "rejected"


def test_enumeration_matches_oracle_small():
    v = build_rotation_verifier()
    for n in range(0, 6):
        for ta in itertools.product("ab", repeat=n):
            a = "".join(ta)
            for tb in itertools.product("ab", repeat=n):
                b = "".join(tb)
                outcome = decide_by_enumeration(v, encode((a, b)), fuel=FUEL)
                assert outcome.accepted == rotation_oracle(a, b)[0], (a, b)


def test_solver_matches_oracle_small():
    s = build_rotation_naive_solver()
    for n in range(0, 6):
        for ta in itertools.product("ab", repeat=n):
            a = "".join(ta)
            for tb in itertools.product("ab", repeat=n):
                b = "".join(tb)
                got = run(s.machine, encode((a, b)).symbols, "", fuel=FUEL).status
                assert (got == "accepted") == rotation_oracle(a, b)[0], (a, b)


def test_gen_rotation_members_and_reproducibility():
    inst = gen_rotation(12, 5, seed=3)
    assert inst == gen_rotation(12, 5, seed=3)
    a, b = decode(inst)
    assert rotation_oracle(a, b)[0]
    assert b == a[5:] + a[:5]
    with pytest.raises(ValueError):
        gen_rotation(5, 5, seed=0)
    with pytest.raises(ValueError):
        gen_rotation(0, 0, seed=0)


def test_worst_nonrotation_is_a_nonmember():
    a, b = decode(gen_worst_nonrotation(8))
    assert (a, b) == ("a" * 8, "a" * 7 + "b")
    assert not rotation_oracle(a, b)[0]


def test_encode_round_trip():
    for pair in (("", ""), ("a", "b"), ("abba", "baab")):
        assert decode(encode(pair)) == pair
    with pytest.raises(ValueError):
        encode(("a#b", "ab"))
