import math
import random

import pytest

from certlab.machine import run
from certlab.problems import sat3_verifier_fuel
from certlab.problems.sat3 import (
    CnfFormula,
    build_sat3_verifier,
    count_satisfying,
    count_satisfying_slow,
    decode,
    encode,
    find_satisfying,
    format_dimacs,
    gen_random_3sat,
    parse_dimacs,
    sat3_oracle,
)


def test_formula_invariants():
    CnfFormula(3, ((1, -2, 3),))
    with pytest.raises(ValueError):
        CnfFormula(3, ((1, 1, 2),))  # repeated variable
    with pytest.raises(ValueError):
        CnfFormula(3, ((1, 2, 4),))  # out of range
    with pytest.raises(ValueError):
        CnfFormula(3, ((0, 1, 2),))  # zero literal
    with pytest.raises(ValueError):
        CnfFormula(0, ())


def test_vacuous_formula_counts_everything():
    assert sat3_oracle(CnfFormula(3, ())) == (True, 8)


def test_forcing_formula_counts_four():
    # clauses force x1 = 1; the other two variables are free
    f = CnfFormula(3, ((1, 2, 3), (1, -2, 3), (1, 2, -3), (1, -2, -3)))
    assert count_satisfying(f) == 4
    assert count_satisfying_slow(f) == 4


def test_counting_oracles_cross_check():
    rng = random.Random(12)
    for trial in range(60):
        n = rng.randrange(3, 13)
        m = rng.randrange(1, 5 * n)
        f = gen_random_3sat(n, m, seed=trial)
        assert count_satisfying(f) == count_satisfying_slow(f), f


def test_expected_count_law_small():
    # a fixed assignment satisfies a random distinct-variable clause w.p. 7/8
    n, m, samples = 10, 43, 400
    total = sum(count_satisfying(gen_random_3sat(n, m, seed=s)) for s in range(samples))
    mean = total / samples
    analytic = 2**n * (7 / 8) ** m
    assert analytic / 3 <= mean <= analytic * 3


def test_find_satisfying_is_smallest_witness():
    f = CnfFormula(3, ((1, 2, 3),))
    bits = find_satisfying(f)
    assert bits == "001"  # lexicographically smallest satisfying assignment
    assert f.satisfied_by(bits)
    unsat = CnfFormula(3, (
        (1, 2, 3), (1, 2, -3), (1, -2, 3), (1, -2, -3),
        (-1, 2, 3), (-1, 2, -3), (-1, -2, 3), (-1, -2, -3),
    ))
    assert find_satisfying(unsat) is None
    assert count_satisfying(unsat) == 0


def test_generator_invariants():
    f = gen_random_3sat(10, 43, seed=5)
    assert f.num_vars == 10 and f.num_clauses == 43
    assert f.ratio == pytest.approx(4.3)
    for clause in f.clauses:
        assert len({abs(lit) for lit in clause}) == 3
    assert gen_random_3sat(10, 43, seed=5) == f
    assert gen_random_3sat(10, 43, seed=6) != f
    with pytest.raises(ValueError):
        gen_random_3sat(2, 5, seed=0)
    with pytest.raises(ValueError):
        gen_random_3sat(5, 0, seed=0)


def test_encode_decode_round_trip():
    for seed in range(10):
        f = gen_random_3sat(7, 20, seed=seed)
        assert decode(encode(f)) == f
    assert decode(encode(CnfFormula(4, ()))) == CnfFormula(4, ())


def test_dimacs_round_trip_and_errors():
    f = gen_random_3sat(10, 43, seed=2)
    assert parse_dimacs(format_dimacs(f)) == f
    with pytest.raises(ValueError):
        parse_dimacs("1 2 3 0\n")  # missing problem line
    with pytest.raises(ValueError):
        parse_dimacs("p cnf 3 1\n1 2 0\n")  # not a 3-clause
    with pytest.raises(ValueError):
        parse_dimacs("p cnf 3 2\n1 2 3 0\n")  # clause count mismatch
    text = "c comment\np cnf 3 1\n1 -2 3 0\n"
    assert parse_dimacs(text) == CnfFormula(3, ((1, -2, 3),))


def test_verifier_agrees_with_host_evaluation():
    v = build_sat3_verifier()
    rng = random.Random(31)
    for trial in range(25):
        n = rng.randrange(3, 9)
        m = rng.randrange(1, 4 * n)
        f = gen_random_3sat(n, m, seed=100 + trial)
        inst = encode(f)
        fuel = sat3_verifier_fuel(f)
        for a in range(1 << n):
            bits = format(a, f"0{n}b")
            got = run(v.machine, inst.symbols, bits, fuel=fuel)
            assert (got.status == "accepted") == f.satisfied_by(bits)


def test_verifier_steps_do_not_depend_on_the_certificate():
    v = build_sat3_verifier()
    f = gen_random_3sat(8, 34, seed=77)
    inst = encode(f)
    fuel = sat3_verifier_fuel(f)
    steps = {run(v.machine, inst.symbols, format(a, "08b"), fuel=fuel).steps
             for a in range(256)}
    assert len(steps) == 1


def test_verifier_rejects_short_certificate():
    v = build_sat3_verifier()
    f = gen_random_3sat(6, 10, seed=1)
    inst = encode(f)
    assert run(v.machine, inst.symbols, "1", fuel=sat3_verifier_fuel(f)).status == "rejected"


def test_verifier_accepts_empty_formula():
    v = build_sat3_verifier()
    inst = encode(CnfFormula(5, ()))
    result = run(v.machine, inst.symbols, "00000", fuel=1000)
    assert result.status == "accepted"


def test_oracle_cap():
    with pytest.raises(ValueError):
        count_satisfying(CnfFormula(27, ((1, 2, 3),)))


def test_expected_mean_at_n16():
    # closed form: 2^16 * (7/8)^68 is about 7.5
    assert 2**16 * (7 / 8) ** 68 == pytest.approx(7.46, abs=0.05)
    assert math.isclose(1 - 4.26 * math.log2(8 / 7), 0.179, abs_tol=0.01)


def test_instance_file_round_trips(tmp_path):
    from certlab.problems import load_instance_file, save_instance_file
    from certlab.problems.periodic import encode as enc_p
    from certlab.problems.rotation import encode as enc_r

    cases = [
        ("periodic", enc_p("abab"), "x.txt"),
        ("rotation", enc_r(("abba", "baab")), "pair.txt"),
        ("sat3", encode(gen_random_3sat(6, 12, seed=3)), "f.cnf"),
    ]
    for problem, inst, name in cases:
        path = str(tmp_path / name)
        save_instance_file(inst, path)
        assert load_instance_file(problem, path) == inst
    with open(tmp_path / "bad.txt", "w") as fh:
        fh.write("one\ntwo\nthree\n")
    with pytest.raises(ValueError, match="two lines"):
        load_instance_file("rotation", str(tmp_path / "bad.txt"))
