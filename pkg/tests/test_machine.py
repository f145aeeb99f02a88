import random

import pytest

from certlab.machine import (
    ACCEPTED,
    FUEL_EXHAUSTED,
    REJECTED,
    STUCK,
    EncodingError,
    MachineSpec,
    Rule,
    TapeRole,
    run,
    run_reference,
    trace,
    validate_machine,
)

TAPES = (TapeRole.INPUT, TapeRole.CERTIFICATE, TapeRole.WORK)
ALPHA = ("_", "a", "b")


def scanner() -> MachineSpec:
    """Walks the input right; accepts at the first blank."""
    rules = []
    for x in ALPHA:
        for c in ALPHA:
            for w in ALPHA:
                if x == "_":
                    rules.append(Rule("scan", (x, c, w), "acc", (x, c, w), ("S", "S", "S")))
                else:
                    rules.append(Rule("scan", (x, c, w), "scan", (x, c, w), ("R", "S", "S")))
    return MachineSpec("scanner", TAPES, ALPHA, ("scan", "acc", "rej"),
                       "scan", "acc", "rej", tuple(rules))


def test_valid_machine_has_no_violations():
    assert validate_machine(scanner()) == []


def test_nondeterminism_flagged():
    spec = scanner()
    dup = spec.rules[0]._replace(next_state="rej")
    bad = MachineSpec(spec.name, spec.tapes, spec.alphabet, spec.states,
                      spec.start, spec.accept, spec.reject, spec.rules + (dup,))
    kinds = [v.kind for v in validate_machine(bad)]
    assert kinds == ["Nondeterministic"]


def test_readonly_write_flagged():
    spec = scanner()
    rule = spec.rules[0]
    mutated = Rule(rule.state, ("a", "0", "_"), rule.next_state, ("b", "0", "_"), rule.moves)
    bad = MachineSpec(spec.name, spec.tapes, ("_", "a", "b", "0"), spec.states,
                      spec.start, spec.accept, spec.reject, spec.rules + (mutated,))
    violations = validate_machine(bad)
    assert [v.kind for v in violations] == ["ReadOnlyWrite"]


def test_halting_state_with_outgoing_rule_flagged():
    spec = scanner()
    extra = Rule("acc", ("_", "_", "_"), "acc", ("_", "_", "_"), ("S", "S", "S"))
    bad = MachineSpec(spec.name, spec.tapes, spec.alphabet, spec.states,
                      spec.start, spec.accept, spec.reject, spec.rules + (extra,))
    assert any(v.kind == "HaltingOutgoing" for v in validate_machine(bad))


def test_tape_role_counts_enforced():
    bad = MachineSpec("m", (TapeRole.INPUT, TapeRole.WORK), ALPHA,
                      ("q", "acc", "rej"), "q", "acc", "rej", ())
    assert any(v.kind == "TapeRoles" for v in validate_machine(bad))


def test_symbol_and_move_checks():
    spec = scanner()
    weird = Rule("scan", ("z", "_", "_"), "acc", ("z", "_", "_"), ("S", "S", "X"))
    bad = MachineSpec(spec.name, spec.tapes, spec.alphabet, spec.states,
                      spec.start, spec.accept, spec.reject, (weird,))
    kinds = {v.kind for v in validate_machine(bad)}
    assert "BadSymbol" in kinds and "BadMove" in kinds


def test_run_counts_exact_steps():
    result = run(scanner(), "abab", "", fuel=100)
    assert result.status == ACCEPTED
    assert result.steps == 5  # four cells plus the halting read
    assert result.max_excursion[0] == (0, 4)


def test_zero_fuel_is_exhausted_without_steps():
    result = run(scanner(), "abab", "", fuel=0)
    assert result.status == FUEL_EXHAUSTED
    assert result.steps == 0


def test_no_false_accept_under_clocking():
    for fuel in range(5):
        result = run(scanner(), "abab", "", fuel=fuel)
        assert result.status == FUEL_EXHAUSTED
        assert result.steps == fuel


def test_monotone_fuel():
    base = run(scanner(), "abab", "", fuel=1000)
    for fuel in range(base.steps, base.steps + 4):
        again = run(scanner(), "abab", "", fuel=fuel)
        assert (again.status, again.steps) == (base.status, base.steps)


def test_stuck_is_distinct_from_rejected():
    # no rule consumes 'b' in this machine
    rules = tuple(
        Rule("scan", (x, c, w), "scan" if x == "a" else "acc",
             (x, c, w), ("R", "S", "S"))
        for x in ("a", "_") for c in ALPHA for w in ALPHA
    )
    spec = MachineSpec("a-only", TAPES, ALPHA, ("scan", "acc", "rej"),
                       "scan", "acc", "rej", rules)
    assert validate_machine(spec) == []
    result = run(spec, "aba", "", fuel=100)
    assert result.status == STUCK
    assert result.final_state == "scan"


def test_encoding_error_before_any_step():
    with pytest.raises(EncodingError):
        run(scanner(), "abz", "", fuel=10)
    with pytest.raises(EncodingError):
        run(scanner(), "ab", "2", fuel=10)


def test_trace_matches_run():
    spec = scanner()
    result = run(spec, "ab", "", fuel=100)
    configs = trace(spec, "ab", "", fuel=100, limit=1000)
    assert len(configs) == result.steps + 1
    assert configs[0].state == "scan" and configs[0].steps_elapsed == 0
    assert configs[-1].state == result.final_state
    assert trace(spec, "ab", "", fuel=100, limit=1)[0].steps_elapsed == 0


def test_trace_preserves_readonly_tapes():
    spec = scanner()
    configs = trace(spec, "ab", "ba", fuel=100, limit=1000)
    first = configs[0]
    for cfg in configs:
        assert cfg.tapes[0] == first.tapes[0]
        assert cfg.tapes[1] == first.tapes[1]


def _random_machine(rng: random.Random) -> MachineSpec:
    states = ["q0", "q1", "q2", "acc", "rej"]
    working = ["q0", "q1", "q2"]
    rules = []
    for q in working:
        for x in ALPHA:
            for c in ALPHA:
                for w in ALPHA:
                    if rng.random() < 0.1:
                        continue  # leave some combinations stuck
                    nxt = rng.choice(states)
                    w_write = rng.choice(ALPHA)
                    moves = tuple(rng.choice("LSR") for _ in range(3))
                    rules.append(Rule(q, (x, c, w), nxt, (x, c, w_write), moves))
    return MachineSpec("rand", TAPES, ALPHA, tuple(states), "q0", "acc", "rej", tuple(rules))


def test_fast_engine_matches_reference_on_random_machines():
    rng = random.Random(20)
    for trial in range(25):
        spec = _random_machine(rng)
        assert validate_machine(spec) == []
        for _ in range(4):
            n = rng.randrange(0, 9)
            x = "".join(rng.choice("ab") for _ in range(n))
            cert = "".join(rng.choice("ab") for _ in range(rng.randrange(0, 4)))
            fast = run(spec, x, cert, fuel=300)
            ref = run_reference(spec, x, cert, fuel=300)
            assert fast == ref


def test_run_is_bit_for_bit_reproducible():
    spec = scanner()
    results = {run(spec, "abab", "", fuel=50) for _ in range(5)}
    assert len(results) == 1


def test_alphabet_symbol_never_ruled_on_a_tape_sticks():
    # 'z' is in the alphabet but no rule reads it anywhere; both engines
    # must report stuck the moment the head sits on it
    spec = scanner()
    widened = MachineSpec(spec.name, spec.tapes, spec.alphabet + ("z",), spec.states,
                          spec.start, spec.accept, spec.reject, spec.rules)
    assert validate_machine(widened) == []
    fast = run(widened, "azb", "", fuel=50)
    ref = run_reference(widened, "azb", "", fuel=50)
    assert fast == ref
    assert fast.status == STUCK and fast.steps == 1
