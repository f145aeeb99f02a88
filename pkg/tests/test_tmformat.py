import pytest

from certlab.problems.periodic import build_periodic_verifier
from certlab.tmformat import TmFormatError, format_tm, parse_tm

GOOD = """\
# comment line
name: toy
tapes: input:ro certificate:ro work
alphabet: _ a b
start: scan
accept: acc
reject: rej
scan a,_,_ -> scan a,_,_ R,S,S
scan b,_,_ -> scan b,_,_ R,S,S
scan _,_,_ -> acc _,_,_ S,S,S
"""


def test_parse_good_file():
    spec = parse_tm(GOOD)
    assert spec.name == "toy"
    assert len(spec.rules) == 3
    assert spec.blank == "_"
    assert spec.start == "scan"


def test_round_trip_preserves_semantics():
    spec = parse_tm(GOOD)
    again = parse_tm(format_tm(spec))
    assert again.rules == spec.rules
    assert again.alphabet == spec.alphabet
    assert again.tapes == spec.tapes
    assert (again.start, again.accept, again.reject) == (spec.start, spec.accept, spec.reject)


def test_round_trip_on_assembled_machine():
    spec = build_periodic_verifier().machine
    again = parse_tm(format_tm(spec))
    assert set(again.rules) == set(spec.rules)
    assert again.alphabet == spec.alphabet


def test_duplicate_rule_reports_line_number():
    with pytest.raises(TmFormatError, match=r"line 11"):
        parse_tm(GOOD + "scan a,_,_ -> rej a,_,_ S,S,S\n")


def test_missing_header_rejected():
    broken = GOOD.replace("start: scan\n", "")
    with pytest.raises(TmFormatError, match="start"):
        parse_tm(broken)


def test_unknown_tape_token_rejected():
    broken = GOOD.replace("work", "output:wo")
    with pytest.raises(TmFormatError, match="output:wo"):
        parse_tm(broken)


def test_malformed_transition_line():
    with pytest.raises(TmFormatError, match="line 8"):
        parse_tm(GOOD.replace("scan a,_,_ -> scan a,_,_ R,S,S",
                              "scan a,_,_ scan a,_,_ R,S,S"))


def test_readonly_violation_reports_line():
    broken = GOOD + "scan a,0,_ -> acc a,1,_ S,S,S\n"
    broken = broken.replace("alphabet: _ a b", "alphabet: _ a b 0 1")
    with pytest.raises(TmFormatError, match=r"ReadOnlyWrite.*line 11"):
        parse_tm(broken)


def test_hash_symbol_usable_in_alphabet():
    text = GOOD.replace("alphabet: _ a b", "alphabet: _ a b #")
    text += "scan #,_,_ -> rej #,_,_ S,S,S\n"
    spec = parse_tm(text)
    assert "#" in spec.alphabet
    assert parse_tm(format_tm(spec)).rules == spec.rules
