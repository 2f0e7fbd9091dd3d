import hashlib
import random

import pytest

from lincsp import Csp, ParseError, Status, from_dimacs, load, parse, serialize, to_dimacs
from lincsp.errors import UnsupportedDomainError
from lincsp.experiments import fixture_six_text
from lincsp.formats import sniff
from lincsp.generator import random_csp
from lincsp.solver import two_sat_solve


def _random_instances(count, seed=0):
    rng = random.Random(seed)
    for i in range(count):
        k = rng.randint(1, 5)
        d = rng.randint(2, 4)
        n = rng.randint(k, 20)
        yield random_csp(n, rng.randint(0, 25), k, d, seed=i)


def test_empty_round_trip():
    text = serialize(Csp(2, 2))
    assert text == "p csp 0 2 2 0\n"
    assert parse(text) == Csp(2, 2)


def test_fixture_round_trip_is_byte_stable(six, six_file):
    assert six_file.canonical() == six.canonical()
    text = fixture_six_text()
    comments = [line[2:] for line in text.splitlines() if line.startswith("c ")]
    again = serialize(parse(text), comments)
    assert again == text
    assert hashlib.sha256(again.encode()).digest() == hashlib.sha256(text.encode()).digest()


def test_serialize_format_details():
    f = Csp(3, 3, [[(4, 2), (1, 0), (2, 1)], [(1, 1), (2, 0), (3, 2)]])
    text = serialize(f, ["hello"])
    assert text == "c hello\np csp 4 3 3 2\n1:1 2:0 3:2\n1:0 2:1 4:2\n"


@pytest.mark.parametrize("text,lineno", [
    ("p csp 5 3 2 1\n5:7 1:0\n", 2),
    ("p csp 5 2 2 1\n1:0\n", 2),
    ("p csp 5 2 2 1\n1:0 1:1\n", 2),
    ("p csp 5 2 2 1\n1:0 9:1\n", 2),
    ("p csp 5 2\n", 1),
    ("p csp a 2 2 0\n", 1),
    ("1:0 2:0\n", 1),
    ("c x\np csp 3 2 2 0\np csp 3 2 2 0\n", 3),
    ("p csp 3 2 2 1\n1:0 2x0\n", 2),
    ("p csp 3 2 2 0\n1:0 2:0\n", 2),
])
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_parse_reports_missing_constraints_and_header():
    with pytest.raises(ParseError, match="declared 2"):
        parse("p csp 3 2 2 2\n1:0 2:0\n")
    with pytest.raises(ParseError, match="header"):
        parse("c only a comment\n")
    with pytest.raises(ParseError, match="identical"):
        parse("p csp 3 2 2 2\n1:0 2:0\n2:0 1:0\n")


def test_dimacs_mapping():
    f = Csp(2, 2, [[(1, 0), (2, 1)]])
    assert to_dimacs(f).splitlines()[-1] == "1 -2 0"
    assert from_dimacs(to_dimacs(f)) == f


def test_fixture_dimacs(six_file):
    text = to_dimacs(six_file)
    assert text.splitlines()[0] == "p cnf 4 6"
    back = from_dimacs(text)
    assert len(back) == 6 and back.n_vars == 4
    assert two_sat_solve(back).status is Status.UNSATISFIABLE


def test_dimacs_rejects_larger_domains():
    with pytest.raises(UnsupportedDomainError):
        to_dimacs(Csp(2, 3, [[(1, 2), (2, 0)]]))


@pytest.mark.parametrize("text", [
    "p cnf 3 1\n1 2\n",
    "p cnf 3 2\n1 2 0\n1 2 3 0\n",
    "p cnf 3 1\n1 -1 0\n",
    "p cnf 2 1\n1 3 0\n",
    "1 2 0\n",
    "p cnf 3 2\n1 2 0\n",
])
def test_dimacs_errors(text):
    with pytest.raises(ParseError):
        from_dimacs(text)


def test_dimacs_multiline_clause_and_comments():
    f = from_dimacs("c hi\np cnf 3 2\n1 -2\n 0 2 3 0\n")
    assert f.to_clauses() == [[1, -2], [2, 3]]


def test_empty_dimacs():
    f = from_dimacs("p cnf 0 0\n")
    assert len(f) == 0 and f.k == 0


def test_sniff_and_load(six_file):
    assert sniff(serialize(six_file)) == "csp"
    assert sniff(to_dimacs(six_file)) == "dimacs"
    assert load(to_dimacs(six_file)).canonical() == six_file.canonical()
    with pytest.raises(ParseError):
        sniff("nothing here\n")


def test_round_trip_on_random_instances():
    for f in _random_instances(1000):
        g = parse(serialize(f))
        assert g == f.canonical()
        assert serialize(g) == serialize(f)
        if f.d == 2 and f.k >= 1:
            h = from_dimacs(to_dimacs(f), k=f.k)
            assert h == f
