from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from wernick.kb import ClosureBudgetExceeded, Fact, ParseError, ValidationError, close_generic, default_kb_text, load_kb, parse_kb
from wernick.kb.build import canonicalize
from wernick.kb.check import numeric_check_kb
from wernick.kb.refs import circ, diam, line, pt

P = pt


def vr(x, y, z, w, r):
    return Fact("vecratio", (P(x), P(y), P(z), P(w), F(r)))


# values stated for the named points and lemmas
STATED_FACTS = [
    vr("B", "Ma", "B", "C", "1/2"),
    vr("C", "Mb", "C", "A", "1/2"),
    vr("A", "Mc", "A", "B", "1/2"),
    vr("A", "G", "A", "Ma", "2/3"),
    vr("B", "G", "B", "Mb", "2/3"),
    vr("C", "G", "C", "Mc", "2/3"),
    vr("Mb", "Ma", "A", "B", "1/2"),
    vr("Mc", "Mb", "B", "C", "1/2"),
    vr("Mc", "Ma", "A", "C", "1/2"),
    vr("H", "G", "H", "O", "2/3"),
    vr("Ma", "O", "H", "A", "1/2"),
    vr("Mb", "O", "H", "B", "1/2"),
    vr("Mc", "O", "H", "C", "1/2"),
    Fact("online", (P("G"), line("C", "Mc"))),
    Fact("online", (P("H"), line("C", "Hc"))),
    Fact("online", (P("I"), line("C", "Tc"))),
    Fact("oncircle", (P("B"), circ("O", "A"))),
    Fact("oncircle", (P("Pb"), circ("I", "Pa"))),
    Fact("oncircle", (P("Na"), circ("O", "A"))),
    Fact("oncircle", (P("H'ab"), circ("O", "A"))),
    Fact("oncircle", (P("Hb"), circ("Ma", "B"))),
    Fact("oncircle", (P("I"), circ("Na", "C"))),
    Fact("harmonic", (P("B"), P("C"), P("Ta"), P("T'a"))),
    Fact("oncircle", (P("A"), diam("Ta", "T'a"))),
    Fact("tangent", (line("A", "B"), circ("I", "Pa"))),
]


@pytest.mark.parametrize("fact", STATED_FACTS, ids=lambda f: f.text())
def test_stated_values_hold(kb, fact):
    assert kb.holds(fact)


@pytest.mark.parametrize("fact", [vr("H", "G", "H", "O", "1/3"), vr("Ma", "O", "H", "A", "-1/2"), vr("A", "G", "A", "Ma", "1/3")],
                         ids=lambda f: f.text())
def test_wrong_values_do_not_hold(kb, fact):
    assert not kb.holds(fact)


def test_generic_consequences(kb):
    # reversed vectors, reciprocal and complement ratios
    assert kb.holds(vr("G", "H", "O", "H", "2/3"))
    assert kb.holds(vr("H", "O", "H", "G", "3/2"))
    assert kb.holds(vr("O", "G", "O", "H", "1/3"))
    assert kb.holds(Fact("harmonic", (P("Ta"), P("T'a"), P("B"), P("C"))))
    assert kb.holds(Fact("online", (P("Mc"), line("A", "B"))))


def test_closure_is_idempotent(kb):
    # derived homothety lines come back under new names; they canonicalize away
    again, _ = canonicalize(close_generic(kb.facts.facts, kb.generics))
    assert again == set(kb.facts.facts)


def test_load_is_deterministic(kb):
    other = load_kb(default_kb_text())
    assert other.serialize() == kb.serialize()
    assert other.digest() == kb.digest()


def test_kb_numeric_soundness_sample(kb):
    report = numeric_check_kb(kb, n_samples=40, seed=7)
    assert report.ok, report.text()
    assert report.n_facts == len(kb.geometric_facts())


def test_numeric_check_catches_a_false_fact(kb):
    bad = [vr("H", "G", "H", "O", "1/3"), Fact("oncircle", (P("G"), circ("O", "A")))]
    report = numeric_check_kb(kb, n_samples=5, facts=bad)
    assert report.failing_facts() == set(bad)


def test_fact_cap():
    with pytest.raises(ClosureBudgetExceeded):
        load_kb(default_kb_text(), fact_cap=50)


def test_rule_order_override(kb):
    ids = [r.id for r in kb.rules]
    moved = kb.with_rules(["ratio", "line"])
    assert [r.id for r in moved.rules][:2] == ["ratio", "line"]
    assert sorted(r.id for r in moved.rules) == sorted(ids)
    with pytest.raises(KeyError):
        kb.with_rules(["nope"])


MINI = """\
point A B C Ma
def vecratio B Ma B C 1/2
rule ratio: needs vecratio ?U ?X ?Y ?Z ?r, unknown ?U, point ?X, point ?Y, point ?Z
    gives ?U op ratio_point(?X,?Y,?Z,?r)
    says "Using {?X}, {?Y} and {?Z}, construct {?U}"
"""


def test_minimal_kb():
    kb = load_kb(MINI)
    assert kb.vocabulary == ["A", "B", "C", "Ma"]
    assert [r.id for r in kb.rules] == ["ratio"]
    assert kb.holds(vr("Ma", "B", "C", "B", "1/2"))


@pytest.mark.parametrize(
    "text, err",
    [
        ("point Zz", ValidationError),
        ("point A A", ValidationError),
        ("point A\ndef online A line(A,B)", ValidationError),
        ("point A B\ndef online A", ParseError),
        ("point A B\nlemma frob A B", ParseError),
        ("point A B\ndef vecratio A B A B 1/0", ValidationError),
        ("point A B\ndef vecratio A B A B 0", ValidationError),
        ("point A B\ndef online A line(A,B)\ndef online A line(A,B)\ndef vecratio A B A B 2\ndef vecratio A B A B 2", ValidationError),
        ('rule r: needs point ?X gives ?Y op line_through(?X,?X) says "x"', ValidationError),
        ('rule r: needs point ?X, online ?X ?L, unknown ?L gives ?L op line_through(?X,?Z) says "x"', ValidationError),
        ('rule r: needs point ?X, online ?X ?L, unknown ?L gives ?L op line_through(?X,?X) says "{?Q}"', ValidationError),
        ("rule r: gives", ParseError),
    ],
)
def test_malformed_kb(text, err):
    with pytest.raises(err):
        load_kb(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        parse_kb("point A B\n\nlemma frob A B")
    assert e.value.line == 3


@given(st.permutations(["d1", "d2", "d3"]))
def test_statement_order_does_not_matter(order):
    defs = {
        "d1": "def vecratio B Ma B C 1/2",
        "d2": "def vecratio C Mb C A 1/2",
        "d3": "def online G line(A,Ma)",
    }
    text = "point A B C Ma Mb G\n" + "\n".join(defs[k] for k in order) + "\n"
    base = "point A B C Ma Mb G\n" + "\n".join(defs[k] for k in ("d1", "d2", "d3")) + "\n"
    assert load_kb(text).serialize() == load_kb(base).serialize()
