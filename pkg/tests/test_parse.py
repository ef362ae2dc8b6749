import pytest
from hypothesis import given, strategies as st

from paragroups.coset import Presentation
from paragroups.parse import ParseError, format_presentation, format_word, parse_presentation, \
    parse_word
from paragroups.word import AlphabetError, Word, commutator, free_reduce

AB = ("a", "b")


def test_grammar():
    a, b = Word.gen(AB, "a"), Word.gen(AB, "b")
    assert parse_word("(a*[b,a])^3") == (a * commutator(b, a)) ** 3
    assert parse_word("a b a^-1") == a * b * ~a
    assert parse_word("ab") == a * b
    assert parse_word("[a,b,a]") == commutator(commutator(a, b), a)
    assert parse_word("a^(-2)") == a ** -2
    assert parse_word("1") == Word.identity(AB)
    assert parse_word("x1*x10^2", ("x1", "x10")).syllables == (("x1", 1), ("x10", 2))


@pytest.mark.parametrize("text", ["a^", "(a", "[a]", "a*", "a^b", "a)"])
def test_syntax_errors(text):
    with pytest.raises(ParseError) as info:
        parse_word(text)
    assert info.value.pos >= 0


def test_unknown_generator():
    with pytest.raises(AlphabetError):
        parse_word("a*c")
    with pytest.raises(AlphabetError):
        parse_presentation("<a | b>")


def test_presentations():
    g = parse_presentation("<a,b | a^3, b^3>")
    assert g.alphabet == AB and len(g.relators) == 2
    g1 = parse_presentation("<a,b | (a*[b,a])^3, b^3>")
    a, b = Word.gen(AB, "a"), Word.gen(AB, "b")
    assert g1.relators[0] == (a * commutator(b, a)) ** 3
    assert parse_presentation("<a,b | >").relators == ()
    with pytest.raises(ParseError):
        parse_presentation("<a | a^0>")
    with pytest.raises(AlphabetError):
        parse_presentation("<a, a | a>")


raw_words = st.lists(st.tuples(st.sampled_from(AB), st.integers(-5, 5).filter(bool)), max_size=10)


@given(raw_words)
def test_word_round_trip(raw):
    w = free_reduce(raw, AB)
    assert parse_word(format_word(w)) == w


@given(st.lists(raw_words.filter(lambda r: free_reduce(r, AB)), max_size=4))
def test_presentation_round_trip(raws):
    pres = Presentation(AB, tuple(free_reduce(r, AB) for r in raws))
    assert parse_presentation(format_presentation(pres)) == pres
