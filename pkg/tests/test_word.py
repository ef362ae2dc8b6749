import pytest
from hypothesis import given, strategies as st

from paragroups.word import (AlphabetError, Word, commutator, free_reduce, invert, left_normed,
                             lcs_relators, multiply, substitute)

AB = ("a", "b")
raw_words = st.lists(st.tuples(st.sampled_from(AB), st.integers(-4, 4).filter(bool)), max_size=12)


def stack_reduce(raw):
    """Letter-by-letter cancellation with a stack."""
    out = []
    for g, e in raw:
        step = 1 if e > 0 else -1
        for _ in range(abs(e)):
            if out and out[-1] == (g, -step):
                out.pop()
            else:
                out.append((g, step))
    return out


def test_free_reduce_examples(w):
    assert free_reduce([("a", 1), ("a", -1)], AB) == Word.identity(AB)
    assert free_reduce([("a", 2), ("a", 3)], AB).syllables == (("a", 5),)
    assert free_reduce([("a", 1), ("b", 1), ("b", -1), ("a", 1)], AB) == w("a^2")


def test_free_reduce_unknown_generator():
    with pytest.raises(AlphabetError):
        free_reduce([("c", 1)], AB)


@given(raw_words)
def test_free_reduce_matches_stack_oracle(raw):
    assert free_reduce(raw, AB).letters() == stack_reduce(raw)


@given(raw_words)
def test_free_reduce_idempotent(raw):
    once = free_reduce(raw, AB)
    assert free_reduce(once.syllables, AB) == once
    syl = once.syllables
    assert all(syl[i][0] != syl[i + 1][0] for i in range(len(syl) - 1))


def test_multiply_examples(w):
    assert multiply(w("a"), w("a^-1")) == Word.identity(AB)
    assert multiply(w("a*b"), w("b^-1*a")) == w("a^2")
    assert multiply(Word.identity(AB), w("a*b^2")) == w("a*b^2")


def test_multiply_alphabet_mismatch():
    with pytest.raises(AlphabetError):
        multiply(Word.gen(AB, "a"), Word.gen(("a", "c"), "a"))


@given(raw_words, raw_words, raw_words)
def test_multiply_associative_with_identity(x, y, z):
    u, v, t = (free_reduce(r, AB) for r in (x, y, z))
    assert multiply(multiply(u, v), t) == multiply(u, multiply(v, t))
    e = Word.identity(AB)
    assert multiply(e, u) == u == multiply(u, e)


def test_invert_examples(w):
    assert invert(Word.identity(AB)) == Word.identity(AB)
    assert invert(w("a^2*b^-1")) == w("b*a^-2")


@given(raw_words)
def test_invert_properties(raw):
    u = free_reduce(raw, AB)
    assert invert(invert(u)) == u
    assert not multiply(u, invert(u))


def test_commutator_convention(w):
    a, b = w("a"), w("b")
    assert commutator(a, b).syllables == (("a", -1), ("b", -1), ("a", 1), ("b", 1))
    assert not commutator(a, a)
    g = w("a*b^2")
    assert multiply(g, commutator(b, g)) == w("a*b^2*b^-1*b^-2*a^-1*b*a*b^2")


@given(raw_words)
def test_commutator_trivial_cases(raw):
    u = free_reduce(raw, AB)
    assert not commutator(u, u)
    assert not commutator(u, Word.identity(AB))


def test_substitute_examples(w):
    images = {"a": w("a*[b,a]"), "b": w("b")}
    assert substitute(w("a^3"), images) == w("(a*[b,a])^3")
    assert substitute(w("a"), {"a": w("a*[a^3,b]"), "b": w("b")}) == w("a*a^-3*b^-1*a^3*b")
    assert substitute(w("a*b^-2*a"), {"a": w("a"), "b": w("b")}) == w("a*b^-2*a")


def test_substitute_missing_image(w):
    with pytest.raises(KeyError):
        substitute(w("a*b"), {"a": w("b")})


@given(raw_words, raw_words, raw_words, raw_words)
def test_substitute_is_homomorphism(x, y, ia, ib):
    images = {"a": free_reduce(ia, AB), "b": free_reduce(ib, AB)}
    u, v = free_reduce(x, AB), free_reduce(y, AB)
    assert substitute(multiply(u, v), images) == multiply(substitute(u, images),
                                                          substitute(v, images))


def test_left_normed(w):
    assert left_normed([w("a"), w("b"), w("a")]) == commutator(commutator(w("a"), w("b")), w("a"))


def enumerate_left_normed(alphabet, i):
    """Brute force: every tuple of generators, nested by hand, trivial ones dropped."""
    out = []

    def rec(prefix):
        if len(prefix) == i:
            c = prefix[0]
            for x in prefix[1:]:
                c = commutator(c, x)
            if c:
                out.append(c)
            return
        for g in alphabet:
            rec(prefix + [Word.gen(alphabet, g)])

    rec([])
    return out


def test_lcs_relators():
    assert set(lcs_relators(AB, 2)) == {commutator(Word.gen(AB, "a"), Word.gen(AB, "b")),
                                        commutator(Word.gen(AB, "b"), Word.gen(AB, "a"))}
    assert len(lcs_relators(AB, 3)) == 4
    assert set(lcs_relators(AB, 3)) == set(enumerate_left_normed(AB, 3))
    assert set(lcs_relators(AB, 4)) == set(enumerate_left_normed(AB, 4))
    assert lcs_relators(("a",), 2) == []
    with pytest.raises(ValueError):
        lcs_relators(AB, 1)
