import pytest

from paragroups.coset import CosetTable, TableNotClosedError, quotient_order, todd_coxeter
from paragroups.intmat import abelian_invariants
from paragroups.parse import parse_presentation
from paragroups.rewriting import (exponent_sum_table, is_conjugate_of, is_transversal_conjugate,
                                  relation_matrix, rewrite, rs_presentation, schreier_transversal,
                                  simplify)
from paragroups.word import Word, commutator, free_reduce


def kernel(text, images, modulus, order=None):
    pres = parse_presentation(text)
    table = exponent_sum_table(pres, images, modulus)
    return pres, table, rs_presentation(pres, table, order)


def test_transversals():
    trivial = todd_coxeter(parse_presentation("<a | a^3>"), [Word.gen(("a",), "a")])
    assert schreier_transversal(trivial) == (Word.identity(("a",)),)
    c3 = todd_coxeter(parse_presentation("<a | a^3>"))
    assert [str(t) for t in schreier_transversal(c3)] == ["1", "a", "a^2"]
    _, table, _ = kernel("<a,b | a^3, b^3>", {"a": 0, "b": 1}, 3)
    assert [str(t) for t in schreier_transversal(table, "ba")] == ["1", "b", "b^2"]


def test_transversal_prefix_closed():
    pres = parse_presentation("<x,y | x^2, y^3, (x*y)^2>")
    ts = schreier_transversal(todd_coxeter(pres))
    words = set(ts)
    for t in ts:
        syl = t.letters()
        for i in range(len(syl)):
            assert free_reduce(syl[:i], t.alphabet) in words


def test_open_table_rejected():
    table = CosetTable(("a",), ((-1, -1),))
    with pytest.raises(TableNotClosedError):
        schreier_transversal(table)


def test_cyclic_kernel_hand_oracle():
    # <a | a^6> -> C2: transversal {1, a}; the only nontrivial Schreier word is a.a = a^2,
    # and both conjugates of a^6 rewrite to (a^2)^3
    pres, table, data = kernel("<a | a^6>", {"a": 1}, 2)
    assert [str(g.word) for g in data.generators] == ["a^2"]
    assert {str(r) for r in data.presentation.relators} == {"x1^3"}
    assert str(simplify(data).presentation) == "<x1 | x1^3>"


def test_schreier_generator_count():
    pres, table, data = kernel("<a,b | a^3, b^3>", {"a": 1, "b": 1}, 3)
    n = table.index
    # index * rank - (index - 1) nontrivial Schreier generators
    assert len(data.generators) == n * 2 - (n - 1)


def test_trivial_index_is_renaming():
    pres = parse_presentation("<a,b | a^3, b^3, [a,b]>")
    table = todd_coxeter(pres, [pres.word("a"), pres.word("b")])
    data = rs_presentation(pres, table)
    assert table.index == 1
    assert [str(g.word) for g in data.generators] == ["a", "b"]
    assert [str(r) for r in data.presentation.relators] == ["x1^3", "x2^3", "x1^-1*x2^-1*x1*x2"]


def test_h_kernel_p3():
    pres, table, data = kernel("<a,b | a[a^3,b], b^3>", {"a": 0, "b": 1}, 3, "ba")
    simple = simplify(data)
    assert len(simple.presentation.alphabet) == 3
    assert len(simple.presentation.relators) == 3
    for g in simple.generators:
        assert is_conjugate_of(g.word, "a")
        assert is_transversal_conjugate(g.word, "a", simple.transversal)
    assert abelian_invariants(simple.presentation).invariant_factors == (1, 1, 19)


def test_commutator_subgroup_is_free_of_rank_4():
    gamma = parse_presentation("<a,b | a^3, b^3>")
    table = todd_coxeter(gamma.with_relators([commutator(gamma.word("a"), gamma.word("b"))]))
    assert table.index == 9
    data = rs_presentation(gamma, table)
    assert len(data.generators) == 9 * 2 - 8
    simple = simplify(data)
    assert len(simple.presentation.alphabet) == 4 and simple.presentation.relators == ()
    assert abelian_invariants(simple.presentation).invariant_factors == (0, 0, 0, 0)


@pytest.mark.parametrize("text, images, m", [
    ("<a,b | a^3, b^3>", {"a": 0, "b": 1}, 3),
    ("<a,b | a[a^3,b], b^3>", {"a": 0, "b": 1}, 3),
    ("<a,b | a^4, b^6, (a*b)^2>", {"a": 1, "b": 1}, 2),
    ("<x,y | x^2, y^3, (x*y)^2>", {"x": 1, "y": 0}, 2),
])
def test_simplify_preserves_invariants(text, images, m):
    pres, table, data = kernel(text, images, m)
    before = abelian_invariants(data.presentation)
    after = simplify(data)
    assert sorted(d for d in before.invariant_factors if d != 1) == \
        sorted(d for d in abelian_invariants(after.presentation).invariant_factors if d != 1)
    assert simplify(after).presentation == after.presentation


def test_index_times_subgroup_order():
    pres, table, data = kernel("<x,y | x^2, y^3, (x*y)^2>", {"x": 1, "y": 0}, 2)
    assert quotient_order(pres) == table.index * quotient_order(simplify(data).presentation)


def test_dead_generator_removed():
    pres = parse_presentation("<a | a^2>")
    table = todd_coxeter(pres, [pres.word("a")])
    data = rs_presentation(pres, table)
    assert str(data.presentation) == "<x1 | x1^2>"
    forced = parse_presentation("<a,b | a, b^2>")
    data = simplify(rs_presentation(forced, todd_coxeter(forced, [forced.word("a"),
                                                                   forced.word("b")])))
    assert data.presentation.alphabet == ("x2",)
    assert data.eliminated == ("x1",)


def test_rewrite_elements():
    pres, table, data = kernel("<a | a^6>", {"a": 1}, 2)
    assert str(rewrite(data, table, pres.word("a^4"))) == "x1^2"
    with pytest.raises(ValueError):
        rewrite(data, table, pres.word("a"))


def test_relation_matrix_examples():
    g1 = parse_presentation("<a,b | (a*[b,a])^3, b^3>")
    assert relation_matrix(g1).tolist() == [[3, 0], [0, 3]]


def test_exponent_sum_map_must_be_homomorphism():
    with pytest.raises(ValueError):
        exponent_sum_table(parse_presentation("<a,b | a^3, b>"), {"a": 0, "b": 1}, 3)


def test_conjugate_checks(w):
    assert is_conjugate_of(w("b*a*b^-1"), "a")
    assert not is_conjugate_of(w("b*a*b"), "a")
    assert not is_conjugate_of(w("a^2"), "a")
