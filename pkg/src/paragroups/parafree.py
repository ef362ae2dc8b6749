"""Lower-central comparisons with C_{p^l} * C_{p^k} and the kernel argument.

Isomorphism of finite quotients is certified as equal order plus an explicit
epimorphism; a surjection between finite groups of the same order is a
bijection.  Nothing here decides residual nilpotence: facts computed by the
machine are kept apart from the reasoning that turns them into statements
about the infinite groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from sympy import isprime

from .coset import (CosetLimitError, Presentation, default_max_cosets, todd_coxeter,
                    word_is_identity_in_quotient)
from .intmat import IntMatrix, SmithForm, abelian_invariants, determinant, relation_matrix, \
    smith_normal_form
from .rewriting import SchreierData, rs_presentation, simplify
from .word import Word, commutator, lcs_relators, substitute

FAMILIES = ("G1", "G2")
MATCH, MISMATCH, INCONCLUSIVE = "match", "mismatch", "inconclusive"


def default_max_class(p: int) -> int:
    return 5 if p == 3 else 3


@dataclass(frozen=True)
class ParaFamily:
    p: int
    l: int = 1
    k: int = 1

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.l < 1 or self.k < 1:
            raise ValueError("l and k must be >= 1")

    alphabet = ("a", "b")

    def _gen(self, name: str) -> Word:
        return Word.gen(self.alphabet, name)

    @property
    def pl(self) -> int:
        return self.p ** self.l

    @property
    def pk(self) -> int:
        return self.p ** self.k

    @property
    def gamma(self) -> Presentation:
        a, b = self._gen("a"), self._gen("b")
        return Presentation(self.alphabet, (a ** self.pl, b ** self.pk))

    def image_of_a(self, which: str) -> Word:
        a, b = self._gen("a"), self._gen("b")
        if which == "G1":
            return a * commutator(b, a)
        if which == "G2":
            return a * commutator(a ** self.pl, b)
        raise ValueError(f"unknown family {which!r}; expected one of {FAMILIES}")

    def images(self, which: str) -> dict[str, Word]:
        return {"a": self.image_of_a(which), "b": self._gen("b")}

    def presentation(self, which: str) -> Presentation:
        b = self._gen("b")
        return Presentation(self.alphabet, (self.image_of_a(which) ** self.pl, b ** self.pk))

    @property
    def g1(self) -> Presentation:
        return self.presentation("G1")

    @property
    def g2(self) -> Presentation:
        return self.presentation("G2")

    @property
    def h(self) -> Presentation:
        b = self._gen("b")
        return Presentation(self.alphabet, (self.image_of_a("G2"), b ** self.pl))


# lower central comparison -----------------------------------------------

@dataclass(frozen=True)
class LcsEntry:
    class_index: int
    order_G: int | None
    order_Gamma: int | None
    epi_ok: bool | None
    verdict: str
    note: str = ""

    def to_dict(self) -> dict:
        d = {"class": self.class_index, "order_G": self.order_G,
             "order_Gamma": self.order_Gamma, "epi_ok": self.epi_ok, "verdict": self.verdict}
        if self.note:
            d["note"] = self.note
        return d


@dataclass(frozen=True)
class LcsReport:
    entries: tuple[LcsEntry, ...]
    family: str | None = None

    def __post_init__(self):
        known = [e for e in self.entries if e.epi_ok is not None]
        for lo, hi in zip(known, known[1:]):
            # an epimorphism onto G/gamma_{i+1} induces one onto G/gamma_i
            assert not hi.epi_ok or lo.epi_ok, f"epimorphism certificate not monotone at {hi}"
        for e in self.entries:
            if e.verdict != INCONCLUSIVE:
                assert (e.verdict == MATCH) == (e.order_G == e.order_Gamma and e.epi_ok)

    @property
    def status(self) -> str:
        verdicts = [e.verdict for e in self.entries]
        if MISMATCH in verdicts:
            return "fail"
        if INCONCLUSIVE in verdicts:
            return "inconclusive"
        return "pass"

    @property
    def verified_through(self) -> int | None:
        """Largest c such that every class up to c matched."""
        last = None
        for e in self.entries:
            if e.verdict != MATCH:
                break
            last = e.class_index
        return last

    def to_dict(self) -> dict:
        return {"family": self.family, "status": self.status,
                "verified_through": self.verified_through,
                "classes": [e.to_dict() for e in self.entries]}


@lru_cache(maxsize=64)
def _lcs_table(pres: Presentation, class_index: int, max_cosets: int):
    extra = lcs_relators(pres.alphabet, class_index)
    return todd_coxeter(pres.with_relators(extra), (), max_cosets)


def images_generate_abelianization(target: Presentation, images: Mapping[str, Word]) -> bool:
    """Do the images generate Ab(target)?

    For a nilpotent quotient this is equivalent to generating the quotient
    itself.  Ab(target) is Z^n modulo the relator rows; the images generate
    it iff adding their exponent vectors as rows gives a trivial quotient.
    """
    rows = [[w.exponent_sum(g) for g in target.alphabet] for w in images.values()]
    rows += relation_matrix(target).tolist()
    n = len(target.alphabet)
    factors = smith_normal_form(IntMatrix.from_rows(rows, n)).invariant_factors
    return len(factors) == n and all(d == 1 for d in factors)


def compare_lcs(reference: Presentation, target: Presentation, images: Mapping[str, Word],
                max_class: int, max_cosets: int | None = None,
                family: str | None = None) -> LcsReport:
    """Compare ``reference/gamma_i`` with ``target/gamma_i`` for i = 2..max_class.

    ``images`` sends each reference generator to a target word and must
    define a homomorphism; this is checked class by class.  Once a class
    runs out of cosets the higher classes are skipped, since their quotients
    surject onto it and can only be larger.
    """
    if max_class < 2:
        raise ValueError("max_class must be >= 2")
    if max_cosets is None:
        max_cosets = default_max_cosets()
    images = {g: Word(target.alphabet, images[g].syllables) for g in reference.alphabet}
    generates = images_generate_abelianization(target, images)
    entries = []
    for i in range(2, max_class + 1):
        if entries and entries[-1].verdict == INCONCLUSIVE:
            entries.append(LcsEntry(i, None, None, None, INCONCLUSIVE, "skipped"))
            continue
        try:
            ref_order = _lcs_table(reference, i, max_cosets).index
            table = _lcs_table(target, i, max_cosets)
        except CosetLimitError as exc:
            entries.append(LcsEntry(i, None, None, None, INCONCLUSIVE, str(exc)))
            continue
        relators_ok = all(word_is_identity_in_quotient(table, substitute(r, images))
                          for r in reference.relators)
        epi = relators_ok and generates
        verdict = MATCH if epi and table.index == ref_order else MISMATCH
        entries.append(LcsEntry(i, table.index, ref_order, epi, verdict))
    return LcsReport(tuple(entries), family)


def verify_weakly_para(fam: ParaFamily, which: str, max_class: int | None = None,
                       max_cosets: int | None = None) -> LcsReport:
    if max_class is None:
        max_class = default_max_class(fam.p)
    return compare_lcs(fam.gamma, fam.presentation(which), fam.images(which),
                       max_class, max_cosets, family=which)


# the kernel of H -> C_{p^l} ---------------------------------------------

def h_kernel(fam: ParaFamily, h: Presentation | None = None,
             max_cosets: int | None = None) -> SchreierData:
    """Simplified presentation of the kernel of ``a -> 0, b -> 1``.

    The cosets of that kernel are those of the normal closure of ``a``, so
    the table comes from enumerating the quotient by ``a``.  The transversal
    tries ``b`` first, giving the powers of ``b``.  For p = 2 only dead
    generators are removed: substitution would shrink the square matrix.
    """
    if h is None:
        h = fam.h
    a = Word.gen(h.alphabet, "a")
    table = todd_coxeter(h.with_relators([a]), (), max_cosets)
    data = rs_presentation(h, table, order=("b", "a"))
    return simplify(data, substitute=fam.p != 2)


def matrix_A(p: int) -> IntMatrix:
    return relation_matrix(h_kernel(ParaFamily(p)).presentation)


def det_formula(p: int) -> int:
    return p ** p - (p - 1) ** p


def commutator_subgroup(p: int, max_cosets: int | None = None) -> SchreierData:
    """Simplified presentation of [Gamma, Gamma] in C_p * C_p."""
    gamma = ParaFamily(p).gamma
    a, b = (Word.gen(gamma.alphabet, g) for g in gamma.alphabet)
    table = todd_coxeter(gamma.with_relators([commutator(a, b)]), (), max_cosets)
    return simplify(rs_presentation(gamma, table))


@dataclass
class KernelFacts:
    index: int
    generators: int
    relators: int
    invariants: SmithForm
    det: int | None

    @property
    def abelianization_nontrivial(self) -> bool:
        return not self.invariants.is_trivial()

    def to_dict(self) -> dict:
        return {"index": self.index, "generators": self.generators,
                "relators": self.relators,
                "invariant_factors": list(self.invariants.invariant_factors),
                "abelianization_order": self.invariants.order,
                "det": self.det}


def kernel_facts(fam: ParaFamily, h: Presentation | None = None,
                 max_cosets: int | None = None) -> KernelFacts:
    data = h_kernel(fam, h, max_cosets)
    pres = data.presentation
    m = relation_matrix(pres)
    det = determinant(m) if m.nrows == m.ncols and m.nrows else None
    return KernelFacts(data.index, len(pres.alphabet), len(pres.relators),
                       abelian_invariants(pres), det)


# recorded, not checked: the steps that need the infinite groups
SUPPLIED_REASONING = (
    "K is generated by conjugates of a and Ab(K) != 1, so a != 1 in H",
    "a^(p^l) = 1 in G2 would give a^(p^l) = 1 in H and then a = a[a^(p^l),b] = 1 in H; "
    "so a^(p^l) != 1 in G2",
    "G2 -> Gamma (a -> a, b -> b) is onto and kills a^(p^l), so it is not injective",
    "G2 is weakly para-Gamma and that map is not injective, so G2 is not residually nilpotent",
)

CERTIFIED = "certified"
BROKEN = "chain broken"


@dataclass
class NonRNVerdict:
    family: ParaFamily
    weakly_para: LcsReport
    kernel: KernelFacts | None
    verdict: str
    reasoning: Sequence[str] = field(default=SUPPLIED_REASONING)
    note: str = ""

    @property
    def status(self) -> str:
        if self.verdict == CERTIFIED:
            return "pass"
        if self.verdict == INCONCLUSIVE:
            return "inconclusive"
        return "fail"

    def to_dict(self) -> dict:
        return {"p": self.family.p, "l": self.family.l, "k": self.family.k,
                "verdict": self.verdict,
                "weakly_para": self.weakly_para.to_dict(),
                "kernel": None if self.kernel is None else self.kernel.to_dict(),
                "paper_supplied_reasoning": list(self.reasoning),
                "note": self.note}


def verify_not_residually_nilpotent(fam: ParaFamily, max_class: int | None = None,
                                    max_cosets: int | None = None,
                                    h_override: Presentation | None = None) -> NonRNVerdict:
    """Machine facts behind the failure of residual nilpotence for G2.

    ``h_override`` replaces H, for negative controls.
    """
    report = verify_weakly_para(fam, "G2", max_class, max_cosets)
    try:
        facts = kernel_facts(fam, h_override, max_cosets)
    except CosetLimitError as exc:
        return NonRNVerdict(fam, report, None, INCONCLUSIVE, note=str(exc))
    if not facts.abelianization_nontrivial:
        return NonRNVerdict(fam, report, facts, BROKEN,
                            note="kernel abelianization is trivial; a = 1 is not excluded")
    if report.status == "fail":
        return NonRNVerdict(fam, report, facts, MISMATCH, note="G2 is not weakly para")
    if report.status == "inconclusive":
        return NonRNVerdict(fam, report, facts, INCONCLUSIVE,
                            note=f"weakly para verified through class {report.verified_through}")
    return NonRNVerdict(fam, report, facts, CERTIFIED,
                        note=f"quotients checked through class {report.verified_through}; "
                             "the remaining steps are paper-supplied reasoning")


def type_label(report: LcsReport, facts: NonRNVerdict | None = None) -> str:
    """Label attached to the two known families; never derived."""
    if report.status == "fail":
        return "unknown"
    if report.family == "G2":
        if facts is not None and facts.verdict != CERTIFIED:
            return "unknown"
        return "Type II"
    if report.family == "G1":
        # the label belongs to G1 modulo the intersection of its lower central series
        return "Type III"
    return "unknown"


# kernel shape and matrix comparisons -------------------------------------

REFERENCE_MATRIX_P3 = ((-3, 2, 0), (0, -3, 2), (-2, 0, 3))


def _sign_normal(row: Sequence[int]) -> tuple[int, ...]:
    lead = next((v for v in row if v), 0)
    return tuple(-v for v in row) if lead < 0 else tuple(row)


def equal_up_to_rows(A, B) -> bool:
    """Equality up to permuting rows and flipping row signs."""
    rows_a = IntMatrix.from_rows(A).rows if not isinstance(A, IntMatrix) else A.rows
    rows_b = IntMatrix.from_rows(B).rows if not isinstance(B, IntMatrix) else B.rows
    return sorted(map(_sign_normal, rows_a)) == sorted(map(_sign_normal, rows_b))


def kernel_shape(fam: ParaFamily) -> dict:
    """Shape facts for the kernel of H: counts, exponent patterns, conjugates of a."""
    from .rewriting import is_conjugate_of, is_transversal_conjugate

    data = h_kernel(fam)
    pres = data.presentation
    p = fam.pl
    patterns = []
    for r in pres.relators:
        sums = sorted(v for v in (r.exponent_sum(g) for g in pres.alphabet) if v)
        patterns.append(sums)
    pattern_ok = all(s in ([-p, p - 1], [-(p - 1), p]) for s in patterns)
    conj = [is_conjugate_of(g.word, "a") and is_transversal_conjugate(g.word, "a", data.transversal)
            for g in data.generators]
    n = fam.p
    return {"generators": len(pres.alphabet), "relators": len(pres.relators),
            "presentation": str(pres),
            "schreier_words": {g.name: str(g.word) for g in data.generators},
            "transversal": [str(t) for t in data.transversal],
            "patterns": patterns,
            "ok": (len(pres.alphabet) == n and len(pres.relators) == n and pattern_ok
                   and all(conj))}
