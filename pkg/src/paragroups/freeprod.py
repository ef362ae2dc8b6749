"""Normal forms and element orders in C_{p^l} * C_{p^k} = <a, b | a^(p^l), b^(p^k)>.

A normal form is an alternating tuple of syllables ``(factor, exponent)``
with factor 0 for ``a`` and 1 for ``b``; each exponent lies in
``[1, order)``.  Equal elements have literally equal normal forms.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from typing import Union

from sympy import isprime

from .word import Word, commutator, free_reduce, multiply

INFINITE = "infinite"
Order = Union[int, str]

SyllableNF = tuple[tuple[int, int], ...]


class ClaimViolation(AssertionError):
    """An element that should have infinite order turned out to have finite order."""

    def __init__(self, gamma: Word, nf: SyllableNF):
        super().__init__(f"gamma = {gamma}: gamma*[b,gamma] has finite order (normal form {nf})")
        self.gamma = gamma
        self.normal_form = nf


@dataclass(frozen=True)
class FreeProductContext:
    p: int
    l: int = 1
    k: int = 1
    a: str = "a"
    b: str = "b"

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.l < 1 or self.k < 1:
            raise ValueError("l and k must be >= 1")
        if self.p == 2:
            warnings.warn("p = 2 is outside the odd-prime setting; results are computed but "
                          "not covered by the infinite-order argument", stacklevel=3)

    @property
    def orders(self) -> tuple[int, int]:
        return self.p ** self.l, self.p ** self.k

    @property
    def alphabet(self) -> tuple[str, str]:
        return self.a, self.b

    @property
    def in_scope(self) -> bool:
        return self.p != 2

    def word(self, text: str) -> Word:
        from .parse import parse_word

        return parse_word(text, self.alphabet)


def _factor(ctx: FreeProductContext, gen: str) -> int:
    if gen == ctx.a:
        return 0
    if gen == ctx.b:
        return 1
    raise ValueError(f"generator {gen!r} is not a factor generator of {ctx}")


def _push(out: list[list[int]], factor: int, exp: int, orders) -> None:
    exp %= orders[factor]
    if not exp:
        return
    if out and out[-1][0] == factor:
        e = (out[-1][1] + exp) % orders[factor]
        if e:
            out[-1][1] = e
        else:
            out.pop()
    else:
        out.append([factor, exp])


def nf_reduce(ctx: FreeProductContext, w: Word) -> SyllableNF:
    orders = ctx.orders
    out: list[list[int]] = []
    for g, e in w.syllables:
        _push(out, _factor(ctx, g), e, orders)
    return tuple((f, e) for f, e in out)


def nf_multiply(ctx: FreeProductContext, u: SyllableNF, v: SyllableNF) -> SyllableNF:
    out = [list(s) for s in u]
    for f, e in v:
        _push(out, f, e, ctx.orders)
    return tuple((f, e) for f, e in out)


def nf_to_word(ctx: FreeProductContext, nf: SyllableNF) -> Word:
    names = ctx.alphabet
    return Word(ctx.alphabet, tuple((names[f], e) for f, e in nf))


def nf_equal(ctx: FreeProductContext, u: Word, v: Word) -> bool:
    return nf_reduce(ctx, u) == nf_reduce(ctx, v)


def cyclic_reduce(ctx: FreeProductContext, nf: SyllableNF) -> SyllableNF:
    """A cyclically reduced conjugate: end syllables in different factors, or length <= 1."""
    syl = list(nf)
    while len(syl) >= 2 and syl[0][0] == syl[-1][0]:
        f = syl[0][0]
        e = (syl[0][1] + syl[-1][1]) % ctx.orders[f]
        syl = syl[1:-1]
        if e:
            syl.insert(0, (f, e))
    return tuple(syl)


def element_order(ctx: FreeProductContext, w: Word) -> Order:
    """Order of ``w``: an int, or ``INFINITE``.

    Finite-order elements of a free product are conjugate into a factor,
    which is exactly when the cyclic reduction has at most one syllable.
    """
    cr = cyclic_reduce(ctx, nf_reduce(ctx, w))
    if not cr:
        return 1
    if len(cr) >= 2:
        return INFINITE
    f, e = cr[0]
    m = ctx.orders[f]
    return m // math.gcd(m, e)


def check_inf_order_claim(ctx: FreeProductContext, gamma: Word) -> str:
    """Check that ``gamma * [b, gamma]`` has infinite order.

    Returns ``"precondition_violated"`` when gamma is trivial or a power of
    ``b`` (the statement excludes those), ``"infinite_confirmed"`` otherwise.
    A finite order raises :class:`ClaimViolation`.
    """
    nf = nf_reduce(ctx, gamma)
    if not nf or (len(nf) == 1 and nf[0][0] == 1):
        return "precondition_violated"
    b = Word.gen(ctx.alphabet, ctx.b)
    element = multiply(gamma, commutator(b, gamma))
    if element_order(ctx, element) != INFINITE:
        raise ClaimViolation(gamma, nf_reduce(ctx, element))
    return "infinite_confirmed"


def normal_forms(ctx: FreeProductContext, max_syllables: int):
    """Every normal form with at most ``max_syllables`` syllables."""
    ma, mb = ctx.orders
    yield ()
    frontier: list[SyllableNF] = [((0, e),) for e in range(1, ma)] + [((1, e),) for e in range(1, mb)]
    length = 1
    while frontier and length <= max_syllables:
        yield from frontier
        nxt = []
        for nf in frontier:
            f = 1 - nf[-1][0]
            for e in range(1, ctx.orders[f]):
                nxt.append(nf + ((f, e),))
        frontier = nxt
        length += 1


def rewrite_oracle(ctx: FreeProductContext, raw) -> str:
    """Letter-level normal form by exhaustive string rewriting.

    ``raw`` is a Word or any list of ``(generator, exponent)`` pairs, reduced
    or not.  Inverse letters are rewritten as positive powers
    (``A -> a^(m-1)``), then ``a^m`` and ``b^m`` are deleted, one match at a
    time, until nothing matches.  Returns the result spelled over ``a``/``b``.
    Independent of :func:`nf_reduce`, which works with modular syllable
    arithmetic.
    """
    ma, mb = ctx.orders
    letters = []
    for g, e in getattr(raw, "syllables", raw):
        f = _factor(ctx, g)
        ch = "ab"[f]
        letters.append((ch if e > 0 else ch.upper()) * abs(e))
    s = "".join(letters)
    rules = [("A", "a" * (ma - 1)), ("B", "b" * (mb - 1)), ("a" * ma, ""), ("b" * mb, "")]
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules:
            if lhs in s:
                s = s.replace(lhs, rhs, 1)
                changed = True
                break
    return s


def nf_spelled(nf: SyllableNF) -> str:
    return "".join("ab"[f] * e for f, e in nf)


# seeded suites -----------------------------------------------------------

def random_raw_word(ctx: FreeProductContext, rng, max_syllables: int) -> list[tuple[str, int]]:
    """Unreduced syllable list: neighbours may repeat a factor, exponents may overflow."""
    out = []
    for _ in range(rng.randint(0, max_syllables)):
        f = rng.randrange(2)
        m = ctx.orders[f]
        e = rng.choice([e for e in range(-2 * m, 2 * m + 1) if e])
        out.append((ctx.alphabet[f], e))
    return out


def random_normal_form(ctx: FreeProductContext, rng, max_syllables: int) -> SyllableNF:
    length = rng.randint(1, max_syllables)
    f = rng.randrange(2)
    nf = []
    for _ in range(length):
        nf.append((f, rng.randrange(1, ctx.orders[f])))
        f = 1 - f
    return tuple(nf)


def inf_order_suite(ctx: FreeProductContext, exhaustive_syllables: int = 4,
                    random_cases: int = 1000, random_syllables: int = 10,
                    seed: int = 0) -> dict:
    """Check that gamma*[b, gamma] has infinite order on many gammas.

    All normal forms up to ``exhaustive_syllables`` are tried, then
    ``random_cases`` seeded random ones that are not powers of ``b``.  A
    finite order raises :class:`ClaimViolation`.
    """
    counts = {"exhaustive": 0, "excluded": 0, "random": 0}
    for nf in normal_forms(ctx, exhaustive_syllables):
        if check_inf_order_claim(ctx, nf_to_word(ctx, nf)) == "precondition_violated":
            counts["excluded"] += 1
        else:
            counts["exhaustive"] += 1
    rng = random.Random(seed)
    while counts["random"] < random_cases:
        gamma = nf_to_word(ctx, random_normal_form(ctx, rng, random_syllables))
        if check_inf_order_claim(ctx, gamma) == "infinite_confirmed":
            counts["random"] += 1
    return counts


def oracle_suite(ctx: FreeProductContext, cases: int = 1000, max_syllables: int = 12,
                 seed: int = 0) -> dict:
    """Compare nf_reduce with :func:`rewrite_oracle` on seeded random words.

    Also checks that reducing a normal form again changes nothing.
    """
    rng = random.Random(seed)
    disagree = []
    not_idempotent = []
    for _ in range(cases):
        raw = random_raw_word(ctx, rng, max_syllables)
        w = free_reduce(raw, ctx.alphabet)
        nf = nf_reduce(ctx, w)
        if nf_spelled(nf) != rewrite_oracle(ctx, raw):
            disagree.append(raw)
        if nf_reduce(ctx, nf_to_word(ctx, nf)) != nf:
            not_idempotent.append(raw)
    return {"cases": cases, "disagreements": len(disagree),
            "not_idempotent": len(not_idempotent),
            "first_disagreement": disagree[0] if disagree else None}
