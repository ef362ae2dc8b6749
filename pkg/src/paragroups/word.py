"""Free-group words in syllable (run-length) form.

A word is a tuple of ``(generator, exponent)`` pairs with nonzero exponents
and no two adjacent syllables on the same generator.  Exponents such as
``a^(3^4)`` therefore cost one syllable, not 81 letters.

Commutator convention: ``[x, y] = x^-1 y^-1 x y``.  Every relator built in
this package (``a[b,a]``, ``a[a^p,b]``, the lower central relators) assumes
it, and the opposite convention silently changes the groups involved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class AlphabetError(ValueError):
    """A generator name is unknown, malformed or clashes with another."""


def check_alphabet(names: Iterable[str]) -> tuple[str, ...]:
    names = tuple(names)
    for name in names:
        if not isinstance(name, str) or not name or not name.isalnum():
            raise AlphabetError(f"invalid generator name {name!r}")
    if len(set(names)) != len(names):
        raise AlphabetError(f"duplicate generator names in {names!r}")
    return names


def _reduce(raw: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    out: list[list] = []
    for gen, exp in raw:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([gen, exp])
    return tuple((g, e) for g, e in out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word over ``alphabet``.

    Construct through :func:`free_reduce` or :meth:`Word.gen`; the raw
    constructor trusts its arguments.
    """

    alphabet: tuple[str, ...]
    syllables: tuple[tuple[str, int], ...] = ()

    @classmethod
    def identity(cls, alphabet: Sequence[str]) -> "Word":
        return cls(tuple(alphabet), ())

    @classmethod
    def gen(cls, alphabet: Sequence[str], name: str, exp: int = 1) -> "Word":
        return free_reduce([(name, exp)], alphabet)

    def __len__(self) -> int:
        """Letter length (sum of absolute exponents)."""
        return sum(abs(e) for _, e in self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, n: int) -> "Word":
        return power(self, n)

    def letters(self) -> list[tuple[str, int]]:
        """Expand to single letters ``(gen, +1 | -1)``."""
        out = []
        for g, e in self.syllables:
            s = 1 if e > 0 else -1
            out.extend([(g, s)] * abs(e))
        return out

    def exponent_sum(self, name: str) -> int:
        return sum(e for g, e in self.syllables if g == name)

    def generators(self) -> set[str]:
        return {g for g, _ in self.syllables}

    def __str__(self) -> str:
        from .parse import format_word

        return format_word(self)


def free_reduce(raw: Iterable[tuple[str, int]], alphabet: Sequence[str]) -> Word:
    """Return the unique freely reduced word for a raw syllable list."""
    alphabet = tuple(alphabet)
    raw = list(raw)
    known = set(alphabet)
    for gen, exp in raw:
        if gen not in known:
            raise AlphabetError(f"generator {gen!r} not in alphabet {alphabet}")
        if not isinstance(exp, int):
            raise TypeError(f"exponent must be an int, got {exp!r}")
    return Word(alphabet, _reduce(raw))


def _same_alphabet(u: Word, v: Word) -> None:
    if u.alphabet != v.alphabet:
        raise AlphabetError(f"alphabet mismatch: {u.alphabet} vs {v.alphabet}")


def multiply(u: Word, v: Word) -> Word:
    _same_alphabet(u, v)
    return Word(u.alphabet, _reduce(u.syllables + v.syllables))


def invert(w: Word) -> Word:
    return Word(w.alphabet, tuple((g, -e) for g, e in reversed(w.syllables)))


def power(w: Word, n: int) -> Word:
    if n < 0:
        return power(invert(w), -n)
    # Reduce once after concatenating; cancellation only happens at the seams.
    return Word(w.alphabet, _reduce(w.syllables * n))


def commutator(x: Word, y: Word) -> Word:
    """``[x, y] = x^-1 y^-1 x y``."""
    _same_alphabet(x, y)
    return Word(x.alphabet, _reduce(invert(x).syllables + invert(y).syllables
                                    + x.syllables + y.syllables))


def left_normed(words: Sequence[Word]) -> Word:
    """``[w1, w2, ..., wn] = [[...[w1, w2], ...], wn]``."""
    if not words:
        raise ValueError("need at least one word")
    acc = words[0]
    for w in words[1:]:
        acc = commutator(acc, w)
    return acc


def substitute(w: Word, images: Mapping[str, Word]) -> Word:
    """Apply the endomorphism ``g -> images[g]``.

    All images must share one alphabet, which becomes the result's alphabet.
    """
    missing = w.generators() - set(images)
    if missing:
        raise KeyError(f"no image for generator(s) {sorted(missing)}")
    alphabets = {img.alphabet for img in images.values()}
    if len(alphabets) > 1:
        raise AlphabetError("images use different alphabets")
    target = alphabets.pop() if alphabets else w.alphabet
    out: list[tuple[str, int]] = []
    for g, e in w.syllables:
        img = images[g] if e > 0 else invert(images[g])
        out.extend(img.syllables * abs(e))
    return Word(target, _reduce(out))


def lcs_relators(alphabet: Sequence[str], class_index: int) -> list[Word]:
    """Left-normed commutators of weight ``class_index`` in the generators.

    Their normal closure is the ``class_index``-th term of the lower central
    series of the free group, so adding them as relators presents the
    largest quotient of nilpotency class below ``class_index``.
    """
    if class_index < 2:
        raise ValueError("class_index must be >= 2")
    alphabet = check_alphabet(alphabet)
    gens = [Word.gen(alphabet, g) for g in alphabet]
    out = []
    for combo in itertools.product(gens, repeat=class_index):
        w = left_normed(combo)
        if w:
            out.append(w)
    return out
