"""Text grammar for words and presentations.

Words::

    word  := factor ( '*'? factor )*
    factor:= atom ( '^' int )?
    atom  := name | '1' | '(' word ')' | '[' word ',' word ( ',' word )* ']'
    int   := '-'? digits | '(' '-'? digits ')'

``[x, y, z]`` is left-normed: ``[[x, y], z]``.  Generator names are matched
longest-first against the alphabet, so ``ab`` is ``a*b`` unless ``ab`` is
itself a generator.

Presentations: ``<a, b | a^3, b^3, [a,b]>``.
"""

from __future__ import annotations

from typing import Sequence

from .word import AlphabetError, Word, check_alphabet, left_normed, multiply, power


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos


class _Parser:
    def __init__(self, text: str, alphabet: Sequence[str]):
        self.text = text
        self.pos = 0
        self.alphabet = tuple(alphabet)
        self.names = sorted(self.alphabet, key=len, reverse=True)

    def error(self, message: str):
        raise ParseError(message, self.text, self.pos)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self) -> int:
        if self.peek() == "(":
            self.pos += 1
            n = self.integer()
            self.expect(")")
            return n
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start:self.pos]
        if digits in ("", "-", "+"):
            self.pos = start
            self.error("expected integer")
        return int(digits)

    def atom(self) -> Word:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            w = self.word()
            self.expect(")")
            return w
        if ch == "[":
            self.pos += 1
            parts = [self.word()]
            while self.peek() == ",":
                self.pos += 1
                parts.append(self.word())
            if len(parts) < 2:
                self.error("commutator needs at least two entries")
            self.expect("]")
            return left_normed(parts)
        for name in self.names:
            if self.text.startswith(name, self.pos):
                self.pos += len(name)
                return Word.gen(self.alphabet, name)
        if ch == "1":
            self.pos += 1
            return Word.identity(self.alphabet)
        if ch.isalnum():
            end = self.pos
            while end < len(self.text) and self.text[end].isalnum():
                end += 1
            raise AlphabetError(
                f"unknown generator in {self.text[self.pos:end]!r} at position {self.pos}"
                f" (alphabet {', '.join(self.alphabet)})")
        self.error("expected generator, '(' or '['")

    def factor(self) -> Word:
        w = self.atom()
        while self.peek() == "^":
            self.pos += 1
            w = power(w, self.integer())
        return w

    def word(self) -> Word:
        w = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                w = multiply(w, self.factor())
            elif ch and (ch.isalnum() or ch in "(["):
                w = multiply(w, self.factor())
            else:
                return w

    def finish(self) -> None:
        if self.peek():
            self.error("unexpected trailing input")


def parse_word(text: str, alphabet: Sequence[str] = ("a", "b")) -> Word:
    parser = _Parser(text, check_alphabet(alphabet))
    w = parser.word()
    parser.finish()
    return w


def parse_presentation(text: str):
    """Parse ``<g1,...,gm | r1, ..., rn>`` into a :class:`Presentation`."""
    from .coset import Presentation

    text = text.strip()
    if not (text.startswith("<") and text.endswith(">")):
        raise ParseError("presentation must be enclosed in '<' and '>'", text, 0)
    body = text[1:-1]
    head, bar, tail = body.partition("|")
    names = [n.strip() for n in head.split(",")]
    if names == [""]:
        names = []
    alphabet = check_alphabet(names)
    relators = []
    if bar and tail.strip():
        parser = _Parser(text, alphabet)
        parser.pos = 1 + len(head) + 1
        while True:
            start = parser.pos
            w = parser.word()
            if not w:
                raise ParseError("relator reduces to the identity", text, start)
            relators.append(w)
            if parser.peek() == ",":
                parser.pos += 1
                continue
            if parser.peek() == ">" and parser.pos == len(text) - 1:
                break
            parser.error("expected ',' or '>'")
    return Presentation(alphabet, tuple(relators))


def format_word(w: Word) -> str:
    if not w.syllables:
        return "1"
    return "*".join(g if e == 1 else f"{g}^{e}" for g, e in w.syllables)


def format_presentation(pres) -> str:
    gens = ",".join(pres.alphabet)
    rels = ", ".join(format_word(r) for r in pres.relators)
    return f"<{gens} | {rels}>"

