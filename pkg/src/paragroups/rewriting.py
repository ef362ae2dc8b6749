"""Reidemeister-Schreier presentations of subgroups from closed coset tables.

Schreier generators are named ``x1, x2, ...`` in (coset, generator) order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .coset import CosetTable, Presentation, TableNotClosedError, check_table
from .intmat import relation_matrix  # noqa: F401  (re-exported)
from .word import Word, free_reduce, invert, multiply


@dataclass(frozen=True)
class SchreierGenerator:
    name: str
    coset: int
    generator: str
    word: Word          # t_c * g * t_{c.g}^-1 in the parent group


@dataclass(frozen=True)
class SchreierData:
    transversal: tuple[Word, ...]
    generators: tuple[SchreierGenerator, ...]
    presentation: Presentation
    eliminated: tuple[str, ...] = field(default=())

    @property
    def index(self) -> int:
        return len(self.transversal)

    def generator(self, name: str) -> SchreierGenerator:
        return next(g for g in self.generators if g.name == name)


def _require_closed(table: CosetTable) -> None:
    if not table.closed:
        raise TableNotClosedError("Reidemeister-Schreier needs a closed coset table")


def schreier_transversal(table: CosetTable, order: Sequence[str] | None = None
                         ) -> tuple[Word, ...]:
    """Prefix-closed transversal by breadth-first search over positive generators.

    ``order`` fixes which generator is tried first; it defaults to the
    table's alphabet order.
    """
    _require_closed(table)
    order = tuple(order) if order is not None else table.alphabet
    if sorted(order) != sorted(table.alphabet):
        raise ValueError(f"generator order {order} is not a permutation of {table.alphabet}")
    words: list[Word | None] = [None] * table.index
    words[0] = Word.identity(table.alphabet)
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for g in order:
            d = table.rows[c][table.column(g)]
            if words[d] is None:
                words[d] = multiply(words[c], Word.gen(table.alphabet, g))
                queue.append(d)
    return tuple(words)


def rs_presentation(pres: Presentation, table: CosetTable,
                    order: Sequence[str] | None = None) -> SchreierData:
    """Presentation of the subgroup whose cosets ``table`` enumerates."""
    _require_closed(table)
    if table.alphabet != pres.alphabet:
        raise ValueError("table and presentation use different alphabets")
    check_table(table, pres)
    transversal = schreier_transversal(table, order)
    alphabet = pres.alphabet

    symbol: dict[tuple[int, str], str] = {}
    gens: list[SchreierGenerator] = []
    for c in range(table.index):
        for g in alphabet:
            d = table.rows[c][table.column(g)]
            w = multiply(multiply(transversal[c], Word.gen(alphabet, g)), invert(transversal[d]))
            if w:
                name = f"x{len(gens) + 1}"
                symbol[(c, g)] = name
                gens.append(SchreierGenerator(name, c, g, w))
    names = tuple(s.name for s in gens)

    relators = []
    for c in range(table.index):
        for r in pres.relators:
            relators.append(_rewrite(table, symbol, names, c, r))
    relators = [r for r in relators if r]
    return SchreierData(transversal, tuple(gens), Presentation(names, tuple(relators)))


def _rewrite(table, symbol, names, coset: int, w: Word) -> Word:
    """Rewrite ``t_coset * w * t_end^-1`` in the Schreier generators."""
    out = []
    rows = table.rows
    for g, e in w.syllables:
        col = table.column(g)
        inv = col + 1
        for _ in range(abs(e)):
            if e > 0:
                name = symbol.get((coset, g))
                if name:
                    out.append((name, 1))
                coset = rows[coset][col]
            else:
                coset = rows[coset][inv]
                name = symbol.get((coset, g))
                if name:
                    out.append((name, -1))
    return free_reduce(out, names)


def rewrite(data: SchreierData, table: CosetTable, w: Word) -> Word:
    """Express a subgroup element ``w`` in the (unsimplified) Schreier generators."""
    symbol = {(s.coset, s.generator): s.name for s in data.generators}
    if table.act(0, w) != 0:
        raise ValueError(f"{w} is not in the subgroup")
    return _rewrite(table, symbol, tuple(s.name for s in data.generators), 0, w)


def exponent_sum_table(pres: Presentation, images: Mapping[str, int], modulus: int) -> CosetTable:
    """Coset table of the kernel of ``g -> images[g]`` (exponent sums mod ``modulus``).

    The table is the regular action of the cyclic image.  Raises if some
    relator does not map to zero, i.e. the map is not a homomorphism.
    """
    if modulus < 1:
        raise ValueError("modulus must be positive")
    missing = set(pres.alphabet) - set(images)
    if missing:
        raise KeyError(f"no image for generator(s) {sorted(missing)}")
    for r in pres.relators:
        if sum(images[g] * r.exponent_sum(g) for g in pres.alphabet) % modulus:
            raise ValueError(f"relator {r} does not map to 0 mod {modulus}")
    # orbit of 0 under the images
    reached = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for g in pres.alphabet:
            u = (v + images[g]) % modulus
            if u not in reached:
                reached.add(u)
                frontier.append(u)
    elements = sorted(reached)
    pos = {v: i for i, v in enumerate(elements)}
    rows = []
    for v in elements:
        row = []
        for g in pres.alphabet:
            row += [pos[(v + images[g]) % modulus], pos[(v - images[g]) % modulus]]
        rows.append(tuple(row))
    return CosetTable(pres.alphabet, tuple(rows))


# Tietze moves -----------------------------------------------------------

def _cyclic_reduce(w: Word) -> Word:
    syl = list(w.syllables)
    while len(syl) >= 2 and syl[0][0] == syl[-1][0]:
        g = syl[0][0]
        e = syl[0][1] + syl[-1][1]
        syl = syl[1:-1]
        if e:
            syl = [(g, e)] + syl
    return Word(w.alphabet, tuple(syl))


def _cyclic_key(w: Word) -> tuple:
    variants = []
    for v in (w, invert(w)):
        s = v.syllables
        variants += [s[i:] + s[:i] for i in range(len(s))]
    return min(variants) if variants else ()


def _kill(relators: list[Word], alphabet, name: str, image: Word | None) -> list[Word]:
    """Replace generator ``name`` by ``image`` (identity when None)."""
    out = []
    for r in relators:
        syl = []
        for g, e in r.syllables:
            if g != name:
                syl.append((g, e))
            elif image is not None:
                img = image if e > 0 else invert(image)
                syl.extend(img.syllables * abs(e))
        out.append(free_reduce(syl, alphabet))
    return out


def _tidy(relators: list[Word]) -> list[Word]:
    seen = set()
    out = []
    for r in relators:
        r = _cyclic_reduce(r)
        if not r:
            continue
        key = _cyclic_key(r)
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def simplify(data: SchreierData, substitute: bool = True) -> SchreierData:
    """Light Tietze simplification.

    Repeats two moves until neither applies: a relator that is a single
    generator kills that generator; with ``substitute``, a relator in which
    some generator occurs exactly once (exponent +-1) is solved for it and
    the solution substituted everywhere.  Relators are cyclically reduced
    and deduplicated up to rotation and inversion along the way.
    """
    alphabet = list(data.presentation.alphabet)
    relators = _tidy(list(data.presentation.relators))
    eliminated = list(data.eliminated)
    while True:
        full = tuple(data.presentation.alphabet)
        dead = next((r for r in relators if len(r.syllables) == 1 and abs(r.syllables[0][1]) == 1),
                    None)
        if dead is not None:
            name = dead.syllables[0][0]
            relators = _tidy(_kill(relators, full, name, None))
            alphabet.remove(name)
            eliminated.append(name)
            continue
        if not substitute:
            break
        move = _find_substitution(relators)
        if move is None:
            break
        r, name, image = move
        relators.remove(r)
        relators = _tidy(_kill(relators, full, name, image))
        alphabet.remove(name)
        eliminated.append(name)

    alphabet = tuple(alphabet)
    pres = Presentation(alphabet, tuple(Word(alphabet, r.syllables) for r in relators))
    keep = set(alphabet)
    gens = tuple(g for g in data.generators if g.name in keep)
    return replace(data, generators=gens, presentation=pres, eliminated=tuple(eliminated))


def _find_substitution(relators: list[Word]):
    """Shortest relator with a generator occurring once; solve for that generator."""
    for r in sorted(relators, key=len):
        counts: dict[str, int] = {}
        for g, e in r.syllables:
            counts[g] = counts.get(g, 0) + abs(e)
        once = [i for i, (g, e) in enumerate(r.syllables) if abs(e) == 1 and counts[g] == 1]
        if not once:
            continue
        i = once[-1]
        name, eps = r.syllables[i]
        # r ~ x^eps * rest  (cyclically), so x = rest^(-eps)
        rest = Word(r.alphabet, r.syllables[i + 1:] + r.syllables[:i])
        rest = free_reduce(rest.syllables, r.alphabet)
        image = invert(rest) if eps == 1 else rest
        return r, name, image
    return None


def is_conjugate_of(w: Word, generator: str) -> bool:
    """True iff ``w`` is literally ``u * generator * u^-1`` for some word ``u``."""
    syl = w.syllables
    if len(syl) % 2 == 0:
        return False
    mid = len(syl) // 2
    if syl[mid] != (generator, 1):
        return False
    left = Word(w.alphabet, syl[:mid])
    right = Word(w.alphabet, syl[mid + 1:])
    return right == invert(left)


def is_transversal_conjugate(w: Word, generator: str, transversal: Sequence[Word]) -> bool:
    """True iff ``w = t * generator * t'^-1`` with ``t, t'`` transversal words."""
    for t in transversal:
        for t2 in transversal:
            g = Word.gen(w.alphabet, generator)
            if multiply(multiply(t, g), invert(t2)) == w:
                return True
    return False
