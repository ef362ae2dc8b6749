"""Todd-Coxeter coset enumeration.

HLT strategy: cosets are processed in order, every relator is traced at
each coset (shortest relators first) and gaps are filled with new cosets.
Coincidences are merged with a union-find queue.  When the live coset
count reaches the limit, a lookahead pass scans all relators without
defining anything and the table is compacted.  The procedure is
deterministic: the same presentation and subgroup always give the same
table.

Running out of cosets is *inconclusive*: coset enumeration cannot prove a
subgroup has infinite index.
"""

from __future__ import annotations

import bisect
import os
from dataclasses import dataclass
from typing import Sequence

from .word import AlphabetError, Word, check_alphabet

DEFAULT_MAX_COSETS = 100_000
UNDEF = -1


def default_max_cosets() -> int:
    value = os.environ.get("PARAFREE_MAX_COSETS")
    return int(value) if value else DEFAULT_MAX_COSETS


class CosetLimitError(RuntimeError):
    """Enumeration needed more cosets than allowed; the answer is unknown."""

    def __init__(self, limit: int):
        super().__init__(f"coset limit of {limit} exceeded (inconclusive)")
        self.limit = limit


class TableNotClosedError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    alphabet: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alphabet", check_alphabet(self.alphabet))
        for r in self.relators:
            if not r.generators() <= set(self.alphabet):
                raise AlphabetError(f"relator {r} uses generators outside {self.alphabet}")
        # relators may come from a sub-alphabet; rehome them
        object.__setattr__(self, "relators",
                           tuple(Word(self.alphabet, r.syllables) for r in self.relators))
        if any(not r for r in self.relators):
            raise ValueError("relators must be nontrivial after free reduction")

    def word(self, text: str) -> Word:
        from .parse import parse_word

        return parse_word(text, self.alphabet)

    def with_relators(self, extra: Sequence[Word]) -> "Presentation":
        return Presentation(self.alphabet, self.relators + tuple(extra))

    def __str__(self) -> str:
        from .parse import format_presentation

        return format_presentation(self)


def _columns(w: Word, index: dict[str, int]) -> list[int]:
    """Letters of ``w`` as table columns: generator i -> 2i, its inverse -> 2i+1."""
    out = []
    for g, e in w.syllables:
        col = 2 * index[g] + (0 if e > 0 else 1)
        out.extend([col] * abs(e))
    return out


def _cyclic_reduce_cols(cols: list[int]) -> list[int]:
    i, j = 0, len(cols) - 1
    while i < j and cols[i] == cols[j] ^ 1:
        i += 1
        j -= 1
    return cols[i:j + 1]


@dataclass(frozen=True)
class CosetTable:
    """A closed coset table.

    ``rows[c][2*i]`` is the coset ``c * g_i`` and ``rows[c][2*i+1]`` is
    ``c * g_i^-1``.  Coset 0 is the subgroup itself.
    """

    alphabet: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]

    @property
    def index(self) -> int:
        return len(self.rows)

    @property
    def closed(self) -> bool:
        return all(v != UNDEF for row in self.rows for v in row)

    def column(self, name: str, inverse: bool = False) -> int:
        return 2 * self.alphabet.index(name) + (1 if inverse else 0)

    def permutation(self, name: str) -> tuple[int, ...]:
        col = self.column(name)
        return tuple(row[col] for row in self.rows)

    def act(self, coset: int, w: Word) -> int:
        """Image of ``coset`` under right multiplication by ``w``."""
        rows = self.rows
        for g, e in w.syllables:
            col = self.column(g, e < 0)
            for _ in range(abs(e)):
                coset = rows[coset][col]
                if coset == UNDEF:
                    raise TableNotClosedError("table has undefined entries")
        return coset

    def to_csv(self) -> str:
        header = ["coset"]
        for g in self.alphabet:
            header += [g, g + "^-1"]
        lines = [",".join(header)]
        for c, row in enumerate(self.rows):
            lines.append(",".join(str(v) for v in (c, *row)))
        return "\n".join(lines) + "\n"


def _standardize(rows: list[list[int]], ncols: int) -> tuple[tuple[int, ...], ...]:
    """Renumber cosets in breadth-first order from coset 0."""
    order = [0]
    new = {0: 0}
    i = 0
    while i < len(order):
        row = rows[order[i]]
        for x in range(ncols):
            d = row[x]
            if d not in new:
                new[d] = len(order)
                order.append(d)
        i += 1
    return tuple(tuple(new[v] for v in rows[c]) for c in order)


class _Overflow(Exception):
    pass


class _Enumerator:
    def __init__(self, pres: Presentation, subgroup_gens: Sequence[Word], max_cosets: int):
        self.alphabet = pres.alphabet
        index = {g: i for i, g in enumerate(pres.alphabet)}
        self.ncols = 2 * len(pres.alphabet)
        self.max_cosets = max_cosets

        # one representative per relator up to rotation and inversion,
        # shortest first so cheap relators close cosets early
        seen = set()
        self.relators: list[tuple[int, ...]] = []
        for r in pres.relators:
            cols = _cyclic_reduce_cols(_columns(r, index))
            inv = [c ^ 1 for c in reversed(cols)]
            key = min(tuple(rel[s:] + rel[:s]) for rel in (cols, inv) for s in range(len(rel)))
            if key not in seen:
                seen.add(key)
                self.relators.append(tuple(cols))
        self.relators.sort(key=len)
        self.subgroup = [tuple(_columns(w, index)) for w in subgroup_gens]

        self.table: list[list[int]] = [[UNDEF] * self.ncols]
        self.parent: list[int] = [0]
        self.live = 1

    # union-find over cosets; the smaller number survives
    def rep(self, k: int) -> int:
        parent = self.parent
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def merge(self, k: int, l: int, queue: list[int]) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        if k > l:
            k, l = l, k
        self.parent[l] = k
        queue.append(l)
        self.live -= 1

    def coincidence(self, a: int, b: int) -> None:
        table = self.table
        queue: list[int] = []
        self.merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            row = table[e]
            for x in range(self.ncols):
                f = row[x]
                if f == UNDEF:
                    continue
                xi = x ^ 1
                table[f][xi] = UNDEF
                e1, f1 = self.rep(e), self.rep(f)
                if table[e1][x] != UNDEF:
                    self.merge(f1, table[e1][x], queue)
                elif table[f1][xi] != UNDEF:
                    self.merge(e1, table[f1][xi], queue)
                else:
                    table[e1][x] = f1
                    table[f1][xi] = e1

    def define(self, c: int, x: int) -> None:
        if self.live >= self.max_cosets:
            raise _Overflow
        d = len(self.table)
        self.table.append([UNDEF] * self.ncols)
        self.parent.append(d)
        self.live += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c

    def scan(self, c: int, rel: tuple[int, ...], fill: bool) -> None:
        """Trace ``rel`` at ``c`` from both ends.

        A single gap is filled by deduction, a closed mismatch is a
        coincidence; with ``fill`` larger gaps get new cosets.
        """
        n = len(rel)
        while True:
            table = self.table
            f, i = c, 0
            while i < n:
                nf = table[f][rel[i]]
                if nf == UNDEF:
                    break
                f = nf
                i += 1
            if i == n:
                if f != c:
                    self.coincidence(f, c)
                return
            b, j = c, n - 1
            while j >= i:
                nb = table[b][rel[j] ^ 1]
                if nb == UNDEF:
                    break
                b = nb
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][rel[i]] = b
                table[b][rel[i] ^ 1] = f
                return
            if not fill:
                return
            self.define(f, rel[i])

    def lookahead(self) -> None:
        """Scan every relator at every live coset without defining new ones."""
        for c in range(len(self.table)):
            for rel in self.relators:
                if self.parent[c] != c:
                    break
                self.scan(c, rel, fill=False)

    def compact(self, resume: int) -> int:
        """Drop dead cosets; return the new number of the first live coset >= ``resume``."""
        alive = [c for c in range(len(self.table)) if self.parent[c] == c]
        new = {c: i for i, c in enumerate(alive)}
        self.table = [[UNDEF if v == UNDEF else new[v] for v in self.table[c]] for c in alive]
        self.parent = list(range(len(alive)))
        return bisect.bisect_left(alive, resume)

    def process_coset(self, c: int) -> None:
        for rel in self.relators:
            if self.parent[c] != c:
                return
            self.scan(c, rel, fill=True)
        if self.parent[c] == c:
            row = self.table[c]
            for x in range(self.ncols):
                if row[x] == UNDEF:
                    self.define(c, x)

    def run(self) -> CosetTable:
        c = 0
        started = False
        while c < len(self.table):
            try:
                if not started:
                    for rel in self.subgroup:
                        if rel:
                            self.scan(0, rel, fill=True)
                    started = True
                if self.parent[c] == c:
                    self.process_coset(c)
            except _Overflow:
                self.lookahead()
                # too little reclaimed to make progress
                if self.live * 20 > self.max_cosets * 19:
                    raise CosetLimitError(self.max_cosets) from None
                c = self.compact(c)
                continue
            c += 1
        alive = [c for c in range(len(self.table)) if self.parent[c] == c]
        new = {c: i for i, c in enumerate(alive)}
        rows = [[new[v] for v in self.table[c]] for c in alive]
        return CosetTable(self.alphabet, _standardize(rows, self.ncols))


def todd_coxeter(pres: Presentation, subgroup_gens: Sequence[Word] = (),
                 max_cosets: int | None = None) -> CosetTable:
    """Enumerate the cosets of the subgroup *generated by* ``subgroup_gens``.

    No normal closure is taken.  To work in a quotient group, add words as
    relators instead (see :func:`quotient_order`).
    """
    if max_cosets is None:
        max_cosets = default_max_cosets()
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    for w in subgroup_gens:
        if not w.generators() <= set(pres.alphabet):
            raise AlphabetError(f"subgroup generator {w} uses generators outside {pres.alphabet}")
    return _Enumerator(pres, subgroup_gens, max_cosets).run()


def quotient_order(pres: Presentation, extra_relators: Sequence[Word] = (),
                   max_cosets: int | None = None) -> int:
    """Order of ``<alphabet | relators + extra_relators>``."""
    return todd_coxeter(pres.with_relators(extra_relators), (), max_cosets).index


def word_is_identity_in_quotient(table: CosetTable, w: Word) -> bool:
    """True iff ``w`` fixes every coset of the table."""
    if not table.closed:
        raise TableNotClosedError("table has undefined entries")
    return all(table.act(c, w) == c for c in range(table.index))


def check_table(table: CosetTable, pres: Presentation) -> None:
    """Assert that ``table`` is a permutation representation of ``pres``."""
    n = table.index
    for x in range(len(table.alphabet)):
        col = [row[2 * x] for row in table.rows]
        inv = [row[2 * x + 1] for row in table.rows]
        assert sorted(col) == list(range(n)), f"column {table.alphabet[x]} is not a bijection"
        assert all(inv[col[c]] == c for c in range(n)), "inverse column mismatch"
    for r in pres.relators:
        assert word_is_identity_in_quotient(table, r), f"relator {r} acts nontrivially"
