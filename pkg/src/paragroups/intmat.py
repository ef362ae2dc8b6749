"""Exact integer matrices: Smith normal form, determinants, abelian invariants.

Everything is plain Python ``int``; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("matrix rows have different lengths")
        return cls(rows, ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def _as_matrix(A) -> IntMatrix:
    return A if isinstance(A, IntMatrix) else IntMatrix.from_rows(A)


@dataclass(frozen=True)
class SmithForm:
    """Invariant factors ``d1 | d2 | ... `` with zeros (free part) last."""

    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d != 0)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)

    @property
    def order(self) -> int | None:
        """Order of the abelian group; ``None`` if it is infinite."""
        if self.free_rank:
            return None
        return prod(self.invariant_factors)

    def is_trivial(self) -> bool:
        return all(d == 1 for d in self.invariant_factors)


def smith_normal_form(A) -> SmithForm:
    """Invariant factors of ``A`` (length ``min(rows, cols)``)."""
    M = _as_matrix(A).tolist()
    m = len(M)
    n = len(M[0]) if m else 0
    t = 0
    while t < min(m, n):
        pivot = _smallest(M, t)
        if pivot is None:
            break
        _move(M, pivot, t)
        while True:
            changed = False
            p = M[t][t]
            for i in range(t + 1, m):
                if M[i][t]:
                    q = M[i][t] // p
                    row_i, row_t = M[i], M[t]
                    for j in range(t, n):
                        row_i[j] -= q * row_t[j]
                    if row_i[t]:
                        changed = True
            for j in range(t + 1, n):
                if M[t][j]:
                    q = M[t][j] // p
                    for i in range(t, m):
                        M[i][j] -= q * M[i][t]
                    if M[t][j]:
                        changed = True
            if changed:
                # a nonzero remainder is smaller than the pivot; promote it
                _move(M, _smallest_in_cross(M, t), t)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if M[i][j] % p), None)
            if bad is None:
                break
            # restore divisibility: fold the offending row into the pivot row
            i = bad[0]
            for j in range(t, n):
                M[t][j] += M[i][j]
        t += 1
    diag = [abs(M[i][i]) for i in range(min(m, n))]
    return SmithForm(tuple(diag))


def _smallest(M, t):
    best = None
    for i in range(t, len(M)):
        row = M[i]
        for j in range(t, len(row)):
            v = row[j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
                if best[0] == 1:
                    return i, j
    return None if best is None else best[1:]


def _smallest_in_cross(M, t):
    cand = [(abs(M[i][t]), i, t) for i in range(t, len(M)) if M[i][t]]
    cand += [(abs(M[t][j]), t, j) for j in range(t, len(M[0])) if M[t][j]]
    return min(cand)[1:]


def _move(M, pos, t):
    i, j = pos
    if i != t:
        M[i], M[t] = M[t], M[i]
    if j != t:
        for row in M:
            row[j], row[t] = row[t], row[j]


def determinant(A) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    A = _as_matrix(A)
    n = A.nrows
    if n != A.ncols:
        raise ValueError(f"determinant of non-square {A.nrows}x{A.ncols} matrix")
    if n == 0:
        return 1
    M = A.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def relation_matrix(pres) -> IntMatrix:
    """One row per relator: the exponent sum of each generator."""
    return IntMatrix.from_rows(
        [[r.exponent_sum(g) for g in pres.alphabet] for r in pres.relators],
        ncols=len(pres.alphabet))


def abelian_invariants(pres) -> SmithForm:
    """Invariant factors of the abelianization, one per generator.

    Factors equal to 1 are kept, so ``order`` and ``free_rank`` read off
    directly; a free abelian group of rank r shows r zeros.
    """
    n = len(pres.alphabet)
    factors = smith_normal_form(relation_matrix(pres)).invariant_factors
    return SmithForm(tuple(factors) + (0,) * (n - len(factors)))
