"""Exact linear algebra over Q by fraction-free (integer) row reduction.

Rows are sparse dicts ``{column: int}``.  Rational input rows are cleared of
denominators first; every stored pivot row is primitive (content 1) with a
positive pivot, so entries stay small and no Fraction arithmetic happens in
the elimination loop.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple of Fraction


def _integral_row(row) -> dict[int, int]:
    items = [(j, Fraction(v)) for j, v in (row.items() if isinstance(row, dict) else enumerate(row)) if v]
    if not items:
        return {}
    den = math.lcm(*(v.denominator for _, v in items))
    out = {j: int(v * den) for j, v in items}
    g = math.gcd(*out.values())
    if g > 1:
        out = {j: v // g for j, v in out.items()}
    return out


class EchelonBasis:
    """Incrementally maintained row-echelon basis of a subspace of Q^ncols."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row) -> dict[int, int]:
        """Reduce an integral sparse row against the basis (result is primitive)."""
        r = dict(row)
        while r:
            lead = min(r)
            piv = self.pivots.get(lead)
            if piv is None:
                # eliminate any later pivots too, for a canonical remainder
                for col in sorted(r):
                    if col == lead:
                        continue
                    p = self.pivots.get(col)
                    if p is not None and col in r:
                        r = _eliminate(r, p, col)
                break
            r = _eliminate(r, piv, lead)
        return r

    def add(self, row) -> bool:
        """Insert a row; returns True if it enlarged the span."""
        r = self.reduce(_integral_row(row))
        if not r:
            return False
        lead = min(r)
        if r[lead] < 0:
            r = {j: -v for j, v in r.items()}
        # keep the basis reduced: clear this column from existing pivots
        for col, p in list(self.pivots.items()):
            if lead in p:
                self.pivots[col] = _eliminate(p, r, lead)
        self.pivots[lead] = r
        return True

    def contains(self, row) -> bool:
        return not self.reduce(_integral_row(row))

    def rref(self) -> list[tuple[Fraction, ...]]:
        """Reduced row-echelon basis, pivots normalized to 1, in pivot order."""
        out = []
        for col in sorted(self.pivots):
            p = self.pivots[col]
            lead = p[col]
            out.append(tuple(Fraction(p.get(j, 0), lead) for j in range(self.ncols)))
        return out


def _eliminate(r: dict[int, int], piv: dict[int, int], col: int) -> dict[int, int]:
    a = piv[col]
    b = r.get(col, 0)
    if not b:
        return r
    g = math.gcd(a, b)
    ma, mb = a // g, b // g
    out = {j: v * ma for j, v in r.items()}
    for j, v in piv.items():
        w = out.get(j, 0) - mb * v
        if w:
            out[j] = w
        else:
            out.pop(j, None)
    if out:
        g = math.gcd(*out.values())
        if g > 1:
            out = {j: v // g for j, v in out.items()}
    return out


def rank(rows: Iterable, ncols: int) -> int:
    eb = EchelonBasis(ncols)
    for row in rows:
        eb.add(row)
    return eb.rank


def row_space(rows: Iterable, ncols: int) -> list[tuple[Fraction, ...]]:
    eb = EchelonBasis(ncols)
    for row in rows:
        eb.add(row)
    return eb.rref()


def nullspace(rows: Iterable, ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of {v : row . v = 0 for all rows}, one vector per free column.

    Each basis vector has a 1 in its free column and zeros in the other free
    columns (the standard RREF kernel basis), so the output is canonical.
    """
    eb = EchelonBasis(ncols)
    for row in rows:
        eb.add(row)
        if eb.rank == ncols:
            return []
    pivots = {col: eb.pivots[col] for col in eb.pivots}
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for col, p in pivots.items():
            if f in p:
                v[col] = Fraction(-p[f], p[col])
        basis.append(tuple(v))
    return basis


def in_span(vectors: Sequence, v) -> bool:
    eb = EchelonBasis(len(v))
    for w in vectors:
        eb.add(w)
    return eb.contains(v)


def same_span(a: Sequence, b: Sequence, ncols: int) -> bool:
    ea, eb = EchelonBasis(ncols), EchelonBasis(ncols)
    for w in a:
        ea.add(w)
    for w in b:
        eb.add(w)
    return ea.rank == eb.rank and all(eb.contains(r) for r in ea.rref())


def mat_vec(M: Sequence[Sequence], v: Sequence) -> tuple[Fraction, ...]:
    return tuple(sum((Fraction(a) * b for a, b in zip(row, v) if a and b), Fraction(0)) for row in M)
