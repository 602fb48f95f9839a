"""Exact sparse row echelon form over the rationals.

Rows are dictionaries ``column -> coefficient``.  The pivot of a row is its
*smallest* column index, so with columns ordered by increasing monomial
degree the pivots land on the lowest-degree monomials and the pivot-free
columns are the standard (low degree) monomials of a quotient.
"""
from __future__ import annotations

from fractions import Fraction


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class EchelonBasis:
    """Incrementally maintained echelon basis of a row space."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, row: dict, stop_at_free: bool) -> dict:
        row = {c: v for c, v in row.items() if v}
        pivots = self.pivots
        while row:
            lead = min(row)
            prow = pivots.get(lead)
            if prow is None:
                if stop_at_free:
                    return row
                break
            f = row[lead]
            for c, v in prow.items():
                nv = _norm(row.get(c, 0) - f * v)
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        return row

    def add(self, row: dict) -> bool:
        """Insert ``row``; True when it enlarged the span."""
        rem = self._reduce(row, stop_at_free=True)
        if not rem:
            return False
        lead = min(rem)
        inv = Fraction(1) / rem[lead]
        self.pivots[lead] = {c: _norm(v * inv) for c, v in rem.items()}
        return True

    def extend(self, rows) -> None:
        for row in rows:
            self.add(row)

    def contains(self, row: dict) -> bool:
        return not self._reduce(row, stop_at_free=True)

    def free_columns(self) -> list:
        return [c for c in range(self.ncols) if c not in self.pivots]

    def copy(self) -> "EchelonBasis":
        other = EchelonBasis(self.ncols)
        other.pivots = dict(self.pivots)
        return other


def rank(rows, ncols: int) -> int:
    eb = EchelonBasis(ncols)
    eb.extend(rows)
    return eb.rank


def matrix_rank(matrix) -> int:
    """Exact rank of a dense list-of-lists rational matrix."""
    if not matrix:
        return 0
    ncols = len(matrix[0])
    return rank(({j: v for j, v in enumerate(row) if v} for row in matrix), ncols)
