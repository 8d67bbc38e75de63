"""
Exact Gauss-Jordan elimination over Q (fractions.Fraction) or over F_p (ints modulo p).

Rows are plain lists; `modulus=None` means rational arithmetic.
"""

from collections.abc import Sequence
from fractions import Fraction
from typing import TypeAlias

Scalar: TypeAlias = Fraction | int
Row: TypeAlias = list[Scalar]


def _inverse(x: Scalar, modulus: int | None) -> Scalar:
    if modulus is None:
        return 1 / Fraction(x)
    return pow(int(x), -1, modulus)


def _reduce(row: Sequence[Scalar], modulus: int | None) -> Row:
    if modulus is None:
        return [Fraction(x) for x in row]
    return [int(x) % modulus for x in row]


def rref(rows: Sequence[Sequence[Scalar]], ncols: int, modulus: int | None = None) -> tuple[list[Row], list[int]]:
    """Reduced row echelon form. Returns the nonzero rows and their pivot columns."""
    m = [_reduce(r, modulus) for r in rows]
    for r in m:
        if len(r) != ncols:
            raise ValueError(f"Row of length {len(r)} in a matrix with {ncols} columns")
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == len(m):
            break
        found = next((i for i in range(top, len(m)) if m[i][col] != 0), None)
        if found is None:
            continue
        m[top], m[found] = m[found], m[top]
        inv = _inverse(m[top][col], modulus)
        m[top] = _reduce([x * inv for x in m[top]], modulus)
        for i, row in enumerate(m):
            if i != top and row[col] != 0:
                factor = row[col]
                m[i] = _reduce([a - factor * b for a, b in zip(row, m[top])], modulus)
        pivots.append(col)
        top += 1
    return m[:top], pivots


def rank(rows: Sequence[Sequence[Scalar]], ncols: int, modulus: int | None = None) -> int:
    return len(rref(rows, ncols, modulus)[1])


def nullspace(rows: Sequence[Sequence[Scalar]], ncols: int, modulus: int | None = None) -> list[Row]:
    """Basis of {x : row . x = 0 for every row}."""
    echelon, pivots = rref(rows, ncols, modulus)
    pivot_set = set(pivots)
    zero: Scalar = Fraction(0) if modulus is None else 0
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [zero] * ncols
        vec[free] = zero + 1
        for row, pc in zip(echelon, pivots):
            vec[pc] = -row[free]
        basis.append(_reduce(vec, modulus))
    return basis


def residue(
    vec: Sequence[Scalar], echelon: Sequence[Sequence[Scalar]], pivots: Sequence[int], modulus: int | None = None
) -> Row:
    """Remainder of `vec` after elimination against an echelon basis; zero iff `vec` is in the span."""
    out = _reduce(vec, modulus)
    for row, pc in zip(echelon, pivots):
        factor = out[pc]
        if factor != 0:
            out = _reduce([a - factor * b for a, b in zip(out, row)], modulus)
    return out


def in_span(
    vec: Sequence[Scalar], echelon: Sequence[Sequence[Scalar]], pivots: Sequence[int], modulus: int | None = None
) -> bool:
    return not any(residue(vec, echelon, pivots, modulus))


class Echelon:
    """Incrementally maintained reduced echelon basis."""

    def __init__(self, ncols: int, modulus: int | None = None) -> None:
        self.ncols = ncols
        self.modulus = modulus
        self.rows: list[Row] = []
        self.pivots: list[int] = []

    def __len__(self) -> int:
        return len(self.rows)

    def contains(self, vec: Sequence[Scalar]) -> bool:
        return in_span(vec, self.rows, self.pivots, self.modulus)

    def add(self, vec: Sequence[Scalar]) -> bool:
        """Add `vec` to the span. Returns False when it was already there."""
        rem = residue(vec, self.rows, self.pivots, self.modulus)
        col = next((j for j, x in enumerate(rem) if x != 0), None)
        if col is None:
            return False
        inv = _inverse(rem[col], self.modulus)
        rem = _reduce([x * inv for x in rem], self.modulus)
        for k, row in enumerate(self.rows):
            factor = row[col]
            if factor != 0:
                self.rows[k] = _reduce([a - factor * b for a, b in zip(row, rem)], self.modulus)
        at = next((k for k, pc in enumerate(self.pivots) if pc > col), len(self.pivots))
        self.rows.insert(at, rem)
        self.pivots.insert(at, col)
        return True
