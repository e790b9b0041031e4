"""Exact negative-definiteness certificates for integer symmetric matrices.

Leading principal minors are computed with Bareiss fraction-free
elimination on Python integers, so the Sylvester test has no rounding.
"""
from __future__ import annotations

from typing import Sequence

from .divisor_graph import IntersectionMatrix

MAX_DIMENSION = 64


def _rows(m: IntersectionMatrix | Sequence[Sequence[int]]) -> list[list[int]]:
    entries = m.entries if isinstance(m, IntersectionMatrix) else m
    rows = [[int(v) for v in row] for row in entries]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if n > MAX_DIMENSION:
        raise ValueError(f"dimension {n} exceeds the supported cap of {MAX_DIMENSION}")
    return rows


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss determinant with row pivoting."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def leading_minors(m: IntersectionMatrix | Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Exact leading principal minors Δ_1..Δ_n.

    Without pivoting, the k-th Bareiss pivot is exactly Δ_k. Once a pivot
    vanishes, the remaining minors are computed block by block.
    """
    src = _rows(m)
    a = [list(r) for r in src]
    n = len(a)
    minors: list[int] = []
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        minors.append(pivot)
        if pivot == 0:
            minors.extend(determinant([r[:j] for r in src[:j]]) for j in range(k + 2, n + 1))
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return tuple(minors)


def is_negative_definite(m: IntersectionMatrix | Sequence[Sequence[int]]) -> bool:
    """Sylvester: (-1)^k Δ_k > 0 for every k."""
    return all((-1) ** k * d > 0 for k, d in enumerate(leading_minors(m), start=1))
