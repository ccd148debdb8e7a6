"""Bit-packed GF(2) linear algebra.

Vectors are Python ints used as bitsets (bit ``j`` is coordinate ``j``), so
XOR is vector addition and ``int.bit_count`` gives popcount parity. Matrices
are lists of row ints.
"""

from __future__ import annotations

from typing import Sequence


def parity(v: int) -> int:
    return v.bit_count() & 1


def dot(u: int, v: int) -> int:
    """Inner product over GF(2)."""
    return (u & v).bit_count() & 1


def bits(v: int, n: int) -> tuple[int, ...]:
    return tuple((v >> j) & 1 for j in range(n))


def from_bits(seq: Sequence[int]) -> int:
    out = 0
    for j, b in enumerate(seq):
        if b & 1:
            out |= 1 << j
    return out


def rref(rows: Sequence[int], columns: Sequence[int]) -> tuple[list[int], list[int]]:
    """Reduced row echelon form with pivots searched in ``columns`` order.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are dropped and
    ``reduced_rows[i]`` has its pivot at ``pivot_columns[i]``.
    """
    work = [r for r in rows]
    pivots: list[int] = []
    out: list[int] = []
    for col in columns:
        mask = 1 << col
        hit = next((i for i, r in enumerate(work) if r & mask), None)
        if hit is None:
            continue
        piv = work.pop(hit)
        work = [r ^ piv if r & mask else r for r in work]
        out = [r ^ piv if r & mask else r for r in out]
        out.append(piv)
        pivots.append(col)
    return out, pivots


def rank(rows: Sequence[int], width: int) -> int:
    return len(rref(rows, range(width))[0])


def solve(rows: Sequence[int], rhs: Sequence[int], width: int) -> int | None:
    """Find ``v`` with ``dot(rows[i], v) == rhs[i]`` for every ``i``.

    Free variables are set to zero, so the answer is deterministic. Returns
    ``None`` when the system is inconsistent.
    """
    flag = 1 << width
    aug = [r | (flag if b & 1 else 0) for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, range(width + 1))
    if width in pivots:
        return None
    v = 0
    for r, col in zip(red, pivots):
        if r & flag:
            v |= 1 << col
    return v


def nullspace(rows: Sequence[int], width: int) -> list[int]:
    """Basis of ``{v : dot(r, v) == 0 for all r}``."""
    red, pivots = rref(rows, range(width))
    pivset = set(pivots)
    basis = []
    for free in range(width):
        if free in pivset:
            continue
        v = 1 << free
        for r, col in zip(red, pivots):
            if (r >> free) & 1:
                v |= 1 << col
        basis.append(v)
    return basis
