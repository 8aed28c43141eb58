"""Exact rational feasibility for ``A x = b, x >= 0`` (phase one of the simplex method).

Bland's rule throughout, so the iteration cannot cycle.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence


def feasible_point(A: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """A basic feasible solution of ``A x = b, x >= 0``, or None if there is none."""
    m = len(A)
    n = len(A[0]) if m else 0
    rows = []
    rhs = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]]
        bi = Fraction(b[i])
        if bi < 0:
            row = [-x for x in row]
            bi = -bi
        rows.append(row + [Fraction(int(j == i)) for j in range(m)])
        rhs.append(bi)
    width = n + m
    basis = [n + i for i in range(m)]
    # reduced costs of "minimise the sum of artificials"
    cost = [Fraction(0)] * width
    for i in range(m):
        for j in range(n):
            cost[j] -= rows[i][j]
    obj = sum(rhs, Fraction(0))

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # cannot happen: the phase-one objective is bounded below by zero
            raise ArithmeticError("phase-one objective unbounded")
        piv = rows[leave][enter]
        prow = [x / piv for x in rows[leave]]
        prhs = rhs[leave] / piv
        rows[leave], rhs[leave] = prow, prhs
        for i in range(m):
            if i != leave and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
                rhs[i] -= f * prhs
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, prow)]
        obj += f * prhs
        basis[leave] = enter

    if obj != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rhs[i]
    return x
