"""Exact rational linear programming: dense tableau simplex with Bland's rule.

Problems are in equality form ``A x = b, x >= 0``. Bland's rule (smallest
index enters and leaves) guarantees termination without any tolerance.
"""

from __future__ import annotations

from fractions import Fraction


class _Tableau:
    def __init__(self, A, b, n_vars):
        self.m = len(A)
        self.n = n_vars
        # rows: [coefficients..., rhs]; b made nonnegative by negating rows
        self.rows = []
        for row, rhs in zip(A, b):
            row = [Fraction(v) for v in row]
            rhs = Fraction(rhs)
            if rhs < 0:
                row, rhs = [-v for v in row], -rhs
            self.rows.append(row + [rhs])
        self.basis = [None] * self.m

    def pivot(self, r, c):
        prow = self.rows[r]
        pv = prow[c]
        if pv != 1:
            prow = [v / pv for v in prow]
            self.rows[r] = prow
        for i, row in enumerate(self.rows):
            if i != r and row[c]:
                f = row[c]
                self.rows[i] = [a - f * p for a, p in zip(row, prow)]
        self.basis[r] = c

    def run(self, cost, allowed):
        """Minimize ``cost . x`` over the current basis; returns False if unbounded.

        ``allowed`` lists the columns that may enter.
        """
        while True:
            # reduced cost of column j: c_j - c_B B^-1 A_j
            enter = None
            for j in allowed:
                if j in self.basis:
                    continue
                rc = cost[j] - sum(cost[self.basis[i]] * self.rows[i][j] for i in range(self.m))
                if rc < 0:
                    enter = j
                    break
            if enter is None:
                return True
            leave, best = None, None
            for i, row in enumerate(self.rows):
                if row[enter] > 0:
                    ratio = row[-1] / row[enter]
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        leave, best = i, ratio
            if leave is None:
                return False
            self.pivot(leave, enter)

    def solution(self, n):
        x = [Fraction(0)] * n
        for i, j in enumerate(self.basis):
            if j < n:
                x[j] = self.rows[i][-1]
        return x


def _phase_one(A, b, n):
    """Drive artificials out; return a tableau at a feasible basis or None."""
    t = _Tableau(A, b, n)
    m = t.m
    for i in range(m):
        t.rows[i] = t.rows[i][:-1] + [Fraction(int(k == i)) for k in range(m)] + [t.rows[i][-1]]
        t.basis[i] = n + i
    cost = [Fraction(0)] * n + [Fraction(1)] * m
    t.run(cost, range(n + m))
    if sum(t.rows[i][-1] for i in range(m) if t.basis[i] >= n) != 0:
        return None
    # pivot remaining zero-level artificials out where a real column allows it
    for i in range(m):
        if t.basis[i] >= n:
            col = next((j for j in range(n) if t.rows[i][j] != 0), None)
            if col is not None:
                t.pivot(i, col)
    return t


def feasible_point(A, b) -> list[Fraction] | None:
    """Some ``x >= 0`` with ``A x = b`` in exact rationals, or None if infeasible."""
    if not A:
        return []
    n = len(A[0])
    t = _phase_one(A, b, n)
    return None if t is None else t.solution(n)


def minimize(c, A, b):
    """Minimize ``c . x`` subject to ``A x = b, x >= 0``.

    Returns ``(status, x)`` with status ``"optimal"``, ``"infeasible"`` or
    ``"unbounded"``.
    """
    n = len(c)
    t = _phase_one(A, b, n)
    if t is None:
        return "infeasible", None
    m = t.m
    # artificials stuck in the basis sit at zero; forbid them from growing
    cost = [Fraction(v) for v in c] + [Fraction(0)] * m
    if not t.run(cost, range(n)):
        return "unbounded", None
    return "optimal", t.solution(n)
