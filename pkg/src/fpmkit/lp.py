"""Dense exact-rational simplex for systems ``A x = b, x >= 0``.

Bland's rule throughout, so every run on the same input pivots the same
way and terminates without cycling.
"""
from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)


class ExactLP:
    """Phase-one feasibility for ``A x = b, x >= 0`` plus re-optimisation.

    After construction, ``feasible`` tells whether the system has a
    solution.  If not, ``farkas`` holds ``y`` with ``y A <= 0`` and
    ``y b > 0`` up to the phase-one duals (see :meth:`_phase_one`).
    ``optimize`` starts every objective from the same phase-one basis.
    """

    def __init__(self, A, b):
        self.m = len(A)
        self.n = len(A[0]) if A else 0
        self._sign = [1 if Fraction(bi) >= 0 else -1 for bi in b]
        rows = []
        for i, (row, bi) in enumerate(zip(A, b)):
            s = self._sign[i]
            rows.append([s * Fraction(x) for x in row] + [s * Fraction(bi)])
        self.farkas = None
        self._rows, self._basis = self._phase_one(rows)
        self.feasible = self._rows is not None

    def _phase_one(self, rows):
        m, n = self.m, self.n
        # artificial columns n .. n+m-1 sit before the rhs column
        tab = [r[:n] + [Fraction(int(i == k)) for k in range(m)] + [r[n]] for i, r in enumerate(rows)]
        basis = [n + i for i in range(m)]
        cost = [ZERO] * n + [Fraction(1)] * m
        _simplex(tab, basis, cost)
        value = sum((cost[basis[i]] * tab[i][-1] for i in range(m)), ZERO)
        if value > 0:
            y = []
            for i in range(m):
                yi = sum((cost[basis[k]] * tab[k][n + i] for k in range(m)), ZERO)
                y.append(self._sign[i] * yi)
            self.farkas = y
            return None, None
        # drive zero-level artificials out of the basis, dropping redundant rows
        keep = []
        for i in range(m):
            if basis[i] >= n:
                j = next((j for j in range(n) if tab[i][j] != 0), None)
                if j is None:
                    continue
                _pivot(tab, basis, i, j)
            keep.append(i)
        tab = [tab[i][:n] + [tab[i][-1]] for i in keep]
        basis = [basis[i] for i in keep]
        return tab, basis

    def point(self, tab=None, basis=None):
        tab = self._rows if tab is None else tab
        basis = self._basis if basis is None else basis
        x = [ZERO] * self.n
        for i, j in enumerate(basis):
            x[j] = tab[i][-1]
        return x

    def optimize(self, c, maximize=False):
        """Optimal basic solution for objective ``c`` (minimised by default)."""
        if not self.feasible:
            raise ValueError("system is infeasible")
        tab = [row[:] for row in self._rows]
        basis = self._basis[:]
        cost = [(-Fraction(x) if maximize else Fraction(x)) for x in c]
        _simplex(tab, basis, cost)
        return self.point(tab, basis)


def _pivot(tab, basis, r, c):
    prow = tab[r]
    p = prow[c]
    if p != 1:
        prow = [x / p for x in prow]
        tab[r] = prow
    for i, row in enumerate(tab):
        if i != r:
            f = row[c]
            if f != 0:
                tab[i] = [x - f * y for x, y in zip(row, prow)]
    basis[r] = c


def _simplex(tab, basis, cost):
    ncols = len(cost)
    while True:
        in_basis = set(basis)
        entering = None
        for j in range(ncols):
            if j in in_basis:
                continue
            rc = cost[j] - sum((cost[basis[i]] * tab[i][j] for i in range(len(tab))), ZERO)
            if rc < 0:
                entering = j
                break
        if entering is None:
            return
        best = None
        for i, row in enumerate(tab):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise ArithmeticError("linear program is unbounded")
        _pivot(tab, basis, best[1], entering)
