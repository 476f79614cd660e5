"""Exact linear programming over a homogeneous cone intersected with a box.

Solves  max c.x  s.t.  A x >= 0,  lo <= x <= hi  with rational data and
exact arithmetic.  The problem is handled through its dual in standard form

    min hi.p - lo.q   s.t.  -A^T y + p - q = c,   y, p, q >= 0,

whose basis has only n rows (n = number of variables), so the simplex cost
does not grow with the number of constraint rows.  The simplex multipliers
of the optimal dual basis are the primal optimizer.

The basis inverse is kept fraction-free: ``binv / det`` with an integer
matrix and a positive integer ``det``, updated with exact Bareiss division.
Pivoting uses Dantzig pricing with a lexicographic ratio test, which rules
out cycling on the (very common) degenerate vertices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class LPError(RuntimeError):
    pass


@dataclass
class LPResult:
    optimum: Fraction
    x: list  # Fractions
    iterations: int


SparseRow = Sequence[tuple]  # ((index, coefficient), ...)


def _lcm_den(values) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, Fraction(v).denominator)
    return d


def to_sparse(row) -> tuple:
    return tuple((k, v) for k, v in enumerate(row) if v)


def integer_rows(rows: Sequence[SparseRow]) -> list[tuple]:
    """Scale each sparse row by a positive factor so that it is integral and primitive."""
    out = []
    for row in rows:
        row = [(k, Fraction(v)) for k, v in row if v]
        if not row:
            continue
        den = _lcm_den(v for _, v in row)
        ints = [(k, int(v * den)) for k, v in row]
        g = 0
        for _, v in ints:
            g = math.gcd(g, v)
        out.append(tuple((k, v // g) for k, v in ints))
    return out


def lp_maximize(objective: Sequence, rows: Sequence[SparseRow], n: int | None = None,
                box=(-1, 1), max_iterations: int = 100000) -> LPResult:
    """Maximize ``objective . x`` subject to ``row . x >= 0`` for every sparse
    row and ``lo <= x <= hi``.  ``box`` is a pair of scalars or a pair of
    per-variable sequences.  Dense rows are accepted too."""
    if n is None:
        n = len(objective)
    rows = [r if (len(r) == 0 or isinstance(r[0], tuple)) else to_sparse(r) for r in rows]
    lo, hi = box
    lo = [Fraction(lo)] * n if not isinstance(lo, (list, tuple)) else [Fraction(v) for v in lo]
    hi = [Fraction(hi)] * n if not isinstance(hi, (list, tuple)) else [Fraction(v) for v in hi]
    if any(l > h for l, h in zip(lo, hi)):
        raise LPError("empty box")
    if any(l > 0 or h < 0 for l, h in zip(lo, hi)):
        raise LPError("box must contain the origin")

    A = integer_rows(rows)
    m = len(A)
    obj = [Fraction(c) for c in objective]
    cs = _lcm_den(obj)
    c = [int(v * cs) for v in obj]
    ls = _lcm_den(lo + hi)
    hi_i = [int(v * ls) for v in hi]
    lo_i = [int(v * ls) for v in lo]

    # columns: 0..m-1 -> y_i (column -A_i), m..m+n-1 -> p_j (e_j), m+n.. -> q_j (-e_j)
    def column(col):
        if col < m:
            return [(k, -v) for k, v in A[col]]
        if col < m + n:
            return [(col - m, 1)]
        return [(col - m - n, -1)]

    def cost(col):
        if col < m:
            return 0
        if col < m + n:
            return hi_i[col - m]
        return -lo_i[col - m - n]

    basis = []
    binv = [[0] * n for _ in range(n)]
    for j in range(n):
        if c[j] >= 0:
            basis.append(m + j)
            binv[j][j] = 1
        else:
            basis.append(m + n + j)
            binv[j][j] = -1
    det = 1
    in_basis = set(basis)

    it = 0
    while True:
        it += 1
        if it > max_iterations:
            raise LPError("iteration limit exceeded")
        cb = [cost(col) for col in basis]
        # pi = Binv^T cB ; pi_num / det
        pi = [0] * n
        for r in range(n):
            if cb[r]:
                br = binv[r]
                cr = cb[r]
                for k in range(n):
                    if br[k]:
                        pi[k] += cr * br[k]
        xb = [sum(br[k] * c[k] for k in range(n) if br[k] and c[k]) for br in binv]

        # reduced costs (times det > 0), Dantzig pricing
        best, best_val = None, 0
        for i, row in enumerate(A):
            if i in in_basis:
                continue
            d = sum(v * pi[k] for k, v in row)
            if d < 0:
                if d < best_val:
                    best, best_val = i, d
        for j in range(n):
            for col, d in ((m + j, hi_i[j] * det - pi[j]), (m + n + j, pi[j] - lo_i[j] * det)):
                if col in in_basis or d >= 0:
                    continue
                if d < best_val:
                    best, best_val = col, d
        if best is None:
            scale = det * ls
            x = [Fraction(p, scale) for p in pi]
            value = sum((ci * xi for ci, xi in zip(obj, x)), Fraction(0))
            return LPResult(value, x, it)

        # lexicographic ratio test on the rows of [xb | binv]: equivalent to
        # an infinitesimal perturbation of the right-hand side, so Dantzig
        # pricing cannot cycle on degenerate vertices
        a = column(best)
        alpha = [sum(br[k] * v for k, v in a) for br in binv]
        leave = None
        for r in range(n):
            ar = alpha[r]
            if ar <= 0:
                continue
            if leave is None:
                leave = r
                continue
            al = alpha[leave]
            d = xb[r] * al - xb[leave] * ar
            if d == 0:
                br, bl = binv[r], binv[leave]
                for k in range(n):
                    d = br[k] * al - bl[k] * ar
                    if d:
                        break
            if d < 0:
                leave = r
        if leave is None:
            raise LPError("dual unbounded: primal infeasible, impossible for a cone")

        # fraction-free pivot
        piv = alpha[leave]
        rowr = binv[leave]
        for r in range(n):
            if r == leave:
                continue
            ar = alpha[r]
            br = binv[r]
            if ar:
                binv[r] = [(br[k] * piv - ar * rowr[k]) // det for k in range(n)]
            else:
                binv[r] = [(br[k] * piv) // det for k in range(n)]
        det = piv
        if det < 0:
            det = -det
            binv = [[-v for v in br] for br in binv]
        in_basis.discard(basis[leave])
        basis[leave] = best
        in_basis.add(best)


def exact_rank(rows: Sequence[SparseRow], n: int) -> tuple[int, list | None]:
    """Rank of a sparse integer matrix and, when rank < n, a nonzero kernel vector."""
    dense = []
    for row in integer_rows(rows):
        v = [0] * n
        for k, c in row:
            v[k] = c
        dense.append(v)
    pivots = []  # (col, row vector) in echelon form, fraction-free
    for v in dense:
        v = v[:]
        for col, p in pivots:
            if v[col]:
                f, g = v[col], p[col]
                v = [a * g - f * b for a, b in zip(v, p)]
                gg = 0
                for a in v:
                    gg = math.gcd(gg, a)
                if gg > 1:
                    v = [a // gg for a in v]
        lead = next((k for k, a in enumerate(v) if a), None)
        if lead is not None:
            # reduce earlier pivots so the basis stays in reduced form
            new = []
            for col, p in pivots:
                if p[lead]:
                    f, g = p[lead], v[lead]
                    p = [a * g - f * b for a, b in zip(p, v)]
                    gg = 0
                    for a in p:
                        gg = math.gcd(gg, a)
                    if gg > 1:
                        p = [a // gg for a in p]
                new.append((col, p))
            pivots = new + [(lead, v)]
            if len(pivots) == n:
                return n, None
    rank = len(pivots)
    cols = {col for col, _ in pivots}
    free = next(k for k in range(n) if k not in cols)
    x = [Fraction(0)] * n
    x[free] = Fraction(1)
    for col, p in pivots:
        x[col] = Fraction(-p[free], p[col])
    return rank, x
