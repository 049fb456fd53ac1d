"""Exact integer and rational linear algebra for lattice normal forms.

Everything here works on plain Python ints / Fractions so that group
membership and bonding matrices are exact at any size.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["hnf_rows", "solve_rational", "rational_rank"]


def hnf_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by the rows.

    Returns the unique basis with positive pivots, entries above each
    pivot reduced into [0, pivot), and zero rows dropped.  The input is
    not modified.
    """
    if not rows:
        return []
    n_cols = len(rows[0])
    # one stored row per pivot column; stored rows always lead at their
    # column, so combining two rows that lead at the same column keeps
    # the echelon invariant
    pivots: dict[int, list[int]] = {}
    for vec in rows:
        vec = list(vec)
        while True:
            j = _first_nonzero(vec)
            if j is None:
                break
            if j not in pivots:
                pivots[j] = [-t for t in vec] if vec[j] < 0 else vec
                break
            b = pivots[j]
            a, c = b[j], vec[j]
            if c % a == 0:
                q = c // a
                for t in range(j, n_cols):
                    vec[t] -= q * b[t]
            else:
                x, y, g = _xgcd(a, c)
                ag, cg = a // g, c // g
                for t in range(j, n_cols):
                    bt, vt = b[t], vec[t]
                    b[t] = x * bt + y * vt
                    vec[t] = -cg * bt + ag * vt
    cols = sorted(pivots)
    basis = [pivots[j] for j in cols]
    # reduce entries above each pivot into [0, pivot); increasing pivot
    # order, so a later step never disturbs an already-reduced column
    for i in range(len(basis)):
        j = cols[i]
        p = basis[i][j]
        for k in range(i):
            q = basis[k][j] // p
            if q:
                for t in range(j, n_cols):
                    basis[k][t] -= q * basis[i][t]
    return basis


def _first_nonzero(vec):
    for j, v in enumerate(vec):
        if v != 0:
            return j
    return None


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return x0, y0, a


def solve_rational(basis_rows, target):
    """Solve sum_i c_i * basis_rows[i] = target over Q.

    basis_rows and target are sequences of Fractions (or ints).  Returns
    the coefficient list, or None if the system is inconsistent.  The
    basis rows need not be independent; any valid solution is returned.
    """
    n_rows = len(basis_rows)
    if n_rows == 0:
        return [] if all(Fraction(t) == 0 for t in target) else None
    n_cols = len(target)
    # augmented system A^T c = target, columns of A^T are the basis rows
    aug = [[Fraction(basis_rows[r][c]) for r in range(n_rows)] + [Fraction(target[c])]
           for c in range(n_cols)]
    piv_rows: list[tuple[int, int]] = []  # (row in aug, pivot col among unknowns)
    r = 0
    for c in range(n_rows):
        pr = next((i for i in range(r, n_cols) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        p = aug[r][c]
        for i in range(n_cols):
            if i != r and aug[i][c] != 0:
                f = aug[i][c] / p
                for t in range(c, n_rows + 1):
                    aug[i][t] -= f * aug[r][t]
        piv_rows.append((r, c))
        r += 1
        if r == n_cols:
            break
    for i in range(r, n_cols):
        if aug[i][n_rows] != 0:
            return None
    sol = [Fraction(0)] * n_rows
    for row, col in piv_rows:
        sol[col] = aug[row][n_rows] / aug[row][col]
    return sol


def rational_rank(rows) -> int:
    """Rank over Q of a matrix given as rows of Fractions/ints."""
    m = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    n_cols = len(m[0]) if m else 0
    for c in range(n_cols):
        pr = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[rank], m[pr] = m[pr], m[rank]
        p = m[rank][c]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / p
                for t in range(c, n_cols):
                    m[i][t] -= f * m[rank][t]
        rank += 1
    return rank
