"""Small exact linear algebra helpers over Q (tuples of Fractions)."""

from __future__ import annotations

from fractions import Fraction

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def vec(entries) -> Vector:
    return tuple(Fraction(e) for e in entries)


def mat(rows) -> Matrix:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> Vector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def vadd(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vneg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def vscale(c: Fraction, a: Vector) -> Vector:
    return tuple(c * x for x in a)


def dot(a: Vector, b: Vector) -> Fraction:
    return sum((x * y for x, y in zip(a, b, strict=True)), Fraction(0))


def is_zero(a: Vector) -> bool:
    return all(x == 0 for x in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b)) if b else []
    return tuple(tuple(dot(row, vec(col)) for col in bt) for row in a)


def mat_vec(m: Matrix, x: Vector) -> Vector:
    return tuple(dot(row, x) for row in m)


def row_combo(c: Vector, rows: Matrix) -> Vector:
    """Linear combination sum_i c[i] * rows[i]."""
    n = len(rows[0]) if rows else 0
    out = list(zeros(n))
    for ci, row in zip(c, rows, strict=True):
        if ci:
            for j, rj in enumerate(row):
                out[j] += ci * rj
    return tuple(out)


def rref(rows: Matrix) -> tuple[Matrix, Matrix, list[int]]:
    """Reduced row echelon form over Q.

    Returns (R, T, pivots) with R = T @ rows, R in RREF with unit pivots,
    zero rows dropped, and pivots the pivot column indices.
    """
    work = [list(r) for r in rows]
    trans = [list(r) for r in identity(len(rows))]
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        trans[r], trans[piv] = trans[piv], trans[r]
        inv = 1 / work[r][c]
        work[r] = [inv * x for x in work[r]]
        trans[r] = [inv * x for x in trans[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
                trans[i] = [x - f * y for x, y in zip(trans[i], trans[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    R = tuple(tuple(row) for row in work[:r])
    T = tuple(tuple(row) for row in trans[:r])
    return R, T, pivots


def q_solve(rows: Matrix, target: Vector):
    """Solve c @ rows = target over Q.

    Returns (particular, nullspace_basis) or None when inconsistent; the
    nullspace basis spans {c : c @ rows = 0}.
    """
    k = len(rows)
    if k == 0:
        return ((), ()) if is_zero(target) else None
    aug = tuple(tuple(rows[i]) + tuple(unit(k, i)) for i in range(k))
    n = len(target)
    R, _, _ = rref(aug)
    # Solve by eliminating target with the echelon rows of the left block.
    t = list(target)
    coeff = list(zeros(k))
    for row in R:
        lead = next((j for j in range(n) if row[j] != 0), None)
        if lead is None:
            continue
        if t[lead] != 0:
            f = t[lead] / row[lead]
            for j in range(n):
                t[j] -= f * row[j]
            for j in range(k):
                coeff[j] += f * row[n + j]
    if any(x != 0 for x in t):
        return None
    null = tuple(tuple(row[n:]) for row in R
                 if all(row[j] == 0 for j in range(n)))
    return tuple(coeff), null


def q_rank(rows: Matrix) -> int:
    return len(rref(rows)[0])


def in_span(rows: Matrix, target: Vector) -> bool:
    return q_solve(rows, target) is not None


def right_kernel(rows: Matrix) -> Matrix:
    """Basis of {x : rows @ x = 0} over Q (RREF-canonical)."""
    ncols = len(rows[0]) if rows else 0
    R, _, pivots = rref(rows)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(tuple(v))
    return tuple(basis)


def lcm_den(v: Vector) -> int:
    from math import lcm

    return lcm(*(x.denominator for x in v)) if v else 1
