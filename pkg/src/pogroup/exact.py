"""Hermite and Smith normal forms over Z, Z[1/S], and Q, with transforms.

Conventions
-----------
Matrices are tuples of row tuples of Fractions; every entry must lie in
the working ring.  The Hermite form is row-style: echelon, pivots are
canonical associates (positive integers with no unit-prime factors),
entries above a pivot are reduced to the canonical residue modulo
pivot*R.  With this convention two generating sets span the same
R-module iff their Hermite forms are identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, Vector, identity, is_zero, row_combo
from .rings import BaseRing, ZZ


def _check_entries(m: Matrix, ring: BaseRing):
    for row in m:
        for x in row:
            if not ring.contains(x):
                raise ValueError(f"entry {x} not in {ring}")


def _egcd_ring(a: Fraction, b: Fraction, ring: BaseRing):
    """g, x, y with x*a + y*b = g, g the canonical gcd, x, y in the ring."""
    ua, ub = ring.canonical_unit(a), ring.canonical_unit(b)
    ia, ib = int(ring.strip_units(a)), int(ring.strip_units(b))
    # plain integer extended gcd on the unit-stripped values
    old_r, r = ia, ib
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return Fraction(old_r), old_s * ua, old_t * ub


def hermite_form(m: Matrix, ring: BaseRing = ZZ) -> tuple[Matrix, Matrix]:
    """Canonical row Hermite form.

    Returns (H, U) with H = U @ m, U invertible over the ring, H in
    canonical echelon form with zero rows at the bottom.
    """
    _check_entries(m, ring)
    rows = [list(r) for r in m]
    trans = [list(r) for r in identity(len(rows))]
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        trans[r], trans[piv] = trans[piv], trans[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c] != 0:
                # combine rows r and i so that row r gets the gcd at column
                # c and row i gets zero; the 2x2 transform [[x,y],[-b/g,a/g]]
                # has determinant 1, hence is unimodular over the ring.
                a, b = rows[r][c], rows[i][c]
                g, x, y = _egcd_ring(a, b, ring)
                ca, cb = -(b / g), a / g
                new_r = [x * u + y * v for u, v in zip(rows[r], rows[i])]
                new_tr = [x * u + y * v for u, v in zip(trans[r], trans[i])]
                new_i = [ca * u + cb * v for u, v in zip(rows[r], rows[i])]
                new_ti = [ca * u + cb * v for u, v in zip(trans[r], trans[i])]
                rows[r], rows[i] = new_r, new_i
                trans[r], trans[i] = new_tr, new_ti
        u = ring.canonical_unit(rows[r][c])
        if u != 1:
            rows[r] = [u * x for x in rows[r]]
            trans[r] = [u * x for x in trans[r]]
        for i in range(r):
            if rows[i][c] != 0:
                q, _ = ring.divmod(rows[i][c], rows[r][c])
                if q:
                    rows[i] = [u - q * v for u, v in zip(rows[i], rows[r])]
                    trans[i] = [u - q * v for u, v in zip(trans[i], trans[r])]
        r += 1
        if r == len(rows):
            break
    H = tuple(tuple(row) for row in rows)
    U = tuple(tuple(row) for row in trans)
    return H, U


def hermite_basis(m: Matrix, ring: BaseRing = ZZ) -> Matrix:
    """Nonzero rows of the canonical Hermite form."""
    H, _ = hermite_form(m, ring)
    return tuple(r for r in H if not is_zero(r))


def solve_membership(target: Vector, gens: Matrix, ring: BaseRing = ZZ):
    """Coefficients c over the ring with c @ gens = target, or None.

    The witness re-evaluates exactly: row_combo(c, gens) == target.
    """
    if not gens:
        return () if is_zero(target) else None
    _check_entries(gens, ring)
    H, U = hermite_form(gens, ring)
    t = list(target)
    coeff = [Fraction(0)] * len(gens)
    for i, row in enumerate(H):
        lead = next((j for j, x in enumerate(row) if x != 0), None)
        if lead is None:
            continue
        if t[lead] != 0:
            q = t[lead] / row[lead]
            if not ring.contains(q):
                return None
            t = [a - q * b for a, b in zip(t, row)]
            coeff = [a + q * b for a, b in zip(coeff, U[i])]
    if any(x != 0 for x in t):
        return None
    return tuple(coeff)


def left_kernel(m: Matrix, ring: BaseRing = ZZ) -> Matrix:
    """Canonical basis of {x over R : x @ m = 0}."""
    H, U = hermite_form(m, ring)
    ker = tuple(U[i] for i, row in enumerate(H) if is_zero(row))
    return hermite_basis(ker, ring) if ker else ()


def saturate(gens: Matrix, ambient_rank: int, ring: BaseRing = ZZ) -> Matrix:
    """Generators of {x in R^n : k*x in <gens> for some k >= 1}.

    Computed as the left kernel of a rational kernel matrix of the span,
    which is automatically saturated.
    """
    if not gens:
        return ()
    from .linalg import lcm_den, right_kernel

    K = right_kernel(gens)
    if not K:
        return hermite_basis(identity(ambient_rank), ring)
    # saturation = {x in R^n : x . v = 0 for every rational kernel vector v}
    scaled = [tuple(x * lcm_den(v) for x in v) for v in K]
    columns = tuple(tuple(v[i] for v in scaled) for i in range(ambient_rank))
    return left_kernel(columns, ring)


def smith_form(m: Matrix, ring: BaseRing = ZZ) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form: returns (U, D, V) with D = U @ m @ V.

    U and V are invertible over the ring; D is diagonal with canonical
    entries d_1 | d_2 | ... .
    """
    _check_entries(m, ring)
    rows = [list(r) for r in m]
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    U = [list(r) for r in identity(nr)]
    V = [list(r) for r in identity(nc)]

    def row_op(i, j, x, y, ca, cb):
        for M in (rows, U):
            ri = [x * u + y * v for u, v in zip(M[i], M[j])]
            rj = [ca * u + cb * v for u, v in zip(M[i], M[j])]
            M[i], M[j] = ri, rj

    def col_op(i, j, x, y, ca, cb):
        for M in (rows, V):
            for row in M:
                u, v = row[i], row[j]
                row[i] = x * u + y * v
                row[j] = ca * u + cb * v

    t = 0
    while t < min(nr, nc):
        # find a pivot
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if rows[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t:
            rows[t], rows[i0] = rows[i0], rows[t]
            U[t], U[i0] = U[i0], U[t]
        if j0 != t:
            for M in (rows,):
                for row in M:
                    row[t], row[j0] = row[j0], row[t]
            for row in V:
                row[t], row[j0] = row[j0], row[t]
        # clear row and column t
        while True:
            changed = False
            for i in range(t + 1, nr):
                if rows[i][t] != 0:
                    a, b = rows[t][t], rows[i][t]
                    if ring.divides(a, b):
                        q = b / a
                        rows[i] = [u - q * v for u, v in zip(rows[i], rows[t])]
                        U[i] = [u - q * v for u, v in zip(U[i], U[t])]
                    else:
                        g, x, y = _egcd_ring(a, b, ring)
                        row_op(t, i, x, y, -(b / g), a / g)
                    changed = True
            for j in range(t + 1, nc):
                if rows[t][j] != 0:
                    a, b = rows[t][t], rows[t][j]
                    if ring.divides(a, b):
                        q = b / a
                        for M in (rows,):
                            for row in M:
                                row[j] -= q * row[t]
                        for row in V:
                            row[j] -= q * row[t]
                    else:
                        g, x, y = _egcd_ring(a, b, ring)
                        col_op(t, j, x, y, -(b / g), a / g)
                    changed = True
            if not changed:
                break
        t += 1
    # normalize units and enforce the divisibility chain
    rank = t
    for i in range(rank):
        u = ring.canonical_unit(rows[i][i])
        if u != 1:
            rows[i] = [u * x for x in rows[i]]
            U[i] = [u * x for x in U[i]]
    i = 0
    while i < rank - 1:
        a, b = rows[i][i], rows[i + 1][i + 1]
        if a != 0 and not ring.divides(a, b):
            # standard trick: add column i+1 to column i, re-clear the 2x2 block
            for row in rows:
                row[i] += row[i + 1]
            for row in V:
                row[i] += row[i + 1]
            a1, b1 = rows[i][i], rows[i + 1][i]
            g, x, y = _egcd_ring(a1, b1, ring)
            row_op(i, i + 1, x, y, -(b1 / g), a1 / g)
            # clear the fill-in at (i, i+1)
            q = rows[i][i + 1] / rows[i][i]
            for row in rows:
                row[i + 1] -= q * row[i]
            for row in V:
                row[i + 1] -= q * row[i]
            q2 = rows[i + 1][i + 1]
            u = ring.canonical_unit(q2)
            if u != 1:
                rows[i + 1] = [u * x for x in rows[i + 1]]
                U[i + 1] = [u * x for x in U[i + 1]]
            u = ring.canonical_unit(rows[i][i])
            if u != 1:
                rows[i] = [u * x for x in rows[i]]
                U[i] = [u * x for x in U[i]]
            i = max(i - 1, 0)
        else:
            i += 1
    D = tuple(tuple(row) for row in rows)
    return tuple(tuple(r) for r in U), D, tuple(tuple(r) for r in V)


@dataclass(frozen=True)
class InvariantFactorization:
    """Canonical form of a finitely generated module over the base ring."""

    free_rank: int
    torsion: tuple[int, ...]  # each a non-unit, d1 | d2 | ...

    def __repr__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion


def quotient_presentation(ambient_rank: int, ring: BaseRing,
                          gens: Matrix) -> InvariantFactorization:
    """Invariant factorization of R^n / <gens>."""
    if not gens:
        return InvariantFactorization(ambient_rank, ())
    _, D, _ = smith_form(gens, ring)
    torsion = []
    rank_used = 0
    for i in range(min(len(D), ambient_rank)):
        d = D[i][i] if i < len(D[i]) else Fraction(0)
        if d != 0:
            rank_used += 1
            if not ring.is_unit(d):
                torsion.append(int(d))
    return InvariantFactorization(ambient_rank - rank_used, tuple(torsion))


def lattice_index(sub: Matrix, sup: Matrix, ring: BaseRing = ZZ):
    """Index [sup : sub] when finite, else None; both full matrices of rows."""
    # express sub in terms of sup, then take |det|
    coeffs = []
    for row in sub:
        c = solve_membership(row, sup, ring)
        if c is None:
            raise ValueError("sub is not contained in sup")
        coeffs.append(c)
    if len(coeffs) < len(sup):
        return None
    _, D, _ = smith_form(tuple(coeffs), ring)
    idx = Fraction(1)
    for i in range(len(sup)):
        d = D[i][i]
        if d == 0:
            return None
        idx *= ring.strip_units(d)
    return int(idx)
