"""Exact Fourier-Motzkin elimination for rational linear feasibility.

Used to certify pointedness of cones (find a strictly separating rational
functional) and as a Farkas-style pruning step in monoid membership: if a
nonnegative rational solution does not exist, no nonnegative integer one
does either.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import Vector, dot, vscale

# A constraint is (coeffs, rhs, strict) meaning coeffs . x >= rhs
# (or > rhs when strict).
Constraint = tuple[Vector, Fraction, bool]


def _combine(lo: Constraint, hi: Constraint, j: int) -> Constraint:
    """Eliminate variable j from a pair with opposite signs at j."""
    (a, b, sa), (c, d, sc) = lo, hi
    ca, cc = -c[j], a[j]
    coeffs = tuple(ca * x + cc * y for x, y in zip(a, c))
    return coeffs, ca * b + cc * d, sa or sc


def feasible(constraints: list[Constraint], nvars: int):
    """Find a rational point satisfying all constraints, or None.

    Plain Fourier-Motzkin with back substitution; exponential in theory
    but the systems here are tiny (cones of rank <= 8).
    """
    system = [(tuple(Fraction(x) for x in a), Fraction(b), s)
              for a, b, s in constraints]
    stack = []
    for j in range(nvars - 1, -1, -1):
        pos = [c for c in system if c[0][j] > 0]
        neg = [c for c in system if c[0][j] < 0]
        rest = [c for c in system if c[0][j] == 0]
        stack.append((j, pos, neg))
        system = rest
        for p in pos:
            for q in neg:
                system.append(_combine(p, q, j))
        for a, b, s in system:
            if all(x == 0 for x in a):
                if b > 0 or (s and b == 0):
                    return None
        system = [c for c in system if any(x != 0 for x in c[0])]
    point = [Fraction(0)] * nvars
    for j, pos, neg in reversed(stack):
        lo_bound = None  # x_j >= lo
        hi_bound = None  # x_j <= hi
        lo_strict = hi_strict = False
        for a, b, s in pos:
            val = (b - sum(a[k] * point[k] for k in range(nvars) if k != j)) / a[j]
            if lo_bound is None or val > lo_bound or (val == lo_bound and s):
                lo_bound, lo_strict = val, s
        for a, b, s in neg:
            val = (b - sum(a[k] * point[k] for k in range(nvars) if k != j)) / a[j]
            if hi_bound is None or val < hi_bound or (val == hi_bound and s):
                hi_bound, hi_strict = val, s
        if lo_bound is None and hi_bound is None:
            point[j] = Fraction(0)
        elif hi_bound is None:
            point[j] = lo_bound + 1 if lo_strict else lo_bound
        elif lo_bound is None:
            point[j] = hi_bound - 1 if hi_strict else hi_bound
        else:
            if lo_bound > hi_bound:
                return None
            if lo_bound == hi_bound:
                if lo_strict or hi_strict:
                    return None
                point[j] = lo_bound
            else:
                point[j] = (lo_bound + hi_bound) / 2
    return tuple(point)


def positive_functional(generators: list[Vector], dim: int):
    """A rational ell with ell . g >= 1 for every generator, or None.

    Existence certifies that the monoid generated is pointed (all
    generators in an open half space).
    """
    cons = [(g, Fraction(1), False) for g in generators if any(x != 0 for x in g)]
    if not cons:
        return tuple(Fraction(0) for _ in range(dim))
    return feasible(cons, dim)


def in_rational_cone(generators: list[Vector], target: Vector) -> bool:
    """Whether target = sum a_i g_i admits a rational solution a_i >= 0."""
    k = len(generators)
    if k == 0:
        return all(x == 0 for x in target)
    n = len(target)
    cons: list[Constraint] = []
    for j in range(n):
        row = tuple(g[j] for g in generators)
        cons.append((row, target[j], False))
        cons.append((vscale(Fraction(-1), row), -target[j], False))
    for i in range(k):
        e = tuple(Fraction(1 if t == i else 0) for t in range(k))
        cons.append((e, Fraction(0), False))
    return feasible(cons, k) is not None
