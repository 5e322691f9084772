"""Ring-tagged subgroups of a carrier.

A subgroup here is a finite sum of cyclic pieces R_j * g_j where each
R_j is a base ring and g_j a vector of the carrier; this covers every
subgroup the analysis produces (atom lattices, semisaturations with
geometric-family contributions such as Z[1/3]*1 inside Z[1/3], divisible
blocks of Q-coordinates, ...).

The canonical form stratifies generators by ring, largest ring first:

* the Q-stratum is the maximal divisible subgroup (RREF basis),
* each intermediate stratum R = Z[1/S] is the maximal R-divisible part
  modulo the higher strata (Hermite basis over R),
* the Z-stratum is an ordinary lattice (Hermite basis over Z),

with every row reduced against the higher strata (exactly at divisible
pivots, by canonical residues at intermediate pivots).  Two tagged
subgroups of the same carrier are equal iff their canonical rows and
tags are identical; tests cross-check this against mutual membership.

Tags must form a chain under inclusion (e.g. Z within Z[1/3] within Q);
incomparable localizations in one subgroup are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .carriers import Carrier
from .linalg import (
    Matrix,
    Vector,
    is_zero,
    lcm_den,
    q_solve,
    right_kernel,
    rref,
    row_combo,
    zeros,
)
from .exact import hermite_basis, hermite_form, left_kernel
from .rings import QQ, ZZ, BaseRing, prime_support


class UnsupportedSubgroup(ValueError):
    """Raised for generator data outside the supported chain-tag regime."""


def module_hermite(rows, ring: BaseRing) -> Matrix:
    """Canonical Hermite basis of the R-module generated by rational rows.

    Entries need not lie in the ring; the module is scaled by the least
    common denominator (ignoring unit primes), normalized, and scaled back.
    """
    rows = [tuple(Fraction(x) for x in r) for r in rows if not is_zero(r)]
    if not rows:
        return ()
    scale = 1
    for r in rows:
        for x in r:
            d = x.denominator
            if ring.inverted:
                for p in ring.inverted:
                    while d % p == 0:
                        d //= p
            scale = lcm(scale, d)
    scaled = tuple(tuple(x * scale for x in r) for r in rows)
    H = hermite_basis(scaled, ring)
    return tuple(tuple(x / scale for x in r) for r in H)


def _pivot(row: Vector) -> int:
    return next(j for j, x in enumerate(row) if x != 0)


def _unimodular_complement(kernel_rows: Matrix, k: int,
                           ring: BaseRing = ZZ) -> Matrix:
    """Rows completing a saturated sublattice of R^k to all of R^k."""
    if not kernel_rows:
        from .linalg import identity

        return identity(k)
    from .exact import smith_form

    _, D, V = smith_form(kernel_rows, ring)
    # rowspan(kernel) = first r rows of V^{-1}; complement = the rest
    Vinv = _mat_inverse(V)
    r = sum(1 for i in range(min(len(D), k))
            if i < len(D[i]) and D[i][i] != 0)
    return tuple(Vinv[i] for i in range(r, k))


def _mat_inverse(m: Matrix) -> Matrix:
    n = len(m)
    from .linalg import identity

    aug = tuple(tuple(m[i]) + tuple(identity(n)[i]) for i in range(n))
    R, _, piv = rref(aug)
    if piv != list(range(n)):
        raise ValueError("matrix not invertible")
    return tuple(tuple(row[n:]) for row in R)


@dataclass(frozen=True)
class TaggedSubgroup:
    carrier: Carrier
    rows: tuple[tuple[BaseRing, Vector], ...]  # canonical, largest ring first

    # -- construction ---------------------------------------------------

    @classmethod
    def zero(cls, carrier: Carrier) -> "TaggedSubgroup":
        return cls(carrier, ())

    @classmethod
    def full_free(cls, carrier: Carrier) -> "TaggedSubgroup":
        """The free part of the carrier as a subgroup."""
        gens = []
        n = carrier.rank
        for i in carrier.free_indices:
            v = list(zeros(n))
            v[i] = Fraction(1)
            gens.append((carrier.coords[i].ring, tuple(v)))
        return cls.span(carrier, gens)

    @classmethod
    def span(cls, carrier: Carrier, gens) -> "TaggedSubgroup":
        """Canonicalize a list of (ring, vector) generators."""
        cleaned: list[tuple[BaseRing, Vector]] = []
        for ring, v in gens:
            v = tuple(Fraction(x) for x in v)
            if len(v) != carrier.rank:
                raise ValueError("generator has wrong length")
            if is_zero(v):
                continue
            for i, x in enumerate(v):
                coord = carrier.coords[i]
                if x == 0:
                    continue
                if coord.modulus:
                    raise UnsupportedSubgroup(
                        "tagged subgroups live in the free part of the carrier")
                if not coord.ring.contains(x):
                    raise ValueError(f"generator {v} leaves the carrier")
                if not ring.leq(coord.ring):
                    raise UnsupportedSubgroup(
                        f"tag {ring} too large for coordinate ring {coord.ring}")
            cleaned.append((ring, v))
        # tags must form a chain
        nontrivial = {r for r, _ in cleaned if r not in (ZZ, QQ)}
        for a in nontrivial:
            for b in nontrivial:
                if not (a.leq(b) or b.leq(a)):
                    raise UnsupportedSubgroup(f"incomparable tags {a}, {b}")
        chain = sorted({r for r, _ in cleaned},
                       key=lambda r: (r.inverted is None,
                                      len(r.inverted or ()),
                                      sorted(r.inverted or ())),
                       reverse=True)
        rows = cls._canonicalize(carrier, cleaned, chain)
        return cls(carrier, rows)

    @staticmethod
    def _canonicalize(carrier, cleaned, chain):
        pending = list(cleaned)
        canon: list[tuple[BaseRing, Vector]] = []
        done_rows: list[tuple[BaseRing, Matrix]] = []
        for ring in chain:
            mine = [TaggedSubgroup._reduce_row(v, done_rows)
                    for r, v in pending if r == ring]
            mine = [v for v in mine if not is_zero(v)]
            pending = [(r, v) for r, v in pending if r != ring]
            span_here = rref(tuple(mine))[0] if mine else ()
            if span_here:
                # absorb lower-tagged material lying in this rational span:
                # for g in the span, R'*M + R''*g = R'*(M u {g}) by a
                # localization check, so the finer stratum swallows it.
                new_pending = []
                by_tag: dict[BaseRing, list[Vector]] = {}
                for r, v in pending:
                    by_tag.setdefault(r, []).append(
                        TaggedSubgroup._reduce_row(v, done_rows))
                pending = []
                for r, vs in by_tag.items():
                    vs = [v for v in vs if not is_zero(v)]
                    absorbed, remaining = TaggedSubgroup._split_by_span(
                        vs, span_here, r)
                    mine.extend(absorbed)
                    pending.extend((r, v) for v in remaining)
            basis = module_hermite(mine, ring)
            basis = tuple(TaggedSubgroup._reduce_row(v, done_rows)
                          for v in basis)
            basis = tuple(v for v in basis if not is_zero(v))
            if basis:
                done_rows.append((ring, basis))
                canon.extend((ring, v) for v in basis)
        return tuple(canon)

    @staticmethod
    def _split_by_span(rows, span_basis, ring):
        """Split the R-module of rows into (part inside the rational span,
        complementary basis rows), both as in-group vectors."""
        if not rows:
            return [], []
        h = module_hermite(rows, ring)
        if not h:
            return [], []
        comp = right_kernel(span_basis)
        if not comp:
            return list(h), []
        cols = tuple(tuple(v[i] for v in comp) for i in range(len(comp[0])))
        proj = tuple(row_combo(row, cols) for row in h)
        # combinations of h over the ring landing in the span = kernel
        K = _ring_left_kernel(proj, ring)
        absorbed = [row_combo(c, h) for c in K]
        T = _ring_complement(K, len(h), ring)
        remaining = [row_combo(c, h) for c in T]
        return absorbed, remaining

    @staticmethod
    def _reduce_row(v: Vector, done_rows) -> Vector:
        out = list(v)
        for ring, basis in done_rows:
            for row in basis:
                p = _pivot(row)
                if out[p] == 0:
                    continue
                if ring.is_field:
                    q = out[p] / row[p]
                else:
                    q, _ = ring.divmod(out[p], row[p])
                if q:
                    out = [a - q * b for a, b in zip(out, row)]
        return tuple(out)

    # -- queries ---------------------------------------------------------

    @property
    def is_trivial(self) -> bool:
        return not self.rows

    @property
    def rank(self) -> int:
        return len(self.rows)

    def row_matrix(self) -> Matrix:
        return tuple(v for _, v in self.rows)

    def tags(self) -> tuple[BaseRing, ...]:
        return tuple(r for r, _ in self.rows)

    def coefficients(self, x: Vector):
        """Unique rational coefficients of x against the canonical rows,
        or None when x is outside the rational span."""
        if self.is_trivial:
            return () if is_zero(x) else None
        sol = q_solve(self.row_matrix(), tuple(Fraction(t) for t in x))
        if sol is None:
            return None
        c, null = sol
        if null:
            raise AssertionError("canonical rows must be independent")
        return c

    def contains(self, x) -> bool:
        return self.membership(x) is not None

    def membership(self, x):
        """Coefficient witness (one per canonical row) or None."""
        x = tuple(Fraction(t) for t in x)
        if is_zero(x):
            return ()
        c = self.coefficients(x)
        if c is None:
            return None
        for (ring, _), coeff in zip(self.rows, c):
            if not ring.contains(coeff):
                return None
        return c

    def contains_subgroup(self, other: "TaggedSubgroup") -> bool:
        for ring, v in other.rows:
            c = self.membership(v)
            if c is None:
                return False
            if ring == ZZ:
                continue
            # R*v must embed: check v/p for generator primes, which by
            # induction on the canonical coefficients suffices: the
            # coefficient vector of v/k is c/k, so we need each c_j/k in
            # R_j for all k made of ring's inverted primes.  Equivalently
            # every coefficient against a strictly smaller tag vanishes.
            for (rj, _), coeff in zip(self.rows, c):
                if coeff == 0:
                    continue
                if ring.is_field and not rj.is_field:
                    return False
                if not ring.is_field and not rj.is_field:
                    if not (ring.inverted or frozenset()) <= (rj.inverted or frozenset()):
                        return False
        return True

    def add(self, other: "TaggedSubgroup") -> "TaggedSubgroup":
        assert self.carrier == other.carrier
        return TaggedSubgroup.span(self.carrier, self.rows + other.rows)

    def element_order(self, x):
        """Least n >= 1 with n*x in the subgroup, or None when infinite."""
        x = tuple(Fraction(t) for t in x)
        if is_zero(x):
            return 1
        c = self.coefficients(x)
        if c is None:
            return None
        n = 1
        for (ring, _), coeff in zip(self.rows, c):
            if coeff == 0 or ring.is_field:
                continue
            d = coeff.denominator
            if ring.inverted:
                for p in ring.inverted:
                    while d % p == 0:
                        d //= p
            n = lcm(n, d)
        return n

    def q_span(self) -> Matrix:
        return rref(self.row_matrix())[0] if self.rows else ()

    def q_rank(self) -> int:
        return len(self.rows)

    def saturation(self) -> "TaggedSubgroup":
        """{x in carrier : n*x in self for some n >= 1}."""
        return subspace_section(self.carrier, self.row_matrix())

    def intersect_trivially(self, other: "TaggedSubgroup") -> bool:
        """Sound check that the intersection is 0 (rational spans disjoint,
        which for subgroups implies trivial intersection)."""
        if self.is_trivial or other.is_trivial:
            return True
        stacked = self.row_matrix() + other.row_matrix()
        from .linalg import q_rank

        return q_rank(stacked) == len(stacked)

    def describe(self) -> str:
        if not self.rows:
            return "0"
        return " + ".join(f"{r}*{tuple(str(x) for x in v)}" for r, v in self.rows)


def _ring_left_kernel(rows: Matrix, ring: BaseRing) -> Matrix:
    """Basis of {c over the ring : c @ rows = 0} for a rational matrix."""
    if not rows:
        return ()
    if ring.is_field:
        return _rational_left_kernel(rows)
    scale = 1
    for r in rows:
        for x in r:
            d = x.denominator
            for p in ring.inverted or ():
                while d % p == 0:
                    d //= p
            scale = lcm(scale, d)
    scaled = tuple(tuple(x * scale for x in r) for r in rows)
    return left_kernel(scaled, ring)


def _ring_complement(kernel_rows: Matrix, k: int, ring: BaseRing) -> Matrix:
    """Rows completing a saturated kernel sublattice to all of ring^k."""
    if ring.is_field:
        if not kernel_rows:
            from .linalg import identity

            return identity(k)
        R, _, piv = rref(kernel_rows)
        from .linalg import unit

        return tuple(unit(k, j) for j in range(k) if j not in piv)
    return _unimodular_complement(kernel_rows, k, ring)


def subspace_section(carrier: Carrier, span_rows: Matrix) -> TaggedSubgroup:
    """The subgroup carrier ∩ V for a rational subspace V (given by rows).

    This is the saturation machinery: it produces tagged generators of all
    carrier points lying in the subspace.  Coordinate rings must form a
    chain with at most one intermediate localization.
    """
    if not span_rows:
        return TaggedSubgroup.zero(carrier)
    if not carrier.is_torsion_free:
        raise UnsupportedSubgroup("subspace sections need a torsion-free carrier")
    V, _, _ = rref(span_rows)
    if not V:
        return TaggedSubgroup.zero(carrier)
    n = carrier.rank
    q_coords = [i for i, c in enumerate(carrier.coords) if c.ring.is_field]
    inter = {c.ring for c in carrier.coords
             if not c.ring.is_field and c.ring != ZZ}
    if len(inter) > 1:
        raise UnsupportedSubgroup("more than one intermediate coordinate ring")
    rp = inter.pop() if inter else None

    gens: list[tuple[BaseRing, Vector]] = []

    # 1. the divisible stratum: V ∩ span(Q-coordinate axes)
    if q_coords:
        constraints = tuple(
            tuple(Fraction(1 if j == i else 0) for j in range(n))
            for i in range(n) if i not in q_coords)
        u_rows = _subspace_intersection(V, constraints)
        for v in u_rows:
            gens.append((QQ, v))
        # work modulo the divisible stratum: drop its pivot coordinates
        if u_rows:
            U, _, upiv = rref(u_rows)
            keep = [j for j in range(n) if j not in upiv]
            Vred = []
            for row in V:
                r = TaggedSubgroup._reduce_row(row, [(QQ, U)])
                if not is_zero(r):
                    Vred.append(r)
            V = rref(tuple(Vred))[0] if Vred else ()
    if not V:
        return TaggedSubgroup.span(carrier, gens)

    # 2. remaining V meets the Q-axes trivially; conditions apply only to
    # the non-Q coordinates, and V injects into them.
    nonq = [i for i in range(n) if i not in q_coords]
    proj = tuple(tuple(row[i] for i in nonq) for row in V)
    base_ring = rp if rp is not None else ZZ
    # saturated base_ring-lattice of the projected span
    sat = _saturated_lattice(proj, base_ring)
    if rp is not None:
        z_positions = [k for k, i in enumerate(nonq)
                       if carrier.coords[i].ring == ZZ]
        tagged = _p_refine(sat, z_positions, rp)
    else:
        tagged = [(ZZ, row) for row in sat]
    # lift back: solve each projected generator inside V
    for ring, prow in tagged:
        sol = q_solve(proj, prow)
        assert sol is not None
        lifted = row_combo(sol[0], V)
        gens.append((ring, lifted))
    return TaggedSubgroup.span(carrier, gens)


def _subspace_intersection(V: Matrix, constraints: Matrix) -> Matrix:
    """Basis of {x in span(V) : constraint . x = 0 for all constraints}."""
    if not constraints:
        return V
    coeff_mat = tuple(tuple(sum(V[k][j] * c[j] for j in range(len(c)))
                            for c in constraints) for k in range(len(V)))
    rows = [row_combo(y, V) for y in _rational_left_kernel(coeff_mat)]
    return rref(tuple(rows))[0] if rows else ()


def _rational_left_kernel(rows: Matrix) -> Matrix:
    if not rows:
        return ()
    cols = tuple(zip(*rows))
    return right_kernel(tuple(tuple(c) for c in cols))


def _saturated_lattice(span_rows: Matrix, ring: BaseRing) -> Matrix:
    """Basis over the ring of span ∩ ring^m."""
    m = len(span_rows[0])
    from .exact import saturate

    scaled = []
    for r in span_rows:
        d = lcm_den(r)
        scaled.append(tuple(x * d for x in r))
    return saturate(tuple(scaled), m, ring)


def _p_refine(sat_rows: Matrix, z_positions: list[int], rp: BaseRing):
    """Refine an R_p-lattice by Z-integrality conditions at given positions.

    Returns tagged rows over {Z, R_p} spanning {y in <sat_rows>_{R_p} :
    y integral (at p) on z_positions}.
    """
    if not sat_rows:
        return []
    if not z_positions:
        return [(rp, row) for row in sat_rows]
    (p,) = tuple(rp.inverted)
    d = len(sat_rows)
    A = tuple(tuple(row[i] for i in z_positions) for row in sat_rows)
    # clear p-denominators: A = p^-a * A' with A' having no p in denominators
    a = 0
    for row in A:
        for x in row:
            v = x.denominator
            e = 0
            while v % p == 0:
                v //= p
                e += 1
            a = max(a, e)
    Ap = tuple(tuple(x * p ** a for x in row) for row in A)
    # remaining denominators are p-free; scale them away and remember:
    # condition is (y @ A) p-integral <=> (y @ Ap) in p^a Z_(p)
    s = 1
    for row in Ap:
        s = lcm(s, lcm_den(row))
    # s is p-free; multiplying by it does not change p-integrality
    Ai = tuple(tuple(x * s for x in row) for row in Ap)
    from .exact import smith_form

    U, D, Vmat = smith_form(Ai, ZZ)
    # y @ Ai = (y @ U^-1) D V; put w = y @ U^-1 ... careful with sides:
    # we use row vectors: y (1 x d) times Ai (d x m).  SNF: D = U Ai V, so
    # Ai = U^-1 D V^-1 and y Ai = (y U^-1) D V^-1.  V^-1 is unimodular so
    # p-integrality of y Ai is equivalent to p-integrality of (y U^-1) D.
    tagged = []
    for i in range(d):
        # y ranges over R_p^d with (y @ Ai) in p^a Z_(p); with w = y @ U^-1
        # this says v_p(w_i) >= a - v_p(d_i), so the solution basis is
        # w = p^(a - v_p(d_i)) e_i (a Z-line) or w = e_i free when d_i = 0,
        # mapped back through y = w @ U.
        di = D[i][i] if i < len(D) and i < len(D[i]) else Fraction(0)
        yrow = U[i]
        if di == 0:
            tagged.append((rp, row_combo(yrow, sat_rows)))
        else:
            e = 0
            dd = abs(int(di))
            while dd % p == 0:
                dd //= p
                e += 1
            f = a - e
            y = tuple(Fraction(p) ** f * x for x in yrow)
            tagged.append((ZZ, row_combo(y, sat_rows)))
    return tagged
