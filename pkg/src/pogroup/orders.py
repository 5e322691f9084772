"""Positive-cone specifications for po-groups.

Each spec covers a contiguous slice of carrier coordinates and decides
positivity of vectors on that slice.  Composite specs (product, lex)
nest recursively; lex blocks are listed LEAST significant first, so a
vector is positive when its most significant nonzero block is.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .carriers import Coord
from .fm import feasible, positive_functional
from .linalg import Vector, dot, is_zero, unit, zeros
from .membership import (
    DEFAULT_BUDGET,
    MembershipBudget,
    SearchResult,
    cone_membership,
)
from .rings import BaseRing, QQ, ZZ, val_p, z_inv


class ConeNotPointed(ValueError):
    pass


class UnsupportedOrder(ValueError):
    pass


def _ring_key(r: BaseRing):
    return ("Q",) if r.inverted is None else ("Z",) + tuple(sorted(r.inverted))


class OrderSpec:
    """Base interface; see concrete variants."""

    rank: int

    def positive(self, v: Vector, budget=DEFAULT_BUDGET) -> bool | None:
        raise NotImplementedError

    def atoms(self, budget=DEFAULT_BUDGET):
        """List of minimal positive nonzero vectors, or None for unknown."""
        raise NotImplementedError

    def has_positive(self) -> bool:
        """Whether the positive cone contains a nonzero element."""
        raise NotImplementedError

    def group_generators(self, coords: tuple[Coord, ...]):
        """Tagged generators of the subgroup generated by the cone."""
        raise NotImplementedError

    def canonical_key(self):
        raise NotImplementedError

    def sample_positive(self, rng, coords, budget=DEFAULT_BUDGET) -> Vector:
        raise NotImplementedError

    def cone_generator_views(self):
        """Finite description of cone generators for qualification tests:
        a list of ('vector', v) / ('ray', v) / ('family', fam) entries,
        or None when no such description exists."""
        return None


def _sample_ring_element(rng, ring: BaseRing) -> Fraction:
    if ring.is_field:
        return Fraction(rng.randint(-12, 12), rng.randint(1, 6))
    x = Fraction(rng.randint(-6, 6))
    for p in sorted(ring.inverted or ()):
        x /= p ** rng.randint(0, 2)
    return x


@dataclass(frozen=True)
class HalfLine(OrderSpec):
    """Rank-one coordinate ordered by x >= 0 within its ring."""

    ring: BaseRing = ZZ
    rank: int = field(default=1, init=False)

    def positive(self, v, budget=DEFAULT_BUDGET):
        return v[0] >= 0

    def atoms(self, budget=DEFAULT_BUDGET):
        return [(Fraction(1),)] if self.ring == ZZ else []

    def has_positive(self):
        return True

    def group_generators(self, coords):
        return [(self.ring, (Fraction(1),))]

    def canonical_key(self):
        return ("halfline", _ring_key(self.ring))

    def sample_positive(self, rng, coords, budget=DEFAULT_BUDGET):
        x = abs(_sample_ring_element(rng, self.ring))
        return (x,)

    def cone_generator_views(self):
        if self.ring == ZZ:
            return [("vector", (Fraction(1),))]
        return [("ray", (Fraction(1),))]


@dataclass(frozen=True)
class TrivialOrder(OrderSpec):
    """Only the identity is positive (used for torsion coordinates)."""

    rank: int = 1

    def positive(self, v, budget=DEFAULT_BUDGET):
        return is_zero(v)

    def atoms(self, budget=DEFAULT_BUDGET):
        return []

    def has_positive(self):
        return False

    def group_generators(self, coords):
        return []

    def canonical_key(self):
        return ("trivial", self.rank)

    def sample_positive(self, rng, coords, budget=DEFAULT_BUDGET):
        return zeros(self.rank)

    def cone_generator_views(self):
        return []


def _embed(vecs, offset, total):
    out = []
    for v in vecs:
        w = list(zeros(total))
        w[offset:offset + len(v)] = v
        out.append(tuple(w))
    return out


@dataclass(frozen=True)
class ProductBlocks(OrderSpec):
    """Positive iff every block component is positive (product order)."""

    blocks: tuple[OrderSpec, ...]

    @property
    def rank(self):
        return sum(b.rank for b in self.blocks)

    def _slices(self):
        off = 0
        for b in self.blocks:
            yield b, off
            off += b.rank

    def positive(self, v, budget=DEFAULT_BUDGET):
        result = True
        for b, off in self._slices():
            r = b.positive(v[off:off + b.rank], budget)
            if r is False:
                return False
            if r is None:
                result = None
        return result

    def atoms(self, budget=DEFAULT_BUDGET):
        out = []
        n = self.rank
        for b, off in self._slices():
            a = b.atoms(budget)
            if a is None:
                return None
            out.extend(_embed(a, off, n))
        return out

    def has_positive(self):
        return any(b.has_positive() for b in self.blocks)

    def group_generators(self, coords):
        out = []
        n = self.rank
        for b, off in self._slices():
            sub = b.group_generators(coords[off:off + b.rank])
            out.extend((r, _embed([v], off, n)[0]) for r, v in sub)
        return out

    def canonical_key(self):
        return ("product",) + tuple(b.canonical_key() for b in self.blocks)

    def sample_positive(self, rng, coords, budget=DEFAULT_BUDGET):
        parts = []
        for b, off in self._slices():
            parts.extend(b.sample_positive(rng, coords[off:off + b.rank], budget))
        return tuple(parts)

    def cone_generator_views(self):
        out = []
        n = self.rank
        for b, off in self._slices():
            views = b.cone_generator_views()
            if views is None:
                return None
            for kind, payload in views:
                if kind in ("vector", "ray"):
                    out.append((kind, _embed([payload], off, n)[0]))
                elif kind == "family":
                    out.append(("family", payload.shift(off)))
        return out


@dataclass(frozen=True)
class LexBlocks(OrderSpec):
    """Lexicographic order; blocks listed LEAST significant first."""

    blocks: tuple[OrderSpec, ...]

    @property
    def rank(self):
        return sum(b.rank for b in self.blocks)

    def _slices(self):
        off = 0
        for b in self.blocks:
            yield b, off
            off += b.rank

    def positive(self, v, budget=DEFAULT_BUDGET):
        slices = list(self._slices())
        for b, off in reversed(slices):
            comp = v[off:off + b.rank]
            if not is_zero(comp):
                return b.positive(comp, budget)
        return True

    def atoms(self, budget=DEFAULT_BUDGET):
        if not self.blocks:
            return []
        first = self.blocks[0]
        if not first.has_positive():
            if all(not b.has_positive() for b in self.blocks):
                return []
            raise UnsupportedOrder(
                "atoms of a lex order whose least block has a trivial cone")
        a = first.atoms(budget)
        if a is None:
            return None
        return _embed(a, 0, self.rank)

    def has_positive(self):
        return any(b.has_positive() for b in self.blocks)

    def group_generators(self, coords):
        # the most significant nontrivially ordered block contributes its
        # cone span; every block below it contributes full coordinate lines
        # (differences of positives move lower blocks freely)
        top = None
        for i, b in enumerate(self.blocks):
            if b.has_positive():
                top = i
        if top is None:
            return []
        out = []
        n = self.rank
        for i, (b, off) in enumerate(self._slices()):
            if i < top:
                for j in range(b.rank):
                    out.append((coords[off + j].ring, unit(n, off + j)))
            elif i == top:
                sub = b.group_generators(coords[off:off + b.rank])
                out.extend((r, _embed([v], off, n)[0]) for r, v in sub)
        return out

    def canonical_key(self):
        return ("lex",) + tuple(b.canonical_key() for b in self.blocks)

    def sample_positive(self, rng, coords, budget=DEFAULT_BUDGET):
        nontrivial = [i for i, b in enumerate(self.blocks) if b.has_positive()]
        if not nontrivial:
            return zeros(self.rank)
        j = rng.choice(nontrivial)
        parts = []
        for i, (b, off) in enumerate(self._slices()):
            sub = coords[off:off + b.rank]
            if i < j:
                parts.extend(_sample_ring_element(rng, c.ring) for c in sub)
            elif i == j:
                comp = b.sample_positive(rng, sub, budget)
                for _ in range(20):
                    if not is_zero(comp):
                        break
                    comp = b.sample_positive(rng, sub, budget)
                parts.extend(comp)
            else:
                parts.extend(zeros(b.rank))
        return tuple(parts)

    def cone_generator_views(self):
        return None


@dataclass(frozen=True)
class ConeGenerated(OrderSpec):
    """Positive cone = N-span of finitely many generators (pointed)."""

    gens: tuple[Vector, ...]
    rank_: int
    functional: Vector = field(compare=False)

    @classmethod
    def make(cls, gens, rank: int) -> "ConeGenerated":
        gens = tuple(tuple(Fraction(x) for x in g) for g in gens)
        gens = tuple(g for g in gens if not is_zero(g))
        ell = positive_functional(list(gens), rank)
        if ell is None:
            raise ConeNotPointed(f"cone {gens} is not pointed")
        return cls(gens, rank, ell)

    @property
    def rank(self):
        return self.rank_

    def positive(self, v, budget=DEFAULT_BUDGET):
        return cone_membership(v, list(self.gens), self.functional, budget).verdict

    def membership(self, v, budget=DEFAULT_BUDGET) -> SearchResult:
        return cone_membership(v, list(self.gens), self.functional, budget)

    def atoms(self, budget=DEFAULT_BUDGET):
        out = []
        seen = set()
        for g in self.gens:
            if g in seen:
                continue
            seen.add(g)
            if not _pair_reducible(g, list(self.gens), self.functional, budget):
                out.append(g)
        return out

    def has_positive(self):
        return bool(self.gens)

    def group_generators(self, coords):
        return [(ZZ, g) for g in self.gens]

    def canonical_key(self):
        return ("cone", self.rank_, tuple(sorted(self.gens)))

    def sample_positive(self, rng, coords, budget=DEFAULT_BUDGET):
        v = zeros(self.rank_)
        for g in self.gens:
            c = rng.randint(0, 3)
            v = tuple(a + c * b for a, b in zip(v, g))
        return v

    def cone_generator_views(self):
        return [("vector", g) for g in self.gens]


def _pair_reducible(g, gens, functional, budget) -> bool | None:
    """Whether g = a + b for nonzero monoid elements a, b."""
    unknown = False
    for i, gi in enumerate(gens):
        for gj in gens[i:]:
            w = tuple(x - y - z for x, y, z in zip(g, gi, gj))
            r = cone_membership(w, gens, functional, budget)
            if r.verdict is True:
                return True
            if r.verdict is None:
                unknown = True
    return None if unknown else False


@dataclass(frozen=True)
class GeometricFamily:
    """The infinite generator family {value/p^n * e_coord : n >= start}."""

    coord: int
    value: Fraction
    prime: int
    start: int = 1

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError("family direction must be positive")
        if self.start < 1:
            raise ValueError("family start level must be >= 1")

    def member(self, n: int, rank: int) -> Vector:
        v = list(zeros(rank))
        v[self.coord] = self.value / self.prime ** n
        return tuple(v)

    def shift(self, offset: int) -> "GeometricFamily":
        return GeometricFamily(self.coord + offset, self.value,
                               self.prime, self.start)

    def group_generator(self, rank: int):
        v = list(zeros(rank))
        v[self.coord] = self.value
        return (z_inv(self.prime), tuple(v))


@dataclass(frozen=True)
class GeometricCone(OrderSpec):
    """Finite generators plus geometric families (carry-exact membership)."""

    gens: tuple[Vector, ...]
    families: tuple[GeometricFamily, ...]
    rank_: int
    functional: Vector = field(compare=False)

    @classmethod
    def make(cls, gens, families, rank: int) -> "GeometricCone":
        gens = tuple(tuple(Fraction(x) for x in g) for g in gens)
        gens = tuple(g for g in gens if not is_zero(g))
        families = tuple(families)
        coords_used = [f.coord for f in families]
        if len(set(coords_used)) != len(coords_used):
            raise UnsupportedOrder("at most one family per coordinate")
        dirs = [f.member(f.start, rank) for f in families]
        ell = positive_functional(list(gens) + dirs, rank)
        if ell is None:
            raise ConeNotPointed("geometric cone is not pointed")
        return cls(gens, families, rank, ell)

    @property
    def rank(self):
        return self.rank_

    def truncation_level(self, fam: GeometricFamily, targets) -> int:
        """Exact truncation level: carry normal form pushes any deeper
        family usage into levels visible to the target's denominator and
        to the finite generators' denominators."""
        p = fam.prime
        e = val_p(fam.value, p)
        level = fam.start
        for t in list(targets) + list(self.gens):
            x = t[fam.coord]
            if x != 0:
                level = max(level, e - val_p(x, p))
        return level

    def expanded(self, targets, extra: int = 0):
        ext = list(self.gens)
        for fam in self.families:
            top = self.truncation_level(fam, targets) + extra
            for n in range(fam.start, top + 1):
                ext.append(fam.member(n, self.rank_))
        return ext

    def positive(self, v, budget=DEFAULT_BUDGET):
        return self.membership(v, budget).verdict

    def membership(self, v, budget=DEFAULT_BUDGET) -> SearchResult:
        ext = self.expanded([v])
        return cone_membership(v, ext, self.functional, budget)

    def atoms(self, budget=DEFAULT_BUDGET):
        # family members m satisfy m = p * (next member), hence none is an
        # atom; finite generators are tested by decomposition search
        out = []
        for g in self.gens:
            ext = self.expanded([g], extra=1)
            if not _pair_reducible(g, ext, self.functional, budget):
                out.append(g)
        return out

    def has_positive(self):
        return bool(self.gens) or bool(self.families)

    def group_generators(self, coords):
        out = [(ZZ, g) for g in self.gens]
        out.extend(f.group_generator(self.rank_) for f in self.families)
        return out

    def canonical_key(self):
        fams = tuple(sorted((f.coord, f.value, f.prime, f.start)
                            for f in self.families))
        return ("geometric", self.rank_, tuple(sorted(self.gens)), fams)

    def sample_positive(self, rng, coords, budget=DEFAULT_BUDGET):
        pool = list(self.gens)
        for f in self.families:
            for n in range(f.start, f.start + 3):
                pool.append(f.member(n, self.rank_))
        v = zeros(self.rank_)
        for g in pool:
            c = rng.randint(0, 2)
            v = tuple(a + c * b for a, b in zip(v, g))
        return v

    def cone_generator_views(self):
        out = [("vector", g) for g in self.gens]
        out.extend(("family", f) for f in self.families)
        return out


@dataclass(frozen=True)
class Region:
    """One linear case rule: conjunction of equalities, inequalities
    (coeffs . x >= rhs) and integrality flags on coordinates."""

    equalities: tuple[tuple[Vector, Fraction], ...] = ()
    inequalities: tuple[tuple[Vector, Fraction], ...] = ()
    integral: tuple[int, ...] = ()

    def holds(self, v: Vector) -> bool:
        for a, c in self.equalities:
            if dot(a, v) != c:
                return False
        for a, c in self.inequalities:
            if dot(a, v) < c:
                return False
        return all(v[i].denominator == 1 for i in self.integral)

    def key(self):
        return (tuple((a, c) for a, c in self.equalities),
                tuple((a, c) for a, c in self.inequalities),
                self.integral)


@dataclass(frozen=True)
class PredicateCone(OrderSpec):
    """Cone given by a finite union of linear case regions.

    Atoms are declared (and sanity-sampled by the group layer); the group
    span of the cone is declared through tagged span generators since the
    regions may be dense in rational directions.
    """

    rank_: int
    regions: tuple[Region, ...]
    declared_atoms: tuple[Vector, ...]
    span_gens: tuple[tuple[BaseRing, Vector], ...]
    closure_note: str = ""

    @property
    def rank(self):
        return self.rank_

    def positive(self, v, budget=DEFAULT_BUDGET):
        return any(r.holds(v) for r in self.regions)

    def atoms(self, budget=DEFAULT_BUDGET):
        return list(self.declared_atoms)

    def has_positive(self):
        return bool(self.regions)

    def group_generators(self, coords):
        return list(self.span_gens)

    def canonical_key(self):
        return ("predicate", self.rank_,
                tuple(sorted(r.key() for r in self.regions)),
                tuple(sorted(self.declared_atoms)))

    def sample_positive(self, rng, coords, budget=DEFAULT_BUDGET):
        # rejection sampling from a small box, padded with declared atoms
        for _ in range(60):
            v = []
            for c in coords:
                x = _sample_ring_element(rng, c.ring)
                v.append(x)
            v = tuple(v)
            if self.positive(v):
                return v
        if self.declared_atoms:
            return rng.choice(list(self.declared_atoms))
        return zeros(self.rank_)

    def cone_generator_views(self):
        return None


def product_of_rings(rings) -> ProductBlocks:
    return ProductBlocks(tuple(HalfLine(r) for r in rings))


def lex_of_rings(rings) -> LexBlocks:
    return LexBlocks(tuple(HalfLine(r) for r in rings))
