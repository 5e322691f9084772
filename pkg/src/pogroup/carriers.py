"""Carriers: the underlying finitely presented abelian groups.

A carrier is a direct sum of coordinate groups, each of which is a base
ring (free coordinate) or Z/d (torsion coordinate, over Z).  Elements
are tuples of Fractions; torsion coordinates are stored reduced to the
canonical representative in [0, d).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import Vector
from .rings import BaseRing, ZZ


@dataclass(frozen=True)
class Coord:
    ring: BaseRing = ZZ
    modulus: int = 0  # 0 means free

    def __post_init__(self):
        if self.modulus < 0:
            raise ValueError("modulus must be >= 0")
        if self.modulus and self.ring != ZZ:
            raise ValueError("torsion coordinates are normalized to ring Z")

    def __repr__(self):
        if self.modulus:
            return f"Z/{self.modulus}"
        return repr(self.ring)


@dataclass(frozen=True)
class Carrier:
    coords: tuple[Coord, ...]

    @classmethod
    def free(cls, *rings: BaseRing) -> "Carrier":
        return cls(tuple(Coord(r) for r in rings))

    @classmethod
    def zn(cls, n: int) -> "Carrier":
        return cls(tuple(Coord(ZZ) for _ in range(n)))

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def free_indices(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if c.modulus == 0)

    @property
    def torsion_indices(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if c.modulus != 0)

    @property
    def is_torsion_free(self) -> bool:
        return not self.torsion_indices

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0

    def rings_present(self) -> set[BaseRing]:
        return {c.ring for c in self.coords if c.modulus == 0}

    def reduce(self, v) -> Vector:
        """Canonical representative (torsion coordinates mod their modulus)."""
        out = []
        for x, c in zip(v, self.coords, strict=True):
            x = Fraction(x)
            if c.modulus:
                if x.denominator != 1:
                    raise ValueError("torsion coordinate must be an integer")
                x = Fraction(int(x) % c.modulus)
            out.append(x)
        return tuple(out)

    def contains(self, v) -> bool:
        if len(v) != self.rank:
            return False
        for x, c in zip(v, self.coords):
            x = Fraction(x)
            if c.modulus:
                if x.denominator != 1:
                    return False
            elif not c.ring.contains(x):
                return False
        return True

    def zero(self) -> Vector:
        return (Fraction(0),) * self.rank

    def add(self, a: Vector, b: Vector) -> Vector:
        return self.reduce(tuple(x + y for x, y in zip(a, b, strict=True)))

    def sub(self, a: Vector, b: Vector) -> Vector:
        return self.reduce(tuple(x - y for x, y in zip(a, b, strict=True)))

    def neg(self, a: Vector) -> Vector:
        return self.reduce(tuple(-x for x in a))

    def scale(self, n: int, a: Vector) -> Vector:
        return self.reduce(tuple(n * x for x in a))

    def concat(self, other: "Carrier") -> "Carrier":
        return Carrier(self.coords + other.coords)

    def describe(self) -> str:
        if not self.coords:
            return "0"
        return " + ".join(repr(c) for c in self.coords)
