"""Base scalar rings: Z, Z with finitely many primes inverted, and Q.

Every ring here is a localization of Z inside Q, so a scalar is always a
``fractions.Fraction``.  A ring is identified by the set of primes it
inverts; Q is the degenerate case that inverts everything.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of a positive integer as ((p, e), ...)."""
    if n <= 0:
        raise ValueError("factorize expects a positive integer")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_support(n: int) -> frozenset[int]:
    if n in (0, 1, -1):
        return frozenset()
    return frozenset(p for p, _ in factorize(abs(n)))


def val_p(q: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational; raises on zero."""
    if q == 0:
        raise ValueError("valuation of zero")
    v = 0
    n = abs(q.numerator)
    while n % p == 0:
        n //= p
        v += 1
    d = q.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


@dataclass(frozen=True)
class BaseRing:
    """A localization of Z determined by its set of inverted primes.

    ``inverted`` is a frozenset of primes, or None meaning "all primes"
    (the field Q).
    """

    inverted: frozenset[int] | None = field(default=frozenset())

    def __post_init__(self):
        if self.inverted is not None:
            for p in self.inverted:
                if factorize(p) != ((p, 1),):
                    raise ValueError(f"{p} is not prime")

    @property
    def is_field(self) -> bool:
        return self.inverted is None

    def __repr__(self) -> str:
        if self.inverted is None:
            return "Q"
        if not self.inverted:
            return "Z"
        return "Z[1/%s]" % ",1/".join(str(p) for p in sorted(self.inverted))

    def contains(self, q: Fraction) -> bool:
        if self.inverted is None:
            return True
        return prime_support(q.denominator) <= self.inverted

    def is_unit(self, q: Fraction) -> bool:
        if q == 0:
            return False
        if self.inverted is None:
            return True
        return (prime_support(q.denominator) | prime_support(q.numerator)) <= self.inverted

    def leq(self, other: "BaseRing") -> bool:
        """Subring containment (this ring inverts no more than other)."""
        if other.inverted is None:
            return True
        if self.inverted is None:
            return False
        return self.inverted <= other.inverted

    def join(self, other: "BaseRing") -> "BaseRing":
        if self.inverted is None or other.inverted is None:
            return QQ
        return BaseRing(self.inverted | other.inverted)

    def strip_units(self, q: Fraction) -> Fraction:
        """Canonical associate of q: positive, with all unit prime factors removed.

        Over Z this is |q| for integers; over Z[1/S] the S-part of both
        numerator and denominator is removed; over Q every nonzero scalar
        is associate to 1.
        """
        if q == 0:
            return Fraction(0)
        if self.inverted is None:
            return Fraction(1)
        n, d = abs(q.numerator), q.denominator
        for p in self.inverted:
            while n % p == 0:
                n //= p
            while d % p == 0:
                d //= p
        if d != 1:
            raise ValueError(f"{q} does not lie in {self}")
        return Fraction(n)

    def canonical_unit(self, q: Fraction) -> Fraction:
        """Unit u of the ring with u*q = strip_units(q)."""
        if q == 0:
            return Fraction(1)
        return self.strip_units(q) / q

    def gcd(self, a: Fraction, b: Fraction) -> Fraction:
        """A gcd of a and b up to units, in canonical associate form."""
        a, b = self.strip_units(a), self.strip_units(b)
        return Fraction(gcd(int(a), int(b)))

    def divides(self, a: Fraction, b: Fraction) -> bool:
        """Whether a | b in the ring (with 0 | 0)."""
        if a == 0:
            return b == 0
        return self.contains(b / a)

    def residue(self, x: Fraction, d: Fraction) -> Fraction:
        """Canonical representative of x modulo d*R (d != 0).

        Chosen so that r = x - q*d for some q in R, and r is the unique
        representative with r/d in [0, 1) having no unit-prime factors in
        its denominator.  Over Z with integer inputs this is x mod d.
        """
        if d == 0:
            return x
        y = x / d
        if self.inverted is None:
            return Fraction(0)
        num, den = y.numerator, y.denominator
        unit_part = 1
        for p in self.inverted:
            while den % p == 0:
                den //= p
                unit_part *= p
        if den == 1:
            return Fraction(0)
        # y = num / (unit_part * den); the class mod R is determined by
        # num * unit_part^{-1} mod den.
        inv = pow(unit_part, -1, den)
        r = (num * inv) % den
        return Fraction(r, den) * d

    def divmod(self, x: Fraction, d: Fraction) -> tuple[Fraction, Fraction]:
        r = self.residue(x, d)
        q = (x - r) / d if d != 0 else Fraction(0)
        if not self.contains(q):
            raise ArithmeticError(f"residue failure: {x} mod {d} in {self}")
        return q, r


ZZ = BaseRing(frozenset())
QQ = BaseRing(None)


def z_inv(*primes: int) -> BaseRing:
    return BaseRing(frozenset(primes))
