"""Bounded-but-honest monoid membership engines.

Three layers:

* rank-one values scale to an integer coin problem solved exactly by the
  Apery-set construction (shortest paths on residues modulo the smallest
  coin) -- this is the workhorse behind carry-normal-form membership for
  geometric generator families;
* multi-coordinate pointed cones use depth-first search with memoization,
  pruned by a strictly positive rational functional, which makes the
  search complete;
* everything else falls back to budgeted search and reports "unknown"
  instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from heapq import heappop, heappush
from math import gcd, lcm

from .fm import in_rational_cone
from .linalg import Vector, dot, is_zero, vsub


@dataclass(frozen=True)
class MembershipBudget:
    max_coefficient_sum: int = 64
    max_family_level: int = 12
    max_nodes: int = 20000

    def __post_init__(self):
        if self.max_coefficient_sum < 1 or self.max_family_level < 1:
            raise ValueError("budget bounds must be >= 1")


DEFAULT_BUDGET = MembershipBudget()


@dataclass(frozen=True)
class SearchResult:
    """verdict True/False is exact; None means the budget ran out."""

    verdict: bool | None
    witness: tuple[int, ...] | None = None  # generator multiplicities


def _rank_one_values(gens: list[Vector]):
    """If all generators live on one coordinate axis, return (axis, values)."""
    axis = None
    for g in gens:
        support = [i for i, x in enumerate(g) if x != 0]
        if len(support) > 1:
            return None
        if support:
            if axis is None:
                axis = support[0]
            elif axis != support[0]:
                return None
    if axis is None:
        return None
    return axis, [g[axis] for g in gens]


class CoinSystem:
    """Exact membership in <c_1..c_m>_N for positive rational coins."""

    def __init__(self, coins: list[Fraction]):
        coins = [c for c in coins if c != 0]
        if any(c < 0 for c in coins):
            raise ValueError("coins must be nonnegative")
        self.scale = lcm(*(c.denominator for c in coins)) if coins else 1
        ints = sorted({int(c * self.scale) for c in coins})
        self.coins = ints
        self._dist = None

    def _apery(self):
        if self._dist is not None:
            return self._dist
        if not self.coins:
            self._dist = {}
            return self._dist
        m = self.coins[0]
        dist = {0: 0}
        heap = [(0, 0)]
        while heap:
            d, r = heappop(heap)
            if dist.get(r, None) != d:
                continue
            for c in self.coins[1:]:
                nd, nr = d + c, (r + c) % m
                if nd < dist.get(nr, nd + 1):
                    dist[nr] = nd
                    heappush(heap, (nd, nr))
        self._dist = dist
        return dist

    def contains(self, value: Fraction) -> bool:
        if value == 0:
            return True
        if value < 0:
            return False
        v = value * self.scale
        if v.denominator != 1:
            return False
        v = int(v)
        if not self.coins:
            return False
        dist = self._apery()
        m = self.coins[0]
        best = dist.get(v % m)
        return best is not None and v >= best

    def witness(self, value: Fraction):
        """Greedy extraction of one representation (value must be member)."""
        if not self.contains(value):
            return None
        v = int(value * self.scale)
        counts = [0] * len(self.coins)
        dist = self._apery()
        m = self.coins[0]
        while v > 0:
            if v % m == 0:
                counts[0] += v // m
                v = 0
                break
            for i in range(len(self.coins) - 1, 0, -1):
                rem = v - self.coins[i]
                if rem < 0:
                    continue
                best = dist.get(rem % m)
                if best is not None and rem >= best:
                    counts[i] += 1
                    v = rem
                    break
            else:
                return None
        return tuple(counts)


def cone_membership(target: Vector, gens: list[Vector],
                    functional: Vector | None,
                    budget: MembershipBudget = DEFAULT_BUDGET) -> SearchResult:
    """Is target a nonnegative integer combination of gens?

    Exact for rank-one systems and for pointed cones (functional given);
    budgeted otherwise.
    """
    target = tuple(Fraction(x) for x in target)
    if is_zero(target):
        return SearchResult(True, tuple(0 for _ in gens))
    gens = [tuple(Fraction(x) for x in g) for g in gens]
    gens_nz = [(i, g) for i, g in enumerate(gens) if not is_zero(g)]
    if not gens_nz:
        return SearchResult(False)
    r1 = _rank_one_values([g for _, g in gens_nz])
    if r1 is not None:
        axis, values = r1
        if any(target[i] != 0 for i in range(len(target)) if i != axis):
            return SearchResult(False)
        if any(v < 0 for v in values):
            r1 = None  # mixed-sign rank-one: fall through to search
        else:
            cs = CoinSystem(values)
            if not cs.contains(target[axis]):
                return SearchResult(False)
            w = cs.witness(target[axis])
            counts = [0] * len(gens)
            if w is not None:
                # map coin counts back to generator indices (coins are
                # deduplicated and sorted, so redistribute by value)
                for coin_idx, count in enumerate(w):
                    if count == 0:
                        continue
                    cval = Fraction(cs.coins[coin_idx], cs.scale)
                    for gi, g in gens_nz:
                        if g[axis] == cval:
                            counts[gi] += count
                            break
            return SearchResult(True, tuple(counts))
    if not in_rational_cone([g for _, g in gens_nz], target):
        return SearchResult(False)
    # depth-first search with memoization; memo stores a witness tail (list
    # of generator indices summing to the key) or None for 'unreachable so
    # far' -- the final False answer is only trusted when nothing was cut.
    order = list(range(len(gens_nz)))
    if functional is not None:
        order.sort(key=lambda k: dot(functional, gens_nz[k][1]), reverse=True)
    memo: dict[Vector, list | None] = {}
    nodes = 0
    cut = False

    import sys

    sys.setrecursionlimit(10000)

    def search(v, depth):
        nonlocal nodes, cut
        if is_zero(v):
            return []
        if v in memo:
            return memo[v]
        nodes += 1
        if nodes > budget.max_nodes or depth > budget.max_coefficient_sum:
            cut = True
            return None
        memo[v] = None
        for k in order:
            gi, g = gens_nz[k]
            w = vsub(v, g)
            if functional is not None and dot(functional, w) < 0:
                continue
            sub = search(w, depth + 1)
            if sub is not None:
                memo[v] = [gi] + sub
                return memo[v]
        return None

    res = search(target, 0)
    if res is not None:
        counts = [0] * len(gens)
        for gi in res:
            counts[gi] += 1
        return SearchResult(True, tuple(counts))
    if cut:
        return SearchResult(None)
    return SearchResult(False)
