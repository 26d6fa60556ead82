"""Bilevel 0-1 knapsack interdiction: the leader removes up to ``budget`` items,
the follower packs the best knapsack from what is left."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ixs.core import FollowerSample, ProblemAdapter
from ixs.rng import SplitMix64


@dataclass(frozen=True)
class BkpInstance:
    profits: tuple[int, ...]
    weights: tuple[int, ...]
    capacity: int
    budget: int

    def __post_init__(self):
        if len(self.profits) != len(self.weights):
            raise ValueError("profits and weights differ in length")
        if any(p <= 0 for p in self.profits) or any(a <= 0 for a in self.weights):
            raise ValueError("profits and weights must be positive integers")
        if self.capacity < 0:
            raise ValueError("capacity must be non-negative")
        if not 0 <= self.budget <= self.n:
            raise ValueError(f"budget {self.budget} outside [0, {self.n}]")

    @property
    def n(self) -> int:
        return len(self.profits)


def bkp_blockers(items) -> frozenset[int]:
    return frozenset(items)


def solve_knapsack(profits, weights, capacity, available) -> tuple[int, tuple[int, ...]]:
    """0-1 knapsack over ``available`` item indices by DP on capacity.

    Among optimal packings returns the lexicographically smallest sorted
    index tuple.
    """
    items = sorted(available)
    # best[k][c]: optimum over items[k:] with capacity c
    best = [[0] * (capacity + 1) for _ in range(len(items) + 1)]
    for k in range(len(items) - 1, -1, -1):
        p, a = profits[items[k]], weights[items[k]]
        nxt, row = best[k + 1], best[k]
        for c in range(capacity + 1):
            row[c] = nxt[c]
            if a <= c and nxt[c - a] + p > row[c]:
                row[c] = nxt[c - a] + p
    chosen = []
    c = capacity
    for k, i in enumerate(items):
        a = weights[i]
        # taking the lowest possible index first gives the smallest tuple
        if a <= c and best[k + 1][c - a] + profits[i] == best[k][c]:
            chosen.append(i)
            c -= a
    return best[0][capacity], tuple(chosen)


def bkp_follower(inst: BkpInstance, w) -> FollowerSample:
    w = frozenset(w)
    available = [i for i in range(inst.n) if i not in w]
    z, items = solve_knapsack(inst.profits, inst.weights, inst.capacity, available)
    return FollowerSample(z=Fraction(z), blockers=bkp_blockers(items), origin=w, payload=items)


class BkpAdapter(ProblemAdapter):
    family = "bkp"

    def __init__(self, inst: BkpInstance):
        self.inst = inst
        self.n_leader = inst.n
        self.budget = inst.budget
        self.z0 = Fraction(0)

    def follower(self, w) -> FollowerSample:
        return bkp_follower(self.inst, w)


def gen_bkp(n: int, budget: int, seed: int, max_value: int = 30) -> BkpInstance:
    """Random integer instance; capacity is half the total weight."""
    rng = SplitMix64(seed)
    profits = tuple(rng.randint(1, max_value) for _ in range(n))
    weights = tuple(rng.randint(1, max_value) for _ in range(n))
    return BkpInstance(profits, weights, sum(weights) // 2, budget)


def format_bkp(inst: BkpInstance) -> str:
    return (
        f"{inst.n} {inst.budget} {inst.capacity}\n"
        + " ".join(map(str, inst.profits)) + "\n"
        + " ".join(map(str, inst.weights)) + "\n"
    )


def parse_bkp(text: str) -> BkpInstance:
    tokens = [int(t) for t in text.split()]
    if len(tokens) < 3:
        raise ValueError("BKP header must be 'n g b'")
    n, g, b = tokens[:3]
    if len(tokens) != 3 + 2 * n:
        raise ValueError(f"expected {2 * n} item values after the header, got {len(tokens) - 3}")
    return BkpInstance(tuple(tokens[3:3 + n]), tuple(tokens[3 + n:]), b, g)
