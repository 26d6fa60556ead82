"""Bilevel maximum-clique interdiction: the leader deletes up to ``budget``
edges, the follower finds a maximum clique in what remains."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ixs.core import FollowerSample, ProblemAdapter
from ixs.rng import SplitMix64


@dataclass(frozen=True)
class BcpInstance:
    n: int
    edges: tuple[tuple[int, int], ...]
    budget: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) leaves the vertex range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        if not 0 <= self.budget <= len(self.edges):
            raise ValueError(f"budget {self.budget} outside [0, {len(self.edges)}]")

    @property
    def m(self) -> int:
        return len(self.edges)


def default_budget(m: int) -> int:
    return math.ceil(m / 4)


def adjacency(n: int, edges, removed=frozenset()) -> list[int]:
    adj = [0] * n
    for e, (u, v) in enumerate(edges):
        if e not in removed:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return adj


def _color_bound(adj: list[int], cand: int) -> int:
    """Number of colours a greedy sequential colouring needs for ``cand``."""
    colors = 0
    rest = cand
    while rest:
        colors += 1
        avail = rest
        while avail:
            v = (avail & -avail).bit_length() - 1
            rest &= ~(1 << v)
            avail &= ~(1 << v) & ~adj[v]
    return colors


def max_clique(adj: list[int]) -> tuple[int, ...]:
    """Lexicographically smallest maximum clique (as a sorted vertex tuple).

    Depth-first search extends cliques in increasing vertex order, so cliques
    are met in lexicographic order; a subtree is cut when its colouring bound
    cannot beat the best size so far.
    """
    n = len(adj)
    best: list[tuple[int, ...]] = [()]

    def extend(clique: list[int], cand: int) -> None:
        if len(clique) > len(best[0]):
            best[0] = tuple(clique)
        if not cand or len(clique) + _color_bound(adj, cand) <= len(best[0]):
            return
        rest = cand
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= ~(1 << v)
            # only later vertices may join, which keeps each clique visited once
            later = adj[v] & rest
            clique.append(v)
            extend(clique, later)
            clique.pop()
            if len(clique) + _color_bound(adj, rest) <= len(best[0]):
                return

    extend([], (1 << n) - 1)
    return best[0]


def bcp_blockers(clique, inst: BcpInstance) -> frozenset[int]:
    members = set(clique)
    return frozenset(e for e, (u, v) in enumerate(inst.edges) if u in members and v in members)


def bcp_follower(inst: BcpInstance, w) -> FollowerSample:
    w = frozenset(w)
    clique = max_clique(adjacency(inst.n, inst.edges, w))
    return FollowerSample(
        z=Fraction(len(clique)), blockers=bcp_blockers(clique, inst), origin=w, payload=clique
    )


class BcpAdapter(ProblemAdapter):
    family = "bcp"

    def __init__(self, inst: BcpInstance):
        self.inst = inst
        self.n_leader = inst.m
        self.budget = inst.budget
        self.z0 = Fraction(0)

    def follower(self, w) -> FollowerSample:
        return bcp_follower(self.inst, w)


def gen_bcp(n: int, density: float, seed: int, budget: int | None = None) -> BcpInstance:
    """Graph with round(density * n(n-1)/2) edges drawn uniformly; edges are
    listed in lexicographic order."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    m = round(density * len(pairs))
    rng = SplitMix64(seed)
    edges = tuple(sorted(pairs[i] for i in rng.sample(len(pairs), m)))
    return BcpInstance(n, edges, default_budget(m) if budget is None else budget)


def format_bcp(inst: BcpInstance) -> str:
    lines = [f"{inst.n} {inst.m} {inst.budget}"]
    lines += [f"{u} {v}" for u, v in inst.edges]
    return "\n".join(lines) + "\n"


def parse_bcp(text: str) -> BcpInstance:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    n, m, g = map(int, rows[0])
    if len(rows) - 1 != m:
        raise ValueError(f"header announces {m} edges, found {len(rows) - 1}")
    edges = tuple((int(u), int(v)) for u, v in rows[1:])
    return BcpInstance(n, edges, g if g > 0 else default_budget(m))
