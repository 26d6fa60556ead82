"""Misinformation spread minimisation on a live-arc Linear Threshold model.

The leader protects up to ``h`` nodes; the follower then seeds up to ``k``
unprotected nodes to maximise the expected number of influenced nodes over a
sampled scenario set.  In each scenario every node keeps at most one live
incoming arc, and a node is influenced when a seed reaches it along live arcs
through unprotected nodes only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from ixs.core import FollowerSample, ProblemAdapter
from ixs.rng import SplitMix64, derive_seed

NETWORK_STREAM = 1
SCENARIO_STREAM = 2


@dataclass(frozen=True)
class SocialNetwork:
    n: int
    arcs: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        seen = set()
        for i, j, w in self.arcs:
            if not (0 <= i < self.n and 0 <= j < self.n) or i == j:
                raise ValueError(f"bad arc ({i}, {j})")
            if (i, j) in seen:
                raise ValueError(f"duplicate arc ({i}, {j})")
            seen.add((i, j))
            if not 0 < w <= 1:
                raise ValueError(f"arc weight {w} outside (0, 1]")
        for j, total in enumerate(self.in_weight):
            if total > 1 + 1e-9:
                raise ValueError(f"incoming weight of node {j} is {total} > 1")

    @cached_property
    def in_arcs(self) -> tuple[tuple[int, ...], ...]:
        """Arc indices entering each node, in arc order."""
        lists: list[list[int]] = [[] for _ in range(self.n)]
        for a, (_, j, _) in enumerate(self.arcs):
            lists[j].append(a)
        return tuple(tuple(x) for x in lists)

    @cached_property
    def in_weight(self) -> tuple[float, ...]:
        return tuple(math.fsum(self.arcs[a][2] for a in arcs) for arcs in self.in_arcs)


@dataclass(frozen=True)
class ScenarioSet:
    """``live[r][j]`` is the source of node j's live in-arc in scenario r, or -1."""

    live: tuple[tuple[int, ...], ...]

    @property
    def R(self) -> int:
        return len(self.live)


@dataclass(frozen=True)
class MsmpInstance:
    network: SocialNetwork
    scenarios: ScenarioSet
    h: int
    k: int
    seed: int

    def __post_init__(self):
        if not (0 <= self.h <= self.network.n and 0 <= self.k <= self.network.n):
            raise ValueError("h and k must lie in [0, n]")
        if self.scenarios.R < 1:
            raise ValueError("at least one scenario is required")

    @property
    def n(self) -> int:
        return self.network.n

    @property
    def R(self) -> int:
        return self.scenarios.R


def build_msmp(network: SocialNetwork, h: int, k: int, R: int, seed: int) -> MsmpInstance:
    return MsmpInstance(network, sample_scenarios_lhs(network, R, seed), h, k, seed)


def gen_watts_strogatz(n: int, K: int, beta: float, seed: int) -> SocialNetwork:
    """Small-world network; each undirected edge becomes two opposing arcs.

    Ring lattice with K/2 neighbours on each side, then every lattice edge
    (i, i+j) is rewired with probability ``beta`` to a uniformly chosen new
    endpoint.  Arc weights are uniform on (0, 1) and divided by the incoming
    total of their head node.
    """
    if K % 2 or not 0 <= K < n:
        raise ValueError("K must be even and 0 <= K < n")
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    rng = SplitMix64(derive_seed(seed, NETWORK_STREAM))
    nbrs = [set() for _ in range(n)]
    for i in range(n):
        for j in range(1, K // 2 + 1):
            v = (i + j) % n
            nbrs[i].add(v)
            nbrs[v].add(i)
    for j in range(1, K // 2 + 1):
        for i in range(n):
            v = (i + j) % n
            if v not in nbrs[i] or rng.random() >= beta or len(nbrs[i]) >= n - 1:
                continue
            new = rng.randbelow(n)
            while new == i or new in nbrs[i]:
                new = rng.randbelow(n)
            nbrs[i].discard(v)
            nbrs[v].discard(i)
            nbrs[i].add(new)
            nbrs[new].add(i)
    pairs = sorted((u, v) for u in range(n) for v in nbrs[u] if u < v)
    heads = []
    for u, v in pairs:
        heads += [(u, v), (v, u)]
    raw = []
    for _ in heads:
        x = rng.random()
        while x == 0.0:
            x = rng.random()
        raw.append(x)
    totals = [0.0] * n
    for (_, j), x in zip(heads, raw):
        totals[j] += x
    weights = [x / totals[j] for (_, j), x in zip(heads, raw)]
    by_head: dict[int, list[int]] = {}
    for a, (_, j) in enumerate(heads):
        by_head.setdefault(j, []).append(a)
    for arcs in by_head.values():
        # rounding can push the normalised sum a hair above one
        while math.fsum(weights[a] for a in arcs) > 1.0:
            top = max(arcs, key=lambda a: weights[a])
            weights[top] = math.nextafter(weights[top], 0.0)
    return SocialNetwork(n, tuple((i, j, w) for (i, j), w in zip(heads, weights)))


def sample_scenarios_lhs(net: SocialNetwork, R: int, seed: int) -> ScenarioSet:
    """Latin-hypercube live-arc scenarios.

    For every node, [0, 1) is split into consecutive intervals of length w_ij
    for its in-arcs (arc order) followed by a no-arc remainder.  The node gets
    one draw per stratum [s/R, (s+1)/R); strata are assigned to scenarios by a
    random permutation drawn independently per node.
    """
    if R < 1:
        raise ValueError("R must be at least 1")
    rng = SplitMix64(derive_seed(seed, SCENARIO_STREAM))
    live = [[-1] * net.n for _ in range(R)]
    for j in range(net.n):
        strata = list(range(R))
        rng.shuffle(strata)
        bounds = []
        acc = 0.0
        for a in net.in_arcs[j]:
            acc += net.arcs[a][2]
            bounds.append((acc, net.arcs[a][0]))
        for r in range(R):
            u = (strata[r] + rng.random()) / R
            for upper, src in bounds:
                if u < upper:
                    live[r][j] = src
                    break
    return ScenarioSet(tuple(tuple(row) for row in live))


def _reach_masks(inst: MsmpInstance, w) -> list[list[int]]:
    """reach[r][j]: bitmask of nodes reached from j in scenario r avoiding ``w``."""
    w = frozenset(w)
    out = []
    for row in inst.scenarios.live:
        children = [[] for _ in range(inst.n)]
        for j, src in enumerate(row):
            if src >= 0 and src not in w and j not in w:
                children[src].append(j)
        masks = []
        for j in range(inst.n):
            if j in w:
                masks.append(0)
                continue
            seen = 1 << j
            stack = [j]
            while stack:
                v = stack.pop()
                for c in children[v]:
                    if not seen >> c & 1:
                        seen |= 1 << c
                        stack.append(c)
            masks.append(seen)
        out.append(masks)
    return out


def _members(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def reach_sets(inst: MsmpInstance, w) -> list[list[frozenset[int]]]:
    """Nodes reachable from each node in each scenario through unprotected
    nodes only; protected nodes reach nothing."""
    return [[_members(m) for m in row] for row in _reach_masks(inst, w)]


def spread_masks(inst: MsmpInstance, reach: list[list[int]], seeds) -> list[int]:
    out = []
    for row in reach:
        m = 0
        for s in seeds:
            m |= row[s]
        out.append(m)
    return out


def best_seed_set(cover: list[int], k: int) -> tuple[int, tuple[int, ...]]:
    """Weighted max coverage by branch-and-bound over seed combinations.

    ``cover[c]`` is the packed coverage mask of candidate c.  Chooses
    min(k, len(cover)) candidates maximising the covered count; the bound is
    current coverage plus the largest remaining marginal gains.  Combinations
    are visited in lexicographic order and only strict improvements are kept,
    so the lexicographically smallest optimum is returned.
    """
    m = min(k, len(cover))
    best_val = -1
    best_set: tuple[int, ...] = ()

    def dfs(start: int, chosen: list[int], mask: int, val: int) -> None:
        nonlocal best_val, best_set
        need = m - len(chosen)
        if need == 0:
            if val > best_val:
                best_val, best_set = val, tuple(chosen)
            return
        if len(cover) - start < need:
            return
        gains = sorted(((cover[c] & ~mask).bit_count() for c in range(start, len(cover))), reverse=True)
        if val + sum(gains[:need]) <= best_val:
            return
        for c in range(start, len(cover) - need + 1):
            chosen.append(c)
            new = mask | cover[c]
            dfs(c + 1, chosen, new, new.bit_count())
            chosen.pop()

    dfs(0, [], 0, 0)
    return best_val, best_set


def msmp_follower(inst: MsmpInstance, w) -> FollowerSample:
    w = frozenset(w)
    reach = _reach_masks(inst, w)
    cands = [j for j in range(inst.n) if j not in w]
    n = inst.n
    cover = []
    for j in cands:
        packed = 0
        for r, row in enumerate(reach):
            packed |= row[j] << (n * r)
        cover.append(packed)
    total, picked = best_seed_set(cover, inst.k)
    seeds = tuple(cands[c] for c in picked)
    influenced = tuple(_members(m) for m in spread_masks(inst, reach, seeds))
    sample = FollowerSample(
        z=Fraction(max(total, 0), inst.R),
        blockers=frozenset(),
        origin=w,
        payload=(seeds, influenced),
    )
    return FollowerSample(sample.z, msmp_blockers(sample), w, sample.payload)


def msmp_blockers(sample) -> frozenset[int]:
    """Nodes influenced in at least one scenario; protecting any of them
    makes the sampled follower solution infeasible."""
    payload = sample.payload if isinstance(sample, FollowerSample) else sample
    _, influenced = payload
    out: frozenset[int] = frozenset()
    for nodes in influenced:
        out |= nodes
    return out


def msmp_replay(inst: MsmpInstance, payload, w):
    """Objective of the sampled solution ``payload`` under protection ``w``,
    or None when it is infeasible there.

    Feasible means no seed is protected and every influenced node is still
    reached from some seed through unprotected nodes.
    """
    w = frozenset(w)
    seeds, influenced = payload
    if not w.isdisjoint(seeds):
        return None
    reach = _reach_masks(inst, w)
    for r, row in enumerate(reach):
        allowed = 0
        for s in seeds:
            allowed |= row[s]
        if any(not allowed >> i & 1 for i in influenced[r]):
            return None
    return Fraction(sum(len(x) for x in influenced), inst.R)


class MsmpAdapter(ProblemAdapter):
    family = "msmp"

    def __init__(self, inst: MsmpInstance):
        self.inst = inst
        self.n_leader = inst.n
        self.budget = inst.h
        self.z0 = Fraction(0)

    def follower(self, w) -> FollowerSample:
        return msmp_follower(self.inst, w)


def format_msmp(inst: MsmpInstance) -> str:
    net = inst.network
    lines = [f"{net.n} {len(net.arcs)} {inst.h} {inst.k} {inst.R} {inst.seed}"]
    lines += [f"{i} {j} {w!r}" for i, j, w in net.arcs]
    return "\n".join(lines) + "\n"


def parse_msmp(text: str) -> MsmpInstance:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    n, m, h, k, R, seed = map(int, rows[0])
    if len(rows) - 1 != m:
        raise ValueError(f"header announces {m} arcs, found {len(rows) - 1}")
    arcs = tuple((int(i), int(j), float(w)) for i, j, w in rows[1:])
    return build_msmp(SocialNetwork(n, arcs), h, k, R, seed)


def format_scenarios(inst: MsmpInstance) -> str:
    lines = []
    for r, row in enumerate(inst.scenarios.live):
        lines.append(f"# scenario {r}")
        lines += [f"{j} {src}" for j, src in enumerate(row)]
    return "\n".join(lines) + "\n"
