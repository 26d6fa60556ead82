"""Brute-force bilevel oracle used to check IXS.

Nothing here touches the IXS code path or the adapters' follower solvers: the
follower side is evaluated by enumerating follower solutions outright.

Two routes:

* ``enumerate`` -- every leader vector with at most ``budget`` ones, follower
  value by enumeration; ties go to the lexicographically smallest sorted
  index tuple.
* ``threshold`` -- used when the leader space exceeds ``cap`` (knapsack and
  clique only).  All follower solutions are listed once; Z* is the smallest
  value v for which some budget-feasible leader vector hits every solution
  worth more than v, each test being a small hitting-set MILP (HiGHS).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from ixs.adapters.bcp import BcpInstance
from ixs.adapters.bkp import BkpInstance
from ixs.adapters.msmp import MsmpInstance


class OracleTooLarge(ValueError):
    pass


def leader_count(n: int, g: int) -> int:
    return sum(math.comb(n, i) for i in range(min(g, n) + 1))


def bkp_solutions(inst: BkpInstance) -> tuple[np.ndarray, np.ndarray]:
    """(masks, profits) of every capacity-feasible item subset."""
    if inst.n > 24:
        raise OracleTooLarge("instance too large for oracle")
    weight = np.zeros(1, dtype=np.int64)
    profit = np.zeros(1, dtype=np.int64)
    for p, a in zip(inst.profits, inst.weights):
        weight = np.concatenate([weight, weight + a])
        profit = np.concatenate([profit, profit + p])
    ok = np.flatnonzero(weight <= inst.capacity)
    return ok.astype(np.uint64), profit[ok]


def bcp_solutions(inst: BcpInstance) -> tuple[list[int], list[int]]:
    """(edge masks, sizes) of every clique of the uninterdicted graph, the
    empty clique included."""
    if inst.n > 24:
        raise OracleTooLarge("instance too large for oracle")
    adj = [0] * inst.n
    edge_id = {}
    for e, (u, v) in enumerate(inst.edges):
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        edge_id[min(u, v), max(u, v)] = e
    masks, sizes = [], []

    def grow(members: list[int], emask: int, cand: int) -> None:
        masks.append(emask)
        sizes.append(len(members))
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= ~(1 << v)
            extra = 0
            for u in members:
                extra |= 1 << edge_id[u, v]
            grow(members + [v], emask | extra, cand & adj[v])

    grow([], 0, (1 << inst.n) - 1)
    return masks, sizes


def _unblocked_max(masks, values, n_leader: int):
    if n_leader <= 63:
        m = np.asarray(masks, dtype=np.uint64)
        z = np.asarray(values, dtype=np.int64)
        return lambda wmask: int(z[(m & np.uint64(wmask)) == 0].max())
    pairs = list(zip(masks, values))
    return lambda wmask: max(z for mk, z in pairs if not mk & wmask)


def _msmp_value(inst: MsmpInstance):
    """Follower optimum under a protection mask, as a covered (node, scenario) count."""
    n, k = inst.n, inst.k
    live = inst.scenarios.live

    def value(wmask: int) -> int:
        free = [j for j in range(n) if not wmask >> j & 1]
        # single-seed influence per scenario by fixed-point propagation
        reach = {}
        for s in free:
            per = []
            for row in live:
                infl = 1 << s
                grew = True
                while grew:
                    grew = False
                    for j in free:
                        src = row[j]
                        if not infl >> j & 1 and src >= 0 and infl >> src & 1:
                            infl |= 1 << j
                            grew = True
                per.append(infl)
            reach[s] = per
        best = 0
        for seeds in itertools.combinations(free, min(k, len(free))):
            total = 0
            for r in range(len(live)):
                m = 0
                for s in seeds:
                    m |= reach[s][r]
                total += m.bit_count()
            best = max(best, total)
        return best

    return value


def _family(adapter):
    inst = adapter.inst
    if isinstance(inst, BkpInstance):
        return inst, inst.n, inst.budget, Fraction(1)
    if isinstance(inst, BcpInstance):
        return inst, inst.m, inst.budget, Fraction(1)
    if isinstance(inst, MsmpInstance):
        return inst, inst.n, inst.h, Fraction(1, inst.R)
    raise TypeError(f"no oracle for {type(inst).__name__}")


def _solution_table(inst):
    if isinstance(inst, BkpInstance):
        return bkp_solutions(inst)
    if isinstance(inst, BcpInstance):
        return bcp_solutions(inst)
    return None


def _hitting_witness(rows: list[int], n_leader: int, budget: int):
    if not rows:
        return frozenset()
    if any(r == 0 for r in rows):
        return None
    rows = sorted(set(rows))
    A = np.zeros((len(rows) + 1, n_leader))
    for t, r in enumerate(rows):
        for i in range(n_leader):
            if r >> i & 1:
                A[t, i] = 1.0
    A[-1, :] = 1.0
    lb = np.r_[np.ones(len(rows)), 0.0]
    ub = np.r_[np.full(len(rows), np.inf), float(budget)]
    res = milp(
        c=np.ones(n_leader),
        constraints=LinearConstraint(A, lb, ub),
        integrality=np.ones(n_leader),
        bounds=Bounds(0, 1),
    )
    if res.status == 2:
        return None
    if res.status != 0:
        raise RuntimeError(f"MILP solver failed: {res.message}")
    return frozenset(int(i) for i in np.flatnonzero(res.x > 0.5))


def brute_force_bilevel(adapter, cap: int = 200_000) -> tuple[frozenset[int], Fraction]:
    """Exact (w*, z*) of the min-max problem behind ``adapter``."""
    inst, n_leader, budget, scale = _family(adapter)
    if leader_count(n_leader, budget) <= cap:
        if isinstance(inst, MsmpInstance):
            value = _msmp_value(inst)
        else:
            masks, values = _solution_table(inst)
            value = _unblocked_max(masks, values, n_leader)
        best = None
        for size in range(min(budget, n_leader) + 1):
            for w in itertools.combinations(range(n_leader), size):
                z = value(sum(1 << i for i in w))
                if best is None or (z, w) < best:
                    best = (z, w)
        return frozenset(best[1]), best[0] * scale

    table = _solution_table(inst)
    if table is None:
        raise OracleTooLarge("instance too large for oracle")
    masks = [int(m) for m in table[0]]
    values = [int(z) for z in table[1]]
    levels = sorted(set(values))
    lo, hi = 0, len(levels) - 1
    witness = frozenset()
    while lo < hi:
        mid = (lo + hi) // 2
        rows = [m for m, z in zip(masks, values) if z > levels[mid]]
        found = _hitting_witness(rows, n_leader, budget)
        if found is None:
            lo = mid + 1
        else:
            hi, witness = mid, found
    if lo == len(levels) - 1:
        witness = frozenset()
    return witness, levels[lo] * scale
