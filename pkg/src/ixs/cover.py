"""Lower-bound step of IXS as a budgeted hitting-set problem.

Every sampled follower solution tau contributes its blocker set C_tau.  The
lower bound is z0 when some leader vector with at most ``budget`` ones hits
every blocker set, and the current upper bound otherwise.  ``greedy_cover`` is
the fast path; ``exact_lb`` settles the question by branch-and-bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np


class LBInfeasible(RuntimeError):
    """The mandatory blocker sets cannot be hit within the leader budget."""


@dataclass(frozen=True)
class CoverProblem:
    """Blocker-set family of a sample pool.

    ``sets[t]`` is the blocker set of the t-th non-trivial sample and
    ``labels[t]`` its objective value.  ``mandatory`` holds the family indices
    whose value exceeds ``zbar``; those must be hit by any leader vector.
    """

    ground_n: int
    sets: tuple[frozenset[int], ...]
    labels: tuple[Fraction, ...]
    budget: int
    mandatory: frozenset[int]
    z0: Fraction
    zbar: Fraction

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        if len(self.sets) != len(self.labels):
            raise ValueError("one label per set required")
        for s in self.sets:
            if any(not 0 <= i < self.ground_n for i in s):
                raise ValueError(f"blocker set {sorted(s)} leaves the ground set")
        for t in self.mandatory:
            if not 0 <= t < len(self.sets):
                raise ValueError(f"mandatory index {t} is not a family index")
            if not self.sets[t]:
                raise ValueError(f"mandatory set {t} is empty and can never be hit")
        for t, z in enumerate(self.labels):
            if t not in self.mandatory and z > self.zbar:
                raise ValueError(f"set {t} has label {z} > zbar but is not mandatory")


@dataclass(frozen=True)
class CoverSolution:
    chosen: frozenset[int]
    covered: frozenset[int]
    # None marks a greedy run that left some set uncovered.
    objective: Optional[Fraction]
    exact: bool

    @property
    def complete(self) -> bool:
        return self.objective is not None


def covered_by(sets: Sequence[frozenset[int]], chosen) -> frozenset[int]:
    chosen = set(chosen)
    return frozenset(t for t, s in enumerate(sets) if not chosen.isdisjoint(s))


def greedy_cover(p: CoverProblem) -> CoverSolution:
    """Greedy maximum coverage: repeatedly take the index hitting the most
    uncovered sets (lowest index on ties) until everything is covered, the
    budget runs out, or no index makes progress."""
    uncovered = set(range(len(p.sets)))
    chosen: list[int] = []
    while uncovered and len(chosen) < p.budget:
        counts = [0] * p.ground_n
        for t in uncovered:
            for i in p.sets[t]:
                counts[i] += 1
        best = max(range(p.ground_n), key=lambda i: (counts[i], -i), default=None)
        if best is None or counts[best] == 0:
            break
        chosen.append(best)
        uncovered = {t for t in uncovered if best not in p.sets[t]}
    covered = frozenset(range(len(p.sets))) - uncovered
    return CoverSolution(
        chosen=frozenset(chosen),
        covered=covered,
        objective=p.z0 if not uncovered else None,
        exact=False,
    )


def _minimal_masks(sets) -> list[int]:
    """Distinct bitmasks with supersets removed; hitting a subset hits its supersets."""
    masks = sorted({sum(1 << i for i in s) for s in sets}, key=lambda m: (m.bit_count(), m))
    nbits = max(masks).bit_length() if masks else 0
    if 0 < nbits <= 20:
        # subset-sum transform: below[x] says some mask is a subset of x
        below = np.zeros(1 << nbits, dtype=bool)
        arr = np.array(masks, dtype=np.int64)
        below[arr] = True
        for i in range(nbits):
            view = below.reshape(-1, 2, 1 << i)
            view[:, 1, :] |= view[:, 0, :]
        strict = np.zeros(len(masks), dtype=bool)
        for i in range(nbits):
            strict |= ((arr >> i) & 1).astype(bool) & below[arr & ~(1 << i)]
        return [m for m, s in zip(masks, strict) if not s]
    kept: list[int] = []
    for m in masks:
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


def _packing_bound(masks: list[int]) -> int:
    """Size of a greedy family of pairwise disjoint sets; each needs its own hitter."""
    used = 0
    count = 0
    for m in sorted(masks, key=lambda m: (m.bit_count(), m)):
        if not m & used:
            used |= m
            count += 1
    return count


def _hit(masks: list[int], budget: int, forbidden: int) -> Optional[int]:
    if not masks:
        return 0
    if budget == 0:
        return None
    allowed = [m & ~forbidden for m in masks]
    pivot = min(allowed, key=lambda m: (m.bit_count(), m))
    if not pivot:
        return None
    if _packing_bound(allowed) > budget:
        return None
    rest = pivot
    while rest:
        low = rest & -rest
        rest ^= low
        found = _hit([m for m in masks if not m & low], budget - 1, forbidden)
        if found is not None:
            return found | low
        # later branches may not reuse an index already ruled out here
        forbidden |= low
    return None


def hitting_set(sets, budget: int) -> Optional[frozenset[int]]:
    """Some set of at most ``budget`` indices meeting every member of ``sets``,
    or None when none exists.  Deterministic for a given input."""
    masks = _minimal_masks(sets)
    if any(m == 0 for m in masks):
        return None
    found = _hit(masks, budget, 0)
    if found is None:
        return None
    return frozenset(i for i in range(found.bit_length()) if found >> i & 1)


def exact_lb(p: CoverProblem) -> CoverSolution:
    """Exact lower bound: z0 if every set can be hit within budget, else zbar
    with a witness hitting all mandatory sets."""
    witness = hitting_set(p.sets, p.budget)
    objective = p.z0
    if witness is None:
        witness = hitting_set([p.sets[t] for t in sorted(p.mandatory)], p.budget)
        if witness is None:
            raise LBInfeasible(
                f"LB'' infeasible: {len(p.mandatory)} mandatory blocker sets "
                f"cannot be hit with budget {p.budget}"
            )
        objective = p.zbar
    return CoverSolution(
        chosen=witness,
        covered=covered_by(p.sets, witness),
        objective=objective,
        exact=True,
    )


def verify_cover(p: CoverProblem, sol: CoverSolution) -> None:
    """Raise ValueError unless ``sol`` is a consistent answer for ``p``."""
    if len(sol.chosen) > p.budget:
        raise ValueError(f"{len(sol.chosen)} indices chosen, budget is {p.budget}")
    if any(not 0 <= i < p.ground_n for i in sol.chosen):
        raise ValueError("chosen index outside the ground set")
    if sol.covered != covered_by(p.sets, sol.chosen):
        raise ValueError("covered set does not match the chosen indices")
    if sol.objective is None:
        if sol.exact:
            raise ValueError("exact solution without an objective")
        return
    if not p.mandatory <= sol.covered:
        raise ValueError("a mandatory blocker set is left unhit")
    if sol.objective not in (p.z0, p.zbar):
        raise ValueError(f"objective {sol.objective} is neither z0 nor zbar")
    if sol.objective == p.z0 and p.z0 != p.zbar and len(sol.covered) != len(p.sets):
        raise ValueError("objective z0 claimed without covering every set")
