"""Independent enumeration oracles shared by the test modules."""

import itertools
from fractions import Fraction

from ixs.cover import CoverProblem
from ixs.rng import SplitMix64


def subsets_upto(n, g):
    for size in range(min(g, n) + 1):
        yield from itertools.combinations(range(n), size)


def enumerate_lb(p: CoverProblem):
    """(feasible, l) over every leader subset of size <= budget."""
    best = None
    for w in subsets_upto(p.ground_n, p.budget):
        w = set(w)
        hit = [not w.isdisjoint(s) for s in p.sets]
        if not all(hit[t] for t in p.mandatory):
            continue
        value = max([p.z0] + [z for z, h in zip(p.labels, hit) if not h])
        best = value if best is None else min(best, value)
    return best is not None, best


def random_cover_problem(rng: SplitMix64, max_ground=16, max_sets=20):
    n = rng.randint(1, max_ground)
    m = rng.randint(0, max_sets)
    sets = []
    for _ in range(m):
        size = rng.randint(1, min(n, 4))
        sets.append(frozenset(rng.sample(n, size)))
    zbar = Fraction(rng.randint(1, 5))
    labels = []
    for _ in range(m):
        labels.append(zbar + rng.randint(1, 3) if rng.random() < 0.4 else zbar)
    mandatory = frozenset(t for t, z in enumerate(labels) if z > zbar)
    return CoverProblem(n, tuple(sets), tuple(labels), rng.randint(0, 4), mandatory,
                        Fraction(0), zbar)
