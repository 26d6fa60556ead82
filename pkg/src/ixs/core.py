"""Improved x-space (IXS) algorithm for binary min-max interdiction.

The leader picks at most ``budget`` indices from ``range(n_leader)``; a leader
vector is represented by its support, a ``frozenset`` of indices.  A problem
family plugs in through :class:`ProblemAdapter`, which supplies the exact
follower best response together with the blocker set of that response.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional

from ixs.cover import CoverProblem, exact_lb, greedy_cover, verify_cover
from ixs.rng import SplitMix64

log = logging.getLogger(__name__)

LeaderVector = frozenset

INIT_STRATEGIES = ("trivial-only", "unit-vectors", "random-rho")


class PoolInvariantError(RuntimeError):
    pass


def leader_vector(indices: Iterable[int], n: int, budget: int) -> frozenset[int]:
    """Validated leader support."""
    w = frozenset(indices)
    if len(w) > budget:
        raise ValueError(f"leader vector {sorted(w)} exceeds budget {budget}")
    if any(not 0 <= i < n for i in w):
        raise ValueError(f"leader vector {sorted(w)} has indices outside [0, {n})")
    return w


def leader_bits(w: Iterable[int], n: int) -> str:
    w = set(w)
    return "".join("1" if i in w else "0" for i in range(n))


def is_blocked(blockers: frozenset[int], w: frozenset[int]) -> bool:
    return not blockers.isdisjoint(w)


@dataclass(frozen=True)
class FollowerSample:
    z: Fraction
    blockers: frozenset[int]
    origin: frozenset[int]
    payload: Any = None
    tau: int = -1


class ProblemAdapter:
    """Per-family contract consumed by :func:`run_ixs`.

    Subclasses set ``family``, ``n_leader``, ``budget`` and ``z0`` and
    implement :meth:`follower`.  The trivial follower solution (value ``z0``,
    empty blocker set) must be feasible for every leader vector.
    """

    family = "abstract"
    n_leader: int
    budget: int
    z0: Fraction = Fraction(0)

    def follower(self, w: frozenset[int]) -> FollowerSample:
        raise NotImplementedError

    def check_leader(self, w) -> frozenset[int]:
        return leader_vector(w, self.n_leader, self.budget)


@dataclass
class SamplePool:
    """Sampled follower solutions indexed by tau, with tau = 0 the trivial one."""

    z0: Fraction
    samples: list[FollowerSample] = field(default_factory=list)
    zbar: Optional[Fraction] = None
    incumbent_w: Optional[frozenset[int]] = None
    incumbent_tau: Optional[int] = None
    jb: set[int] = field(default_factory=set)
    duplicates: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.samples:
            self.samples.append(
                FollowerSample(z=self.z0, blockers=frozenset(), origin=frozenset(), tau=0)
            )

    def __len__(self):
        return len(self.samples)

    def check(self) -> None:
        """Raise PoolInvariantError if any pool invariant is broken."""
        rest = self.samples[1:]
        if not rest:
            return
        zbar = min(s.z for s in rest)
        if self.zbar != zbar:
            raise PoolInvariantError(f"zbar {self.zbar} != min sample value {zbar}")
        if self.z0 > self.zbar:
            raise PoolInvariantError(f"z0 {self.z0} exceeds zbar {self.zbar}")
        jb = {s.tau for s in self.samples if s.z > self.zbar}
        if jb != self.jb:
            raise PoolInvariantError("J^B out of sync with zbar")
        inc = self.samples[self.incumbent_tau]
        if inc.z != self.zbar or inc.origin != self.incumbent_w:
            raise PoolInvariantError("incumbent does not achieve zbar")
        for tau in self.jb:
            if not is_blocked(self.samples[tau].blockers, self.incumbent_w):
                # the incumbent's response would then exceed zbar
                raise PoolInvariantError(f"incumbent leaves mandatory sample {tau} unblocked")


def add_sample(pool: SamplePool, sample: FollowerSample) -> SamplePool:
    """Append ``sample`` with the next tau and reclassify zbar and J^B."""
    tau = len(pool.samples)
    if any(s.payload == sample.payload and s.blockers == sample.blockers for s in pool.samples[1:]):
        pool.duplicates.append(tau)
        log.warning("sample %d duplicates an earlier follower solution", tau)
    sample = FollowerSample(sample.z, sample.blockers, sample.origin, sample.payload, tau)
    pool.samples.append(sample)
    if pool.zbar is None or sample.z < pool.zbar:
        pool.zbar = sample.z
        pool.incumbent_w = sample.origin
        pool.incumbent_tau = tau
        pool.jb = {s.tau for s in pool.samples if s.z > pool.zbar}
    elif sample.z > pool.zbar:
        pool.jb.add(tau)
    return pool


def lb_value_given_w(pool: SamplePool, w) -> Fraction:
    """Best value among pool samples that ``w`` leaves unblocked."""
    w = frozenset(w)
    return max(s.z for s in pool.samples if not is_blocked(s.blockers, w))


@dataclass(frozen=True)
class IxsConfig:
    init_strategy: str = "trivial-only"
    rho: int = 1
    time_limit: float = 3600.0
    rng_seed: int = 0
    # full pool re-validation after every added sample; O(pool) per iteration
    check_invariants: bool = False

    def __post_init__(self):
        if self.init_strategy not in INIT_STRATEGIES:
            raise ValueError(f"unknown init strategy {self.init_strategy!r}")
        if self.rho < 1:
            raise ValueError("rho must be at least 1")
        if not self.time_limit > 0:
            raise ValueError("time_limit must be positive")


def _respond(adapter: ProblemAdapter, w: frozenset[int]) -> FollowerSample:
    sample = adapter.follower(w)
    if sample is None:
        raise RuntimeError(f"follower problem infeasible for leader vector {sorted(w)}")
    return sample


def initial_leaders(adapter: ProblemAdapter, cfg: IxsConfig) -> list[frozenset[int]]:
    leaders = [frozenset()]
    if cfg.init_strategy == "unit-vectors" and adapter.budget >= 1:
        leaders += [frozenset([i]) for i in range(adapter.n_leader)]
    elif cfg.init_strategy == "random-rho":
        rng = SplitMix64(cfg.rng_seed)
        size = min(adapter.budget, adapter.n_leader)
        leaders += [frozenset(rng.sample(adapter.n_leader, size)) for _ in range(cfg.rho)]
    return leaders


def init_pool(adapter: ProblemAdapter, cfg: Optional[IxsConfig] = None) -> SamplePool:
    cfg = cfg or IxsConfig()
    pool = SamplePool(z0=Fraction(adapter.z0))
    for w in initial_leaders(adapter, cfg):
        add_sample(pool, _respond(adapter, adapter.check_leader(w)))
    pool.check()
    return pool


def cover_problem(pool: SamplePool, n_leader: int, budget: int) -> CoverProblem:
    rest = pool.samples[1:]
    return CoverProblem(
        ground_n=n_leader,
        sets=tuple(s.blockers for s in rest),
        labels=tuple(s.z for s in rest),
        budget=budget,
        mandatory=frozenset(tau - 1 for tau in pool.jb),
        z0=pool.z0,
        zbar=pool.zbar,
    )


@dataclass(frozen=True)
class TraceRecord:
    q: int
    lower: Fraction
    upper: Fraction
    zbar: Fraction
    greedy: bool
    pool_size: int
    w: tuple[int, ...]
    duplicate: bool
    lb_time: float
    ub_time: float


@dataclass
class IxsResult:
    w_star: frozenset[int]
    x_star: Any
    z_star: Fraction
    iterations: int
    trace: list[TraceRecord]
    status: str
    l_final: Fraction
    z0: Fraction
    initial_zbar: Fraction
    pool_size: int

    @property
    def greedy_fraction(self) -> float:
        if not self.trace:
            return 0.0
        return sum(r.greedy for r in self.trace) / len(self.trace)


def run_ixs(adapter: ProblemAdapter, cfg: Optional[IxsConfig] = None) -> IxsResult:
    cfg = cfg or IxsConfig()
    start = time.perf_counter()
    pool = init_pool(adapter, cfg)
    z0 = pool.z0
    initial_zbar = pool.zbar
    trace: list[TraceRecord] = []
    lower = z0
    status = "timeout"
    for q in itertools.count(1):
        if time.perf_counter() - start > cfg.time_limit:
            break
        t0 = time.perf_counter()
        problem = cover_problem(pool, adapter.n_leader, adapter.budget)
        sol = greedy_cover(problem)
        greedy = sol.complete
        if not greedy:
            sol = exact_lb(problem)
        verify_cover(problem, sol)
        lower = sol.objective
        if lower not in (z0, pool.zbar):
            raise PoolInvariantError(f"lower bound {lower} is neither z0 nor zbar")
        w = adapter.check_leader(sol.chosen)
        t1 = time.perf_counter()
        response = _respond(adapter, w)
        t2 = time.perf_counter()
        upper = response.z
        n_dup = len(pool.duplicates)
        added = False
        if upper < pool.zbar:
            add_sample(pool, response)
            added = True
        done = lower >= pool.zbar
        if not done and not added:
            add_sample(pool, response)
            added = True
        duplicate = len(pool.duplicates) > n_dup
        trace.append(
            TraceRecord(q, lower, upper, pool.zbar, greedy, len(pool),
                        tuple(sorted(w)), duplicate, t1 - t0, t2 - t1)
        )
        if added and cfg.check_invariants:
            pool.check()
        if done:
            status = "optimal"
            break
        if duplicate:
            raise PoolInvariantError(
                f"iteration {q} resampled an existing follower solution with lower bound below zbar"
            )
    inc = pool.samples[pool.incumbent_tau]
    return IxsResult(
        w_star=pool.incumbent_w,
        x_star=inc.payload,
        z_star=pool.zbar,
        iterations=len(trace),
        trace=trace,
        status=status,
        l_final=lower,
        z0=z0,
        initial_zbar=initial_zbar,
        pool_size=len(pool),
    )


def fmt_value(z: Fraction) -> str:
    z = Fraction(z)
    return str(z.numerator) if z.denominator == 1 else f"{z.numerator}/{z.denominator}"


def format_trace(result: IxsResult) -> str:
    """Deterministic text rendering of an IXS run; wall times are left out."""
    lines = [
        f"# status={result.status} z*={fmt_value(result.z_star)} "
        f"z0={fmt_value(result.z0)} zbar0={fmt_value(result.initial_zbar)}",
        "q lower upper zbar greedy pool w",
    ]
    for r in result.trace:
        w = ",".join(map(str, r.w)) or "-"
        lines.append(
            f"{r.q} {fmt_value(r.lower)} {fmt_value(r.upper)} {fmt_value(r.zbar)} "
            f"{int(r.greedy)} {r.pool_size} {w}" + (" dup" if r.duplicate else "")
        )
    lines.append(f"# w*={','.join(map(str, sorted(result.w_star))) or '-'} iterations={result.iterations}")
    return "\n".join(lines) + "\n"
