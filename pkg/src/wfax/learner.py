"""Outer extraction loop: close the observation table, synthesize a
hypothesis WFA, ask an equivalence query, then either incorporate the
counterexample or decay the rank tolerance when the same counterexample
comes back twice in a row (the tolerance was too coarse to absorb it).
"""

import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, TextIO

from . import eq_search, obs_table
from .eq_search import EqResult, SearchParams
from .oracles import CachedOracle, Oracle, cached
from .wfa import Wfa, Word


@dataclass
class ExtractionConfig:
    """All extraction tunables.  eq_engine picks the equivalence-query
    implementation: "regression" (concentration threshold M) or "bfs"
    (per-round word budget bfs_budget)."""

    e: float = 0.05
    M: int = 5
    L: int = 20
    tau0: float = 1e-2
    decay: float = 0.5
    eq_engine: str = "regression"
    bfs_budget: int = 500
    max_eq_rounds: int = 50
    max_pops: int = 100_000
    length_scale: float = 1.0
    ridge: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.e <= 0:
            raise ValueError("e must be positive")
        if self.tau0 <= 0:
            raise ValueError("tau0 must be positive")
        if not (0.0 < self.decay < 1.0):
            raise ValueError("decay rate must be in (0, 1)")
        if self.eq_engine not in ("regression", "bfs"):
            raise ValueError("eq_engine must be 'regression' or 'bfs'")
        if self.max_eq_rounds < 1:
            raise ValueError("max_eq_rounds must be >= 1")


# An equivalence-query hook: (oracle, hypothesis, round index) -> EqResult.
EqFn = Callable[[Oracle, Wfa, int], EqResult]


@dataclass
class ExtractionReport:
    """Result of an extraction run plus enough state to resume it."""

    wfa: Wfa
    rounds: int
    counterexamples: List[Word]
    tau_trajectory: List[float]
    stats: dict
    timings: dict
    stopped: str  # "equivalent:<reason>" | "max-rounds"

    _oracle: CachedOracle = field(repr=False, default=None)
    _table: obs_table.ObservationTable = field(repr=False, default=None)
    _config: ExtractionConfig = field(repr=False, default=None)
    _tau: float = field(repr=False, default=0.0)
    _prev_ce: Optional[Word] = field(repr=False, default=None)
    _bfs_index: int = field(repr=False, default=0)
    _eq_fn: Optional[EqFn] = field(repr=False, default=None)
    _trace: Optional[TextIO] = field(repr=False, default=None)

    @property
    def finished(self) -> bool:
        return self.stopped.startswith("equivalent")

    def to_dict(self) -> dict:
        from .wfa import to_dict as wfa_to_dict
        return {
            "wfa": wfa_to_dict(self.wfa),
            "rounds": self.rounds,
            "counterexamples": [list(w) for w in self.counterexamples],
            "tau_trajectory": self.tau_trajectory,
            "stats": self.stats,
            "timings": self.timings,
            "stopped": self.stopped,
        }


def _close_table(table: obs_table.ObservationTable, tau: float) -> int:
    """Promote closedness defects until none remain; returns promotions."""
    promotions = 0
    while True:
        defect = obs_table.closedness_defect(table, tau)
        if defect is None:
            return promotions
        obs_table.promote(table, defect)
        promotions += 1


def _run_rounds(report: ExtractionReport, budget: int) -> ExtractionReport:
    oracle = report._oracle
    table = report._table
    cfg = report._config
    timings = report.timings
    wfa = report.wfa

    rounds_left = budget
    while rounds_left > 0:
        rounds_left -= 1
        report.rounds += 1
        report.tau_trajectory.append(report._tau)

        t0 = time.perf_counter()
        _close_table(table, report._tau)
        t1 = time.perf_counter()
        wfa = obs_table.synthesize(table, report._tau)
        t2 = time.perf_counter()

        if report._eq_fn is not None:
            result = report._eq_fn(oracle, wfa, report.rounds)
        elif cfg.eq_engine == "bfs":
            result, index = eq_search.bfs_eq(
                oracle, wfa, cfg.e, cfg.bfs_budget, prev_index=report._bfs_index)
            if result.is_counterexample:
                report._bfs_index = index
        else:
            params = SearchParams(e=cfg.e, M=cfg.M, L=cfg.L, max_pops=cfg.max_pops,
                                  length_scale=cfg.length_scale, ridge=cfg.ridge)
            result = eq_search.regression_eq(oracle, wfa, params, trace=report._trace)
        t3 = time.perf_counter()

        timings["closing"] = timings.get("closing", 0.0) + (t1 - t0)
        timings["synthesis"] = timings.get("synthesis", 0.0) + (t2 - t1)
        timings["equivalence"] = timings.get("equivalence", 0.0) + (t3 - t2)

        if not result.is_counterexample:
            report.stopped = f"equivalent:{result.reason}"
            break
        ce = result.word
        report.counterexamples.append(ce)
        if ce == report._prev_ce:
            # the previous incorporation was absorbed by the tolerance;
            # sharpen it and re-synthesize from the same table next round
            report._tau *= cfg.decay
        else:
            obs_table.incorporate_counterexample(table, ce)
            timings["growth"] = timings.get("growth", 0.0) + (time.perf_counter() - t3)
        report._prev_ce = ce
    else:
        report.stopped = "max-rounds"

    report.wfa = wfa
    report.stats = {
        "membership_queries": oracle.stats.membership_queries,
        "distinct_words": oracle.stats.distinct_words,
        "config_queries": oracle.stats.config_queries,
        "access_words": len(table.access),
        "test_words": len(table.tests),
    }
    return report


def extract(oracle: Oracle, cfg: ExtractionConfig,
            eq_fn: Optional[EqFn] = None,
            trace: Optional[TextIO] = None) -> ExtractionReport:
    """Run the full extraction loop against a black-box oracle.

    Budget exhaustion (rounds or search pops) is a normal outcome recorded
    in the report, not an error.  Runs are deterministic for a fixed
    (oracle, cfg) pair.
    """
    wrapped = oracle if isinstance(oracle, CachedOracle) else cached(oracle)
    table = obs_table.new_table(wrapped)
    report = ExtractionReport(
        wfa=None, rounds=0, counterexamples=[], tau_trajectory=[],
        stats={}, timings={}, stopped="max-rounds",
        _oracle=wrapped, _table=table, _config=cfg, _tau=cfg.tau0,
        _prev_ce=None, _bfs_index=0, _eq_fn=eq_fn, _trace=trace,
    )
    return _run_rounds(report, cfg.max_eq_rounds)


def resume(report: ExtractionReport, more_rounds: int,
           oracle: Optional[Oracle] = None) -> ExtractionReport:
    """Continue a budget-exhausted run for more rounds.

    A finished run is returned unchanged.  Passing a replacement oracle
    that disagrees on the alphabet is rejected.
    """
    if more_rounds < 0:
        raise ValueError("more_rounds must be nonnegative")
    if oracle is not None:
        if tuple(oracle.alphabet.symbols) != tuple(report._oracle.alphabet.symbols):
            raise ValueError("oracle alphabet changed since the original run")
        wrapped = oracle if isinstance(oracle, CachedOracle) else cached(oracle)
        report._oracle = wrapped
        report._table.oracle = wrapped
    if report.finished or more_rounds == 0:
        return report
    return _run_rounds(report, more_rounds)
