"""Evaluation and benchmarking: MSE against an oracle on a word list,
exhaustive sup-error up to a length bound, and inference-time comparison
between an oracle and an extracted WFA.
"""

import time
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np

from .oracles import Oracle
from .wfa import Wfa, Word, step, weight


@dataclass
class EvalResult:
    mse: float
    sup_error: float
    n_eval: int
    per_length: Dict[int, dict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mse": self.mse,
            "sup_error": self.sup_error,
            "n_eval": self.n_eval,
            "per_length": {str(k): v for k, v in sorted(self.per_length.items())},
        }


@dataclass
class BenchResult:
    oracle_ns_per_word: float
    wfa_ns_per_word: float
    speedup_ratio: float
    lengths: Dict[str, float]
    oracle_rep_ns: List[float]
    wfa_rep_ns: List[float]

    def to_dict(self) -> dict:
        return {
            "oracle_ns_per_word": self.oracle_ns_per_word,
            "wfa_ns_per_word": self.wfa_ns_per_word,
            "speedup_ratio": self.speedup_ratio,
            "lengths": self.lengths,
            "oracle_rep_ns": self.oracle_rep_ns,
            "wfa_rep_ns": self.wfa_rep_ns,
        }


def mse(oracle: Oracle, wfa: Wfa, words: Sequence[Word]) -> EvalResult:
    """Mean squared output gap over a word list, with a per-length
    breakdown and the worst absolute gap seen."""
    if not len(words):
        raise ValueError("empty evaluation word list")
    sq_sum = 0.0
    sup = 0.0
    buckets: Dict[int, List[float]] = {}
    for word in words:
        gap = weight(wfa, word) - oracle.output(word)
        sq_sum += gap * gap
        sup = max(sup, abs(gap))
        buckets.setdefault(len(word), []).append(gap * gap)
    per_length = {
        length: {"count": len(vals), "mse": float(np.mean(vals))}
        for length, vals in buckets.items()
    }
    return EvalResult(mse=sq_sum / len(words), sup_error=sup,
                      n_eval=len(words), per_length=per_length)


def sup_error_exhaustive(oracle: Oracle, wfa: Wfa, max_len: int,
                         guard: int = 2_000_000) -> float:
    """Max absolute output gap over ALL words of length <= max_len.

    Walks the word tree once, carrying incremental states on both sides.
    Refuses alphabet/length combinations whose word count exceeds `guard`.
    """
    k = len(wfa.alphabet)
    total = sum(k ** i for i in range(max_len + 1))
    if total > guard:
        raise ValueError(f"{total} words of length <= {max_len} over {k} symbols "
                         f"exceeds the guard bound {guard}")
    beta = wfa.beta
    sup = 0.0
    stack = [(0, oracle.start(), wfa.alpha)]
    while stack:
        depth, ostate, acfg = stack.pop()
        gap = abs(float(acfg @ beta) - oracle.read_output(ostate))
        if gap > sup:
            sup = gap
        if depth < max_len:
            for sym in wfa.alphabet.symbols:
                stack.append((depth + 1, oracle.advance(ostate, sym),
                              step(wfa, acfg, sym)))
    return sup


def bench(oracle: Oracle, wfa: Wfa, words: Sequence[Word],
          repetitions: int = 5) -> BenchResult:
    """Wall-clock inference comparison on the same word list.

    One untimed warmup pass per side, then `repetitions` timed passes;
    reports nanoseconds per word (mean over repetitions) and their ratio.
    Pass an uncached oracle, or the timings measure cache lookups.
    """
    if not len(words) or repetitions < 1:
        raise ValueError("need a nonempty word list and repetitions >= 1")
    words = [tuple(w) for w in words]

    for word in words:  # warmup
        oracle.output(word)
        weight(wfa, word)

    oracle_rep = []
    for _ in range(repetitions):
        t0 = time.perf_counter_ns()
        for word in words:
            oracle.output(word)
        oracle_rep.append((time.perf_counter_ns() - t0) / len(words))

    wfa_rep = []
    for _ in range(repetitions):
        t0 = time.perf_counter_ns()
        for word in words:
            weight(wfa, word)
        wfa_rep.append((time.perf_counter_ns() - t0) / len(words))

    oracle_ns = float(np.mean(oracle_rep))
    wfa_ns = float(np.mean(wfa_rep))
    lens = [len(w) for w in words]
    return BenchResult(
        oracle_ns_per_word=oracle_ns,
        wfa_ns_per_word=wfa_ns,
        speedup_ratio=oracle_ns / wfa_ns,
        lengths={"mean": float(np.mean(lens)), "max": float(max(lens)),
                 "min": float(min(lens))},
        oracle_rep_ns=oracle_rep,
        wfa_rep_ns=wfa_rep,
    )
