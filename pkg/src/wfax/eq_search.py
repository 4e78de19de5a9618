"""Equivalence-query engines.

`bfs_eq` scans words in shortlex order and reports the first output gap.
`regression_eq` is a best-first search over the oracle's state space: a
regression-learned abstraction maps oracle states into the hypothesis
WFA's configuration space, priorities favor candidates whose abstracted
state is far from everything already visited, and expansion stops in
regions that have been visited densely enough.
"""

import heapq
import itertools
import json
import math
from collections import deque
from dataclasses import dataclass
from typing import List, Optional, TextIO, Tuple

import numpy as np

from . import regression
from .oracles import Oracle
from .wfa import EMPTY_WORD, Wfa, Word, step


@dataclass
class EqResult:
    kind: str                      # "counterexample" | "equivalent"
    word: Optional[Word] = None
    f_oracle: Optional[float] = None
    f_wfa: Optional[float] = None
    reason: Optional[str] = None   # queue-exhausted | length-heuristic | budget-exhausted

    @property
    def is_counterexample(self) -> bool:
        return self.kind == "counterexample"


def counterexample(word: Word, f_oracle: float, f_wfa: float) -> EqResult:
    return EqResult("counterexample", word=tuple(word), f_oracle=f_oracle, f_wfa=f_wfa)


def equivalent(reason: str) -> EqResult:
    return EqResult("equivalent", reason=reason)


@dataclass
class SearchParams:
    """Tunables of the best-first search."""

    e: float = 0.05
    M: int = 5
    L: int = 20
    max_pops: int = 100_000
    length_scale: float = 1.0
    ridge: float = 1e-10

    def __post_init__(self):
        if self.e <= 0:
            raise ValueError("e must be positive")
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if self.L < 1:
            raise ValueError("L must be >= 1")


class PrioritizedQueue:
    """Max-priority queue with FIFO tie-breaking by insertion order."""

    def __init__(self):
        self._heap = []
        self._counter = itertools.count()

    def push(self, item, priority: float):
        heapq.heappush(self._heap, (-priority, next(self._counter), item))

    def pop(self):
        neg_priority, _, item = heapq.heappop(self._heap)
        return item, -neg_priority

    def __len__(self):
        return len(self._heap)


def shortlex_words(alphabet):
    """All words in shortlex order: by length, then by symbol index."""
    length = 0
    while True:
        for combo in itertools.product(alphabet.symbols, repeat=length):
            yield combo
        length += 1


def bfs_eq(oracle: Oracle, wfa: Wfa, e: float, n: int, prev_index: int = 0
           ) -> Tuple[EqResult, int]:
    """Breadth-first baseline: test the first prev_index + n words of
    shortlex order and return the first one where the outputs differ by
    more than e, together with its shortlex index.

    States on both sides are carried incrementally along the BFS tree, so
    each tested word costs one oracle step and one WFA step.
    """
    if n < 1:
        raise ValueError("budget n must be >= 1")
    limit = prev_index + n
    # entries: (word, parent oracle state, parent wfa config, last symbol);
    # the root has no parent and uses the start states directly
    queue = deque([(EMPTY_WORD, None, None, None)])
    index = 0
    while queue and index < limit:
        word, p_ostate, p_acfg, sym = queue.popleft()
        if sym is None:
            ostate, acfg = oracle.start(), wfa.alpha
        else:
            ostate, acfg = oracle.advance(p_ostate, sym), step(wfa, p_acfg, sym)
        f_r = oracle.read_output(ostate)
        f_a = float(acfg @ wfa.beta)
        if abs(f_a - f_r) > e:
            return counterexample(word, f_r, f_a), index
        index += 1
        for child_sym in wfa.alphabet.symbols:
            queue.append((word + (child_sym,), ostate, acfg, child_sym))
    return equivalent("budget-exhausted"), prev_index


def consistent(h_state, visited_states, visited_configs, p, wfa: Wfa, e: float) -> bool:
    """True (OK) unless some visited word witnesses that p is both wrong
    and locally relevant: its true hypothesis configuration is far from its
    abstracted state, while its abstracted state is close to the
    candidate's.  Closeness on both sides is the final-vector-weighted
    relation.
    """
    if not len(visited_states):
        return True
    beta2 = wfa.beta ** 2
    thresh = e * e / wfa.n_states
    images = p.predict_batch(np.asarray(visited_states, dtype=float))
    configs = np.asarray(visited_configs, dtype=float)
    ph = p.predict(np.asarray(h_state, dtype=float))
    mispredicted = ((configs - images) ** 2) @ beta2 >= thresh
    near_h = ((images - ph) ** 2) @ beta2 < thresh
    return not bool(np.any(mispredicted & near_h))


def priority_of(h_image, visited_images) -> float:
    """Minimum Euclidean distance from the candidate's abstracted state to
    the other visited abstracted states; +inf when there are none."""
    imgs = np.asarray(visited_images, dtype=float)
    if imgs.size == 0:
        return math.inf
    diffs = imgs - np.asarray(h_image, dtype=float)
    return float(np.sqrt(np.min(np.sum(diffs ** 2, axis=1))))


class _TraceWriter:
    def __init__(self, sink: Optional[TextIO]):
        self.sink = sink

    def emit(self, **payload):
        if self.sink is not None:
            self.sink.write(json.dumps(payload) + "\n")


def regression_eq(oracle: Oracle, wfa: Wfa, params: SearchParams,
                  trace: Optional[TextIO] = None) -> EqResult:
    """Best-first counterexample search guided by a learned abstraction of
    the oracle's state space.

    The abstraction p starts as the constant map onto the hypothesis's
    initial configuration and is refit (kernel ridge on all visited words)
    whenever the consistency check fails.  A popped word longer than L ends
    the search as equivalent; so does an empty queue or an exhausted pop
    budget.
    """
    log = _TraceWriter(trace)
    if set(oracle.alphabet.symbols) != set(wfa.alphabet.symbols):
        raise ValueError("oracle and WFA must share an alphabet")
    e, big_m = params.e, params.M
    beta = wfa.beta
    beta2 = beta ** 2
    thresh = e * e / wfa.n_states

    p = regression.constant_regressor(wfa.alpha)
    visited_states: List[np.ndarray] = []   # oracle configurations
    visited_configs: List[np.ndarray] = []  # hypothesis configurations
    images = np.zeros((0, wfa.n_states))    # p applied to visited_states

    queue = PrioritizedQueue()
    queue.push((EMPTY_WORD, None, None, None), math.inf)
    pops = 0
    while len(queue):
        if pops >= params.max_pops:
            log.emit(event="stop", reason="budget-exhausted", pops=pops)
            return equivalent("budget-exhausted")
        (word, p_ostate, p_acfg, sym), prio = queue.pop()
        pops += 1
        if len(word) > params.L:
            log.emit(event="stop", reason="length-heuristic", pops=pops, word=list(word))
            return equivalent("length-heuristic")
        if sym is None:
            ostate, acfg = oracle.start(), wfa.alpha
        else:
            ostate, acfg = oracle.advance(p_ostate, sym), step(wfa, p_acfg, sym)
        f_r = oracle.read_output(ostate)
        f_a = float(acfg @ beta)
        if abs(f_r - f_a) >= e:
            log.emit(event="counterexample", word=list(word), f_oracle=f_r, f_wfa=f_a,
                     pops=pops)
            return counterexample(word, f_r, f_a)

        d_r = np.asarray(oracle.read_config(ostate), dtype=float)
        ph = p.predict(d_r)
        refit = False
        if visited_states:
            mispredicted = ((np.asarray(visited_configs) - images) ** 2) @ beta2 >= thresh
            near_h = ((images - ph) ** 2) @ beta2 < thresh
            refit = bool(np.any(mispredicted & near_h))
        if refit:
            xs = np.vstack(visited_states + [d_r])
            ys = np.vstack(visited_configs + [acfg])
            p = regression.fit(xs, ys, length_scale=params.length_scale,
                               ridge=params.ridge)
            images = p.predict_batch(np.asarray(visited_states))
            ph = p.predict(d_r)
            log.emit(event="refit", n_train=len(xs))

        visited_states.append(d_r)
        visited_configs.append(np.asarray(acfg, dtype=float))
        prev_images = images
        images = np.vstack([images, ph[None, :]])

        vn = int(np.count_nonzero(((images - ph) ** 2) @ beta2 < thresh))
        assert vn >= 1, "the candidate itself must fall in its own neighborhood"
        log.emit(event="pop", word=list(word), priority=prio, vn=vn)
        if vn <= big_m:
            pr = priority_of(ph, prev_images)
            for child_sym in wfa.alphabet.symbols:
                queue.push((word + (child_sym,), ostate, acfg, child_sym), pr)
    log.emit(event="stop", reason="queue-exhausted", pops=pops)
    return equivalent("queue-exhausted")
