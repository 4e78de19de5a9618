"""Black-box stateful scorers.

An oracle answers two things about a word over a finite alphabet: a real
output and a real configuration vector (its internal state after reading
the word).  Concrete oracles: a WFA used as its own scorer, a 2-layer LSTM
run from serialized weights, and a hand-coded weighted-balanced-parentheses
scorer.  A caching wrapper adds memoization and query counters.
"""

import abc
import json
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .wfa import Alphabet, AlphabetError, Wfa, Word, configuration, step, weight

GATE_ORDER = ("input", "forget", "cell", "output")


class Oracle(abc.ABC):
    """Stateful scorer over a finite alphabet.

    Besides whole-word queries (`output`, `config`), oracles expose a
    run-handle interface (`start`/`advance`/`read_output`/`read_config`) so
    searches can extend words one symbol at a time without re-reading the
    prefix.  Run-handles are immutable values owned by the caller.
    Implementations must be deterministic.
    """

    alphabet: Alphabet
    dim: int

    @abc.abstractmethod
    def start(self):
        """State after the empty word."""

    @abc.abstractmethod
    def advance(self, state, symbol: str):
        """State after reading one more symbol."""

    @abc.abstractmethod
    def read_output(self, state) -> float:
        """Scalar output at a state."""

    @abc.abstractmethod
    def read_config(self, state) -> np.ndarray:
        """Configuration vector (length `dim`) at a state."""

    def run(self, word: Sequence[str]):
        state = self.start()
        for sym in word:
            state = self.advance(state, sym)
        return state

    def output(self, word: Sequence[str]) -> float:
        return self.read_output(self.run(word))

    def config(self, word: Sequence[str]) -> np.ndarray:
        return self.read_config(self.run(word))


class WfaOracle(Oracle):
    """A WFA acting as the exact stateful scorer of its own weight function."""

    def __init__(self, wfa: Wfa):
        self.wfa = wfa
        self.alphabet = wfa.alphabet
        self.dim = wfa.n_states

    def start(self):
        return self.wfa.alpha

    def advance(self, state, symbol):
        return step(self.wfa, state, symbol)

    def read_output(self, state):
        return float(state @ self.wfa.beta)

    def read_config(self, state):
        return state


def wfa_oracle(wfa: Wfa) -> WfaOracle:
    return WfaOracle(wfa)


# --- LSTM oracle ------------------------------------------------------------

@dataclass
class LstmLayerWeights:
    """One LSTM layer: gate blocks stacked (input, forget, cell, output)."""

    w_x: np.ndarray  # (4h, input_size)
    w_h: np.ndarray  # (4h, h)
    b: np.ndarray    # (4h,)


@dataclass
class RnnWeights:
    """2-layer LSTM with one-hot inputs and a sigmoid scalar head.

    The input encoding is one-hot over the alphabet (no learned embedding);
    gate blocks are ordered (input, forget, cell-candidate, output).
    """

    hidden: int
    alphabet: Alphabet
    layers: List[LstmLayerWeights]
    head_w: np.ndarray  # (h,)
    head_b: float

    def validate(self):
        h = self.hidden
        if h < 1:
            raise ValueError("hidden size must be >= 1")
        if not self.layers:
            raise ValueError("at least one LSTM layer required")
        in_size = len(self.alphabet)
        for i, layer in enumerate(self.layers):
            if layer.w_x.shape != (4 * h, in_size):
                raise ValueError(f"layer {i}: w_x must be {(4 * h, in_size)}, got {layer.w_x.shape}")
            if layer.w_h.shape != (4 * h, h):
                raise ValueError(f"layer {i}: w_h must be {(4 * h, h)}, got {layer.w_h.shape}")
            if layer.b.shape != (4 * h,):
                raise ValueError(f"layer {i}: b must be {(4 * h,)}, got {layer.b.shape}")
            for arr in (layer.w_x, layer.w_h, layer.b):
                if not np.all(np.isfinite(arr)):
                    raise ValueError(f"layer {i}: non-finite weight entries")
            in_size = h
        if self.head_w.shape != (h,):
            raise ValueError(f"head weight must be {(h,)}, got {self.head_w.shape}")
        if not (np.all(np.isfinite(self.head_w)) and np.isfinite(self.head_b)):
            raise ValueError("non-finite head weights")
        return self


def rnn_weights_to_dict(w: RnnWeights) -> dict:
    return {
        "hidden": w.hidden,
        "alphabet": list(w.alphabet.symbols),
        "layers": [
            {"w_x": l.w_x.tolist(), "w_h": l.w_h.tolist(), "b": l.b.tolist()}
            for l in w.layers
        ],
        "head": {"w": w.head_w.tolist(), "b": w.head_b},
    }


def rnn_weights_from_dict(obj: dict) -> RnnWeights:
    try:
        layers = [
            LstmLayerWeights(
                w_x=np.asarray(l["w_x"], dtype=float),
                w_h=np.asarray(l["w_h"], dtype=float),
                b=np.asarray(l["b"], dtype=float),
            )
            for l in obj["layers"]
        ]
        weights = RnnWeights(
            hidden=int(obj["hidden"]),
            alphabet=Alphabet(tuple(obj["alphabet"])),
            layers=layers,
            head_w=np.asarray(obj["head"]["w"], dtype=float),
            head_b=float(obj["head"]["b"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed RNN weights JSON: {exc}") from exc
    return weights.validate()


def load_rnn_weights(path) -> RnnWeights:
    with open(path, "r", encoding="utf-8") as fh:
        return rnn_weights_from_dict(json.load(fh))


def save_rnn_weights(w: RnnWeights, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rnn_weights_to_dict(w), fh)
        fh.write("\n")


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


class RnnOracle(Oracle):
    """Forward inference of a stacked LSTM from serialized weights.

    State is the tuple of (h, c) pairs per layer; the configuration is the
    concatenated hidden states (cell states are excluded unless
    `include_cell` is set).  Output is sigmoid(head_w @ h_last + head_b).
    """

    def __init__(self, weights: RnnWeights, include_cell: bool = False):
        weights.validate()
        self.weights = weights
        self.alphabet = weights.alphabet
        self.include_cell = include_cell
        per_layer = 2 * weights.hidden if include_cell else weights.hidden
        self.dim = per_layer * len(weights.layers)

    def start(self):
        h = self.weights.hidden
        zero = np.zeros(h)
        return tuple((zero, zero) for _ in self.weights.layers)

    def advance(self, state, symbol):
        idx = self.alphabet.index(symbol)
        h = self.weights.hidden
        x = None  # layer-1 input handled via one-hot column lookup
        new_state = []
        for layer_i, (layer, (h_prev, c_prev)) in enumerate(zip(self.weights.layers, state)):
            if layer_i == 0:
                gates = layer.w_x[:, idx] + layer.w_h @ h_prev + layer.b
            else:
                gates = layer.w_x @ x + layer.w_h @ h_prev + layer.b
            i = _sigmoid(gates[0 * h:1 * h])
            f = _sigmoid(gates[1 * h:2 * h])
            g = np.tanh(gates[2 * h:3 * h])
            o = _sigmoid(gates[3 * h:4 * h])
            c = f * c_prev + i * g
            hh = o * np.tanh(c)
            new_state.append((hh, c))
            x = hh
        return tuple(new_state)

    def read_output(self, state):
        h_last = state[-1][0]
        return float(_sigmoid(self.weights.head_w @ h_last + self.weights.head_b))

    def read_config(self, state):
        if self.include_cell:
            parts = [np.concatenate(pair) for pair in state]
        else:
            parts = [pair[0] for pair in state]
        return np.concatenate(parts)


def rnn_oracle(weights: RnnWeights, include_cell: bool = False) -> RnnOracle:
    return RnnOracle(weights, include_cell=include_cell)


# --- weighted balanced parentheses -----------------------------------------

WPAREN_SYMBOLS = ("(", ")") + tuple(str(d) for d in range(10))
WPAREN_ALPHABET = Alphabet(WPAREN_SYMBOLS)


def wparen_value(word: Sequence[str]) -> float:
    """1 - (1/2)^N for words whose parentheses balance, where N is the
    deepest nesting level reached; 0 otherwise.  Digits are fillers.
    The empty word balances with N = 0, hence value 0.
    """
    depth = 0
    peak = 0
    for sym in word:
        if sym == "(":
            depth += 1
            peak = max(peak, depth)
        elif sym == ")":
            depth -= 1
            if depth < 0:
                return 0.0
        elif sym not in WPAREN_ALPHABET:
            raise AlphabetError(f"unknown symbol {sym!r}")
    if depth != 0:
        return 0.0
    return 1.0 - 0.5 ** peak


class WparenOracle(Oracle):
    """Stateful encoder of the weighted balanced-parentheses function.

    Configuration: (current open depth, deepest completed nesting so far,
    validity flag).  The output recomputes the word's value from that
    state: valid and fully closed gives 1 - (1/2)^completed, else 0.
    """

    alphabet = WPAREN_ALPHABET
    dim = 3

    def start(self):
        return (0, 0, 1)

    def advance(self, state, symbol):
        depth, completed, valid = state
        if symbol not in WPAREN_ALPHABET:
            raise AlphabetError(f"unknown symbol {symbol!r}")
        if not valid:
            return state
        if symbol == "(":
            return (depth + 1, completed, 1)
        if symbol == ")":
            if depth == 0:
                return (0, 0, 0)
            return (depth - 1, max(completed, depth), 1)
        return state

    def read_output(self, state):
        depth, completed, valid = state
        if valid and depth == 0:
            return 1.0 - 0.5 ** completed
        return 0.0

    def read_config(self, state):
        return np.asarray(state, dtype=float)


def wparen_oracle() -> WparenOracle:
    return WparenOracle()


# --- caching wrapper --------------------------------------------------------

@dataclass
class QueryStats:
    membership_queries: int = 0
    distinct_words: int = 0
    config_queries: int = 0


class CachedOracle(Oracle):
    """Memoizes word-level output/config queries and counts them.

    Run-handle calls delegate uncached (searches keep their own incremental
    state); the counters cover the word-level query interface only.  Cache
    writes are serialized so the wrapper is safe to share across threads.
    """

    def __init__(self, inner: Oracle):
        self.inner = inner
        self.alphabet = inner.alphabet
        self.dim = inner.dim
        self.stats = QueryStats()
        self._out: Dict[Word, float] = {}
        self._cfg: Dict[Word, np.ndarray] = {}
        self._lock = threading.Lock()

    def start(self):
        return self.inner.start()

    def advance(self, state, symbol):
        return self.inner.advance(state, symbol)

    def read_output(self, state):
        return self.inner.read_output(state)

    def read_config(self, state):
        return self.inner.read_config(state)

    def output(self, word: Sequence[str]) -> float:
        key = tuple(word)
        with self._lock:
            self.stats.membership_queries += 1
            hit = self._out.get(key)
        if hit is not None:
            return hit
        value = self.inner.output(key)
        with self._lock:
            if key not in self._out:
                self._out[key] = value
                self.stats.distinct_words += 1
        return value

    def config(self, word: Sequence[str]) -> np.ndarray:
        key = tuple(word)
        with self._lock:
            self.stats.config_queries += 1
            hit = self._cfg.get(key)
        if hit is not None:
            return hit
        value = self.inner.config(key)
        with self._lock:
            self._cfg.setdefault(key, value)
        return value


def cached(oracle: Oracle) -> CachedOracle:
    return CachedOracle(oracle)
