"""Weighted finite automata: configuration/weight semantics, the
final-vector-weighted closeness relation on configurations, JSON
serialization, and DOT export.

A word is a tuple of symbol strings; the empty tuple is the empty word.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

Word = Tuple[str, ...]

EMPTY_WORD: Word = ()


class AlphabetError(KeyError):
    """A symbol outside the automaton's alphabet was used."""


class WfaFormatError(ValueError):
    """Malformed serialized WFA."""


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct symbol strings; symbol index = position."""

    symbols: Tuple[str, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if not symbols:
            raise ValueError("alphabet must be nonempty")
        if len(set(symbols)) != len(symbols):
            raise ValueError("alphabet symbols must be distinct")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(symbols)})

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise AlphabetError(f"unknown symbol {symbol!r}") from None


class Wfa:
    """A weighted automaton: initial vector, final vector, and one square
    transition matrix per symbol.  Immutable after construction; the word
    weight is initial @ (product of transition matrices) @ final.
    """

    def __init__(self, alphabet: Alphabet, alpha, beta, transitions: Dict[str, np.ndarray]):
        self.alphabet = alphabet
        # copy all inputs: the vectors/matrices are frozen below and the
        # caller's arrays must not be affected
        self.alpha = np.array(alpha, dtype=float).reshape(-1)
        self.beta = np.array(beta, dtype=float).reshape(-1)
        n = self.alpha.shape[0]
        if n < 1:
            raise ValueError("a WFA needs at least one state")
        if self.beta.shape[0] != n:
            raise ValueError("alpha and beta lengths differ")
        if set(transitions) != set(alphabet.symbols):
            raise ValueError("transitions must cover exactly the alphabet")
        self.transitions = {}
        for sym in alphabet.symbols:
            mat = np.array(transitions[sym], dtype=float)
            if mat.shape != (n, n):
                raise ValueError(f"transition matrix for {sym!r} is not {n}x{n}")
            self.transitions[sym] = mat
        for arr in (self.alpha, self.beta, *self.transitions.values()):
            if not np.all(np.isfinite(arr)):
                raise ValueError("WFA entries must be finite")
            arr.setflags(write=False)

    @property
    def n_states(self) -> int:
        return self.alpha.shape[0]

    def __repr__(self):
        return f"Wfa(states={self.n_states}, alphabet={list(self.alphabet.symbols)!r})"


def configuration(wfa: Wfa, word: Sequence[str]) -> np.ndarray:
    """Row vector of per-state weights after reading `word`.

    The empty word gives the initial vector (empty matrix product).
    """
    x = wfa.alpha
    for sym in word:
        if sym not in wfa.alphabet:
            raise AlphabetError(f"unknown symbol {sym!r}")
        x = x @ wfa.transitions[sym]
    return x


def step(wfa: Wfa, config: np.ndarray, symbol: str) -> np.ndarray:
    """One-symbol configuration update: config @ transition(symbol)."""
    if symbol not in wfa.alphabet:
        raise AlphabetError(f"unknown symbol {symbol!r}")
    return np.asarray(config, dtype=float) @ wfa.transitions[symbol]


def weight(wfa: Wfa, word: Sequence[str]) -> float:
    """Weight assigned to `word`: configuration(word) @ final vector."""
    return float(configuration(wfa, word) @ wfa.beta)


def close_rel(wfa: Wfa, x, y, e: float) -> bool:
    """Final-vector-weighted ellipsoidal closeness on configurations.

    True iff sum_i beta_i^2 (x_i - y_i)^2 < e^2 / n_states (strict).
    Membership guarantees the outputs through the final vector differ by
    less than e.
    """
    if e <= 0:
        raise ValueError("error tolerance must be positive")
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    n = wfa.n_states
    if x.shape[0] != n or y.shape[0] != n:
        raise ValueError("configuration length does not match the WFA")
    lhs = float(np.sum((wfa.beta * (x - y)) ** 2))
    return lhs < e * e / n


# --- serialization ---------------------------------------------------------

def to_dict(wfa: Wfa) -> dict:
    return {
        "alphabet": list(wfa.alphabet.symbols),
        "alpha": wfa.alpha.tolist(),
        "beta": wfa.beta.tolist(),
        "transitions": {s: m.tolist() for s, m in wfa.transitions.items()},
    }


def save(wfa: Wfa) -> str:
    """Serialize to JSON.  Finite doubles round-trip bit-exactly."""
    return json.dumps(to_dict(wfa), indent=2)


def _require(cond: bool, msg: str):
    if not cond:
        raise WfaFormatError(msg)


def from_dict(obj: dict) -> Wfa:
    _require(isinstance(obj, dict), "WFA JSON must be an object")
    for key in ("alphabet", "alpha", "beta", "transitions"):
        _require(key in obj, f"missing {key!r} key")
    symbols = obj["alphabet"]
    _require(isinstance(symbols, list) and all(isinstance(s, str) for s in symbols),
             "alphabet must be a list of strings")
    try:
        alphabet = Alphabet(tuple(symbols))
    except ValueError as exc:
        raise WfaFormatError(str(exc)) from exc
    alpha = np.asarray(obj["alpha"], dtype=float)
    beta = np.asarray(obj["beta"], dtype=float)
    _require(alpha.ndim == 1 and beta.ndim == 1, "alpha/beta must be flat lists")
    n = alpha.shape[0]
    trans = obj["transitions"]
    _require(isinstance(trans, dict), "transitions must be an object")
    _require(set(trans) == set(symbols), "transitions must cover exactly the alphabet")
    mats = {}
    for sym in symbols:
        mat = np.asarray(trans[sym], dtype=float)
        _require(mat.shape == (n, n), f"transition matrix for {sym!r} must be {n}x{n}")
        mats[sym] = mat
    for arr in (alpha, beta, *mats.values()):
        _require(bool(np.all(np.isfinite(arr))), "entries must be finite numbers")
    try:
        return Wfa(alphabet, alpha, beta, mats)
    except ValueError as exc:
        raise WfaFormatError(str(exc)) from exc


def load(text: str) -> Wfa:
    """Parse the JSON produced by save(); raises WfaFormatError on schema
    violations or non-finite entries."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WfaFormatError(f"invalid JSON: {exc}") from exc
    return from_dict(obj)


def load_file(path) -> Wfa:
    with open(path, "r", encoding="utf-8") as fh:
        return load(fh.read())


def save_file(wfa: Wfa, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(save(wfa))
        fh.write("\n")


# --- DOT export ------------------------------------------------------------

def _fmt(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return f"{v:.4g}"


def export_dot(wfa: Wfa, weight_threshold: float, underline_threshold: float = 0.1) -> str:
    """Graphviz rendering of the automaton.

    One node per state labeled "q<i>/<initial>/<final>"; one edge per
    transition entry with |value| > weight_threshold, labeled "symbol, value".
    Initial/final values with |value| >= underline_threshold are underlined
    (HTML-like labels); smaller ones are treated as negligible.
    """
    lines = ["digraph wfa {", "  rankdir=LR;"]
    for i in range(wfa.n_states):
        a, b = _fmt(wfa.alpha[i]), _fmt(wfa.beta[i])
        if abs(wfa.alpha[i]) >= underline_threshold:
            a = f"<u>{a}</u>"
        if abs(wfa.beta[i]) >= underline_threshold:
            b = f"<u>{b}</u>"
        lines.append(f'  q{i} [shape=circle label=<q{i}/{a}/{b}>];')
    for sym in wfa.alphabet.symbols:
        mat = wfa.transitions[sym]
        for i in range(wfa.n_states):
            for j in range(wfa.n_states):
                w = mat[i, j]
                if abs(w) > weight_threshold:
                    lines.append(f'  q{i} -> q{j} [label="{sym}, {_fmt(w)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def count_dot_edges(dot_text: str) -> int:
    return sum(1 for line in dot_text.splitlines() if "->" in line)
