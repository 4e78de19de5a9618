"""Experiment-input generators: random output-bounded WFAs, uniform and
block-restricted word samplers, and the weighted-parentheses dataset.

Every generator takes a seed (or an existing numpy Generator) and is
reproducible; bulk builders derive independent child seeds internally.
"""

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .oracles import WPAREN_ALPHABET, wparen_value
from .wfa import Alphabet, Wfa, Word

LabeledWord = Tuple[Word, Optional[float]]


@dataclass
class Dataset:
    items: List[LabeledWord]
    split: str = "train"


def default_alphabet(size: int) -> Alphabet:
    """Lowercase letters for small alphabets, s0..s<k-1> beyond 26."""
    if size < 1:
        raise ValueError("alphabet size must be >= 1")
    if size <= 26:
        return Alphabet(tuple(chr(ord("a") + i) for i in range(size)))
    return Alphabet(tuple(f"s{i}" for i in range(size)))


def random_wfa(alphabet: Alphabet, n_states: int, seed) -> Wfa:
    """Random WFA whose outputs stay in [0, 1] for every word.

    The initial vector is a point on the probability simplex, transition
    rows are sub-stochastic (Dirichlet rows scaled by uniform [0.8, 1]),
    and final weights are uniform in [0, 1]; configurations therefore stay
    nonnegative with mass at most 1 under arbitrary products.
    """
    if n_states < 1:
        raise ValueError("n_states must be >= 1")
    rng = np.random.default_rng(seed)
    alpha = rng.dirichlet(np.ones(n_states))
    beta = rng.uniform(0.0, 1.0, size=n_states)
    transitions = {}
    for sym in alphabet.symbols:
        rows = rng.dirichlet(np.ones(n_states), size=n_states)
        scale = rng.uniform(0.8, 1.0, size=(n_states, 1))
        transitions[sym] = rows * scale
    return Wfa(alphabet, alpha, beta, transitions)


def sample_uniform(alphabet: Alphabet, max_len: int = 20, count: int = 1,
                   seed=None) -> List[Word]:
    """Words with length uniform on 0..max_len and i.i.d. uniform symbols."""
    rng = np.random.default_rng(seed)
    symbols = alphabet.symbols
    words = []
    for _ in range(count):
        length = int(rng.integers(0, max_len + 1))
        idx = rng.integers(0, len(symbols), size=length)
        words.append(tuple(symbols[i] for i in idx))
    return words


def block_valid(word: Sequence[str]) -> bool:
    """True iff each symbol's occurrences form one contiguous block."""
    seen = set()
    prev = None
    for sym in word:
        if sym != prev:
            if sym in seen:
                return False
            seen.add(sym)
        prev = sym
    return True


def sample_block(alphabet: Alphabet, max_len: int = 20, count: int = 1,
                 seed=None, n_blocks: Optional[int] = None) -> List[Word]:
    """Words made of runs of distinct symbols (aabccc yes, aaba no).

    Each word picks a random subset of symbols in random order (or exactly
    n_blocks of them) and i.i.d. run lengths; the total length is capped at
    max_len.
    """
    if n_blocks is not None and n_blocks > len(alphabet):
        raise ValueError(f"requested {n_blocks} blocks from a {len(alphabet)}-symbol alphabet")
    rng = np.random.default_rng(seed)
    symbols = np.array(alphabet.symbols, dtype=object)
    words = []
    for _ in range(count):
        k = n_blocks if n_blocks is not None else int(rng.integers(1, len(symbols) + 1))
        chosen = rng.permutation(len(symbols))[:k]
        per_run = max(1, max_len // k)
        lengths = rng.integers(1, per_run + 1, size=k)
        word = []
        for sym_idx, run in zip(chosen, lengths):
            word.extend([symbols[sym_idx]] * int(run))
        words.append(tuple(word[:max_len]))
    return words


def sample_disjoint(alphabet: Alphabet, count: int, exclude, max_len: int = 20,
                    seed=None, sampler: str = "uniform") -> List[Word]:
    """Sample `count` words that avoid an existing collection (rejection).

    Used to build evaluation sets that do not overlap a training set.
    Duplicates within the fresh sample are allowed, matching the plain
    samplers.
    """
    rng = np.random.default_rng(seed)
    excluded = {tuple(w) for w in exclude}
    draw = sample_uniform if sampler == "uniform" else sample_block
    out: List[Word] = []
    for _ in range(200):
        for word in draw(alphabet, max_len, count, rng):
            if word not in excluded:
                out.append(word)
                if len(out) == count:
                    return out
    raise ValueError(f"could not find {count} words outside the excluded set; "
                     "the word space is too small")


@lru_cache(maxsize=None)
def _dyck_completions(half_len: int) -> tuple:
    """completions[u][d] = number of balanced completions after u opens
    and d closes (d <= u <= half_len), computed once per half-length."""
    m = half_len
    table = [[0] * (m + 1) for _ in range(m + 1)]
    for u in range(m, -1, -1):
        for d in range(u, -1, -1):
            if u == m and d == m:
                table[u][d] = 1
                continue
            total = 0
            if u < m:
                total += table[u + 1][d]
            if d < u:
                total += table[u][d + 1]
            table[u][d] = total
    return tuple(tuple(row) for row in table)


def gen_balanced(count: int, seed=None, max_half_len: int = 10) -> List[Word]:
    """Uniformly random balanced parenthesis words.

    Sampling walks the monotone-lattice-path bijection: each prefix keeps
    opens >= closes, and steps are drawn proportionally to the number of
    valid completions, which makes every shape of a given half-length
    equally likely.  Half-lengths are uniform on 1..max_half_len.
    """
    rng = np.random.default_rng(seed)
    words = []
    for _ in range(count):
        m = int(rng.integers(1, max_half_len + 1))
        table = _dyck_completions(m)
        u = d = 0
        word = []
        while u + d < 2 * m:
            w_open = table[u + 1][d] if u < m else 0
            w_close = table[u][d + 1] if d < u else 0
            if rng.random() * (w_open + w_close) < w_open:
                word.append("(")
                u += 1
            else:
                word.append(")")
                d += 1
        words.append(tuple(word))
    return words


def insert_digits(word: Sequence[str], seed=None) -> Word:
    """Scatter random digits into a word at uniform positions.

    The digit count is geometric (p = 0.5, mean 1) capped at the word
    length, so expected growth stays bounded; the non-digit subsequence is
    unchanged.
    """
    rng = np.random.default_rng(seed)
    out = list(word)
    n_digits = min(int(rng.geometric(0.5)) - 1, len(out))
    for _ in range(n_digits):
        pos = int(rng.integers(0, len(out) + 1))
        out.insert(pos, str(rng.integers(0, 10)))
    return tuple(out)


def mutate(word: Sequence[str], seed=None) -> Word:
    """Apply at least one random edit, then keep going on coin tails.

    Edits: duplicate a random character, delete a random character, or
    exchange a random adjacent pair.  Edits that need more characters than
    the word has are not drawn; the empty word cannot be edited at all.
    """
    rng = np.random.default_rng(seed)
    out = list(word)
    while True:
        rules = []
        if len(out) >= 1:
            rules += ["duplicate", "delete"]
        if len(out) >= 2:
            rules.append("exchange")
        if not rules:
            break
        rule = rules[int(rng.integers(0, len(rules)))]
        if rule == "duplicate":
            i = int(rng.integers(0, len(out)))
            out.insert(i, out[i])
        elif rule == "delete":
            i = int(rng.integers(0, len(out)))
            del out[i]
        else:
            i = int(rng.integers(0, len(out) - 1))
            out[i], out[i + 1] = out[i + 1], out[i]
        if rng.random() < 0.5:  # heads: stop
            break
    return tuple(out)


def build_wparen_dataset(seed) -> Tuple[Dataset, Dataset]:
    """Balanced-parentheses dataset: 5000 balanced words with digit filler
    plus 5000 mutated (mostly unbalanced) ones, labeled by the weighted
    balanced-parentheses function and split 9000 train / 1000 test."""
    root = np.random.default_rng(seed)
    balanced = gen_balanced(5000, root)
    good = [insert_digits(w, root) for w in balanced]
    to_break = gen_balanced(5000, root)
    bad = [insert_digits(mutate(w, root), root) for w in to_break]
    pool = good + bad
    labeled = [(w, wparen_value(w)) for w in pool]
    order = root.permutation(len(labeled))
    shuffled = [labeled[i] for i in order]
    return (Dataset(shuffled[:9000], split="train"),
            Dataset(shuffled[9000:], split="test"))


# --- JSONL dataset files ----------------------------------------------------

def write_jsonl(items: Sequence[LabeledWord], path):
    with open(path, "w", encoding="utf-8") as fh:
        for word, y in items:
            record = {"w": list(word)}
            if y is not None:
                record["y"] = y
            fh.write(json.dumps(record) + "\n")


def read_jsonl(path) -> List[LabeledWord]:
    items = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                word = tuple(record["w"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{line_no}: bad dataset line: {exc}") from exc
            items.append((word, record.get("y")))
    return items
