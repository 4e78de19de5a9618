"""Observation table for weighted L* learning.

Rows are access words, columns are test words, entries are oracle outputs
f(u + v).  The table doubles as a finite Hankel block: closedness is a
numeric-rank condition on its rows, and a closed table induces a WFA whose
states are a row basis.
"""

import csv
import io
from typing import List, Optional, Sequence

import numpy as np

from .numerics import lstsq_cutoff, numeric_rank, svd
from .oracles import Oracle
from .wfa import EMPTY_WORD, Alphabet, Wfa, Word


class NotClosedError(ValueError):
    """Synthesis was attempted on a table that is not closed."""


class ObservationTable:
    """Access words x test words with oracle-filled entries.

    The empty word is always access word 0 and test word 0.  Every
    one-symbol extension row of every access word is kept filled alongside
    the table.  Queried values are memoized locally, so refills after a
    mutation only touch new cells.
    """

    def __init__(self, oracle: Oracle):
        self.oracle = oracle
        self.alphabet: Alphabet = oracle.alphabet
        self.access: List[Word] = [EMPTY_WORD]
        self.tests: List[Word] = [EMPTY_WORD]
        self._values = {}
        self.entries = np.zeros((1, 1))
        self.ext_rows = {}
        self.refill()

    def _f(self, word: Word) -> float:
        value = self._values.get(word)
        if value is None:
            value = self._values[word] = self.oracle.output(word)
        return value

    def refill(self):
        """Recompute the entry matrix and extension rows from the oracle."""
        self.entries = np.array(
            [[self._f(u + v) for v in self.tests] for u in self.access])
        self.ext_rows = {}
        for u in self.access:
            for sym in self.alphabet.symbols:
                ext = u + (sym,)
                self.ext_rows[ext] = np.array([self._f(ext + v) for v in self.tests])

    def row(self, u: Word) -> np.ndarray:
        return self.entries[self.access.index(u)]

    def has_access(self, word: Word) -> bool:
        return word in set(self.access)

    def __repr__(self):
        return f"ObservationTable({len(self.access)}x{len(self.tests)})"


def new_table(oracle: Oracle) -> ObservationTable:
    """Fresh 1x1 table holding only the empty-word entry."""
    return ObservationTable(oracle)


def closedness_defect(table: ObservationTable, tau: float) -> Optional[Word]:
    """First one-symbol extension whose row increases the numeric rank of
    the access rows, or None when the table is closed at tolerance tau.

    Scan order is fixed (access order, then alphabet order) so learning
    runs are deterministic.  Extensions that are themselves access words
    are linear combinations by construction and are skipped.
    """
    base = table.entries
    base_rank = numeric_rank(svd(base).singular_values, tau)
    present = set(table.access)
    for u in table.access:
        for sym in table.alphabet.symbols:
            ext = u + (sym,)
            if ext in present:
                continue
            stacked = np.vstack([base, table.ext_rows[ext]])
            if numeric_rank(svd(stacked).singular_values, tau) != base_rank:
                return ext
    return None


def promote(table: ObservationTable, word: Word):
    """Add one access word (typically a closedness defect or a
    counterexample prefix) and refill."""
    word = tuple(word)
    if word in set(table.access):
        raise ValueError(f"access word already present: {word!r}")
    table.access.append(word)
    table.refill()


def add_tests(table: ObservationTable, suffixes: Sequence[Word]):
    """Add test words; suffixes already present are skipped."""
    present = set(table.tests)
    added = False
    for suffix in suffixes:
        suffix = tuple(suffix)
        if suffix not in present:
            table.tests.append(suffix)
            present.add(suffix)
            added = True
    if added:
        table.refill()


def incorporate_counterexample(table: ObservationTable, word: Word):
    """Grow the table with all prefixes of the counterexample as access
    words and all suffixes as test words.  Prefix/suffix closure keeps the
    access set prefix-closed and the test set suffix-closed, which the
    synthesis construction relies on.
    """
    word = tuple(word)
    present = set(table.access)
    for i in range(1, len(word) + 1):
        prefix = word[:i]
        if prefix not in present:
            table.access.append(prefix)
            present.add(prefix)
    add_tests(table, [word[i:] for i in range(len(word) + 1)])
    table.refill()


def _greedy_basis(table: ObservationTable, tau: float) -> List[int]:
    """Indices of a maximal independent subset of access rows, scanning in
    access order.  The empty word is always kept (state 0), even when its
    row is zero, so the initial vector is a unit vector by construction.
    """
    indices = [0]
    stack = table.entries[0:1]
    rank = numeric_rank(svd(stack).singular_values, tau)
    for i in range(1, len(table.access)):
        candidate = np.vstack([stack, table.entries[i]])
        cand_rank = numeric_rank(svd(candidate).singular_values, tau)
        if cand_rank > rank:
            indices.append(i)
            stack = candidate
            rank = cand_rank
    return indices


def synthesize(table: ObservationTable, tau: float) -> Wfa:
    """Build the WFA induced by a closed table.

    States are a basis of access rows; each transition matrix solves
    A_sym @ basis_rows = extension_rows in the cutoff least-squares sense;
    the initial vector selects the empty word's row and the final vector
    reads the empty-test column.
    """
    defect = closedness_defect(table, tau)
    if defect is not None:
        raise NotClosedError(f"table is not closed at tau={tau}: defect {defect!r}")
    basis_idx = _greedy_basis(table, tau)
    basis_words = [table.access[i] for i in basis_idx]
    h_base = table.entries[basis_idx]
    n = len(basis_idx)

    transitions = {}
    for sym in table.alphabet.symbols:
        h_ext = np.array([table.ext_rows[u + (sym,)] for u in basis_words])
        # solve A @ h_base = h_ext  =>  h_base.T @ A.T = h_ext.T
        a_t = lstsq_cutoff(h_base.T, h_ext.T, tau).x
        transitions[sym] = a_t.T

    alpha = np.zeros(n)
    alpha[0] = 1.0
    eps_col = table.tests.index(EMPTY_WORD)
    beta = table.entries[basis_idx, eps_col]
    return Wfa(table.alphabet, alpha, beta, transitions)


def to_csv(table: ObservationTable) -> str:
    """Debug dump: access words x test words, symbols space-joined."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([""] + [" ".join(v) for v in table.tests])
    for i, u in enumerate(table.access):
        writer.writerow([" ".join(u)] + [repr(x) for x in table.entries[i]])
    return buf.getvalue()
