"""Weighted finite automaton extraction from black-box sequence scorers.

The learner runs weighted L* against any oracle exposing outputs and
internal state vectors; equivalence queries are answered either by a
shortlex breadth-first scan or by a regression-guided best-first search
over the oracle's state space.
"""

from .wfa import Alphabet, Wfa, close_rel, configuration, load, save, step, weight
from .oracles import cached, rnn_oracle, wfa_oracle, wparen_oracle, wparen_value
from .learner import ExtractionConfig, ExtractionReport, extract, resume

__all__ = [
    "Alphabet", "Wfa", "close_rel", "configuration", "load", "save", "step",
    "weight", "cached", "rnn_oracle", "wfa_oracle", "wparen_oracle",
    "wparen_value", "ExtractionConfig", "ExtractionReport", "extract", "resume",
]
