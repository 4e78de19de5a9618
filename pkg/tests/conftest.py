import numpy as np
import pytest

from wfax.oracles import LstmLayerWeights, Oracle, RnnWeights
from wfax.wfa import Alphabet, Wfa


@pytest.fixture
def example1() -> Wfa:
    """3-state fixture WFA over {a, b} with integer entries; its value on
    'ba' is 21 and its configuration there is (50, -14, 7)."""
    return Wfa(
        Alphabet(("a", "b")),
        alpha=[1, 2, 3],
        beta=[0, -1, 1],
        transitions={
            "a": [[1, 2, -1], [3, 0, 0], [0, 4, 0]],
            "b": [[-1, 1, 0], [0, 3, 0], [-2, 4, 0]],
        },
    )


class FunctionOracle(Oracle):
    """Oracle built from an arbitrary word-to-real function.

    The run state is the word itself; the configuration defaults to the
    1-dim vector [f(word)] unless an encoder is supplied.
    """

    def __init__(self, alphabet: Alphabet, fn, encoder=None, dim=None):
        self.alphabet = alphabet
        self.fn = fn
        self.encoder = encoder or (lambda word: np.array([fn(word)]))
        self.dim = dim if dim is not None else 1

    def start(self):
        return ()

    def advance(self, state, symbol):
        if symbol not in self.alphabet:
            raise KeyError(symbol)
        return state + (symbol,)

    def read_output(self, state):
        return float(self.fn(state))

    def read_config(self, state):
        return np.asarray(self.encoder(state), dtype=float)


class PlantedGapOracle(Oracle):
    """Wraps an oracle and adds `gap_fn(word)` to its output.

    The run state carries the word so far, so the bump applies on the
    incremental interface too.
    """

    def __init__(self, inner: Oracle, gap_fn):
        self.inner = inner
        self.alphabet = inner.alphabet
        self.dim = inner.dim
        self.gap_fn = gap_fn

    def start(self):
        return (self.inner.start(), ())

    def advance(self, state, symbol):
        inner_state, word = state
        return (self.inner.advance(inner_state, symbol), word + (symbol,))

    def read_output(self, state):
        inner_state, word = state
        return self.inner.read_output(inner_state) + self.gap_fn(word)

    def read_config(self, state):
        return self.inner.read_config(state[0])


def half_geometric_wfa(n_symbols: int = 2) -> Wfa:
    """1-state WFA computing 0.5 ** len(word)."""
    from wfax.datagen import default_alphabet
    alphabet = default_alphabet(n_symbols)
    return Wfa(alphabet, alpha=[1.0], beta=[1.0],
               transitions={s: [[0.5]] for s in alphabet.symbols})


def random_rnn_weights(alphabet: Alphabet, hidden: int, seed: int,
                       scale: float = 0.3, n_layers: int = 2) -> RnnWeights:
    rng = np.random.default_rng(seed)
    layers = []
    in_size = len(alphabet)
    for _ in range(n_layers):
        layers.append(LstmLayerWeights(
            w_x=rng.normal(0.0, scale, (4 * hidden, in_size)),
            w_h=rng.normal(0.0, scale, (4 * hidden, hidden)),
            b=rng.normal(0.0, scale, 4 * hidden),
        ))
        in_size = hidden
    return RnnWeights(hidden=hidden, alphabet=alphabet, layers=layers,
                      head_w=rng.normal(0.0, scale, hidden),
                      head_b=0.0).validate()


def zero_rnn_weights(alphabet: Alphabet, hidden: int, n_layers: int = 2) -> RnnWeights:
    layers = []
    in_size = len(alphabet)
    for _ in range(n_layers):
        layers.append(LstmLayerWeights(
            w_x=np.zeros((4 * hidden, in_size)),
            w_h=np.zeros((4 * hidden, hidden)),
            b=np.zeros(4 * hidden),
        ))
        in_size = hidden
    return RnnWeights(hidden=hidden, alphabet=alphabet, layers=layers,
                      head_w=np.zeros(hidden), head_b=0.0).validate()
