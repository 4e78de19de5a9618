from collections import Counter

import numpy as np
import pytest

from wfax.datagen import (Dataset, block_valid, build_wparen_dataset,
                          default_alphabet, gen_balanced, insert_digits,
                          mutate, random_wfa, read_jsonl, sample_block,
                          sample_uniform, write_jsonl)
from wfax.oracles import wparen_value
from wfax.wfa import weight


class TestRandomWfa:
    def test_empty_word_value_in_unit_interval(self):
        for seed in range(10):
            wfa = random_wfa(default_alphabet(3), 4, seed)
            assert 0.0 <= weight(wfa, ()) <= 1.0

    def test_outputs_bounded_on_many_words(self):
        wfa = random_wfa(default_alphabet(3), 5, seed=0)
        words = sample_uniform(wfa.alphabet, max_len=20, count=10_000, seed=1)
        values = [weight(wfa, w) for w in words]
        assert min(values) >= 0.0
        assert max(values) <= 1.0

    def test_seeded_reproducibility(self):
        a = random_wfa(default_alphabet(2), 3, seed=42)
        b = random_wfa(default_alphabet(2), 3, seed=42)
        assert np.array_equal(a.alpha, b.alpha)
        assert np.array_equal(a.transitions["a"], b.transitions["a"])

    def test_rejects_zero_states(self):
        with pytest.raises(ValueError):
            random_wfa(default_alphabet(2), 0, seed=0)


class TestSampleUniform:
    def test_lengths_within_bound_and_count(self):
        words = sample_uniform(default_alphabet(4), max_len=20, count=500, seed=3)
        assert len(words) == 500
        assert all(len(w) <= 20 for w in words)

    def test_symbol_frequencies_near_uniform(self):
        # over 1e5 symbol draws, each of 4 symbols should be within 3 sigma
        # of its binomial expectation
        words = sample_uniform(default_alphabet(4), max_len=20, count=10_000, seed=5)
        counts = Counter(sym for w in words for sym in w)
        total = sum(counts.values())
        p = 1 / 4
        sigma = (total * p * (1 - p)) ** 0.5
        for sym in "abcd":
            assert abs(counts[sym] - total * p) < 3.5 * sigma

    def test_reproducible(self):
        a = sample_uniform(default_alphabet(2), count=50, seed=9)
        b = sample_uniform(default_alphabet(2), count=50, seed=9)
        assert a == b


class TestSampleBlock:
    def test_spec_examples(self):
        assert block_valid(tuple("aabccc"))
        assert block_valid(tuple("baaccc"))
        assert not block_valid(tuple("aaba"))

    def test_generated_words_always_valid(self):
        words = sample_block(default_alphabet(3), max_len=20, count=2000, seed=7)
        assert all(block_valid(w) for w in words)
        assert all(0 < len(w) <= 20 for w in words)

    def test_too_many_blocks_rejected(self):
        with pytest.raises(ValueError):
            sample_block(default_alphabet(2), count=1, seed=0, n_blocks=3)

    def test_fixed_block_count(self):
        words = sample_block(default_alphabet(4), max_len=20, count=200, seed=8,
                             n_blocks=2)
        for w in words:
            runs = len({sym for sym in w})
            assert runs <= 2


class TestGenBalanced:
    def test_balanced_and_even(self):
        for word in gen_balanced(500, seed=0):
            assert len(word) % 2 == 0
            assert wparen_value(word) > 0 or len(word) == 0
            depth = 0
            for sym in word:
                depth += 1 if sym == "(" else -1
                assert depth >= 0
            assert depth == 0

    def test_producible_shapes(self):
        produced = {"".join(w) for w in gen_balanced(3000, seed=1)}
        assert "(())" in produced
        assert "(()())" in produced

    def test_catalan_shapes_uniform_at_half_length_three(self):
        # exactly 5 shapes exist; each should appear with frequency
        # 0.2 +/- 0.02 over a large sample
        rng_words = gen_balanced(100_000, seed=2, max_half_len=3)
        threes = ["".join(w) for w in rng_words if len(w) == 6]
        counts = Counter(threes)
        assert len(counts) == 5
        for shape, count in counts.items():
            assert abs(count / len(threes) - 0.2) < 0.02


class TestInsertDigits:
    def test_parenthesis_subsequence_unchanged(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            word = gen_balanced(1, rng)[0]
            padded = insert_digits(word, rng)
            assert tuple(s for s in padded if s in "()") == word

    def test_balancedness_preserved(self):
        rng = np.random.default_rng(4)
        for _ in range(300):
            word = gen_balanced(1, rng)[0]
            padded = insert_digits(word, rng)
            assert wparen_value(padded) == wparen_value(word)

    def test_producible_shape(self):
        produced = set()
        for seed in range(500):
            produced.add("".join(insert_digits(tuple("(())"), seed)))
        assert any(len(p) > 4 for p in produced)  # digits do get inserted

    def test_empty_word(self):
        assert insert_digits((), seed=0) == ()


class TestMutate:
    def test_at_least_one_edit_possible_outputs(self):
        # deletion can reach '((' + ')' shapes from '(())'
        produced = set()
        for seed in range(400):
            produced.add("".join(mutate(tuple("(())"), seed)))
        assert "(()" in produced or "())" in produced or "()" in produced

    def test_mutation_may_stay_balanced(self):
        produced = set()
        for seed in range(400):
            produced.add("".join(mutate(tuple("()"), seed)))
        assert any(wparen_value(tuple(p)) > 0 for p in produced)
        assert any(wparen_value(tuple(p)) == 0 for p in produced)

    def test_empty_word_guard(self):
        assert mutate((), seed=0) == ()

    def test_single_char_word(self):
        # exchange is infeasible; duplicate/delete still fire
        for seed in range(50):
            out = mutate(("(",), seed)
            assert isinstance(out, tuple)


class TestWparenDataset:
    def test_split_sizes_and_labels(self):
        train, test = build_wparen_dataset(seed=0)
        assert len(train.items) == 9000
        assert len(test.items) == 1000
        for word, y in train.items[:200]:
            assert y == wparen_value(word)

    def test_zero_label_fraction_band(self):
        train, test = build_wparen_dataset(seed=1)
        labels = [y for _, y in train.items + test.items]
        zero_fraction = sum(1 for y in labels if y == 0.0) / len(labels)
        assert 0.35 <= zero_fraction <= 0.65

    def test_split_disjoint_by_index(self):
        train, test = build_wparen_dataset(seed=2)
        assert len(train.items) + len(test.items) == 10_000


class TestSampleDisjoint:
    def test_no_overlap_with_excluded(self):
        from wfax.datagen import sample_disjoint
        alphabet = default_alphabet(2)
        train = sample_uniform(alphabet, max_len=6, count=300, seed=1)
        fresh = sample_disjoint(alphabet, 200, train, max_len=6, seed=2)
        assert len(fresh) == 200
        assert not set(fresh) & set(train)

    def test_exhausted_space_rejected(self):
        from wfax.datagen import sample_disjoint
        from itertools import product
        alphabet = default_alphabet(2)
        everything = [w for k in range(3) for w in product("ab", repeat=k)]
        with pytest.raises(ValueError):
            sample_disjoint(alphabet, 5, everything, max_len=2, seed=0)


def test_jsonl_round_trip(tmp_path):
    items = [(("a", "b"), 0.5), ((), None), (("b",), 1.0)]
    path = tmp_path / "data.jsonl"
    write_jsonl(items, path)
    assert read_jsonl(path) == items


def test_jsonl_rejects_garbage(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"w": ["a"]}\nnot json\n')
    with pytest.raises(ValueError):
        read_jsonl(path)
