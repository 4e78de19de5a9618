"""Acceptance suite: one test per release criterion, each printing a
PASS line with its measured numbers.  Criteria 1 and 2 share a fixed
panel of 20 seeded random WFA oracles covering every combination of
state count 1..5 and alphabet size 2..3 twice.
"""

import time
from itertools import product

import numpy as np
import pytest

from conftest import PlantedGapOracle, random_rnn_weights
from wfax.datagen import build_wparen_dataset, default_alphabet, random_wfa, sample_uniform
from wfax.eq_search import bfs_eq, counterexample, equivalent
from wfax.harness import bench, sup_error_exhaustive
from wfax.learner import ExtractionConfig, extract
from wfax.oracles import rnn_oracle, wfa_oracle, wparen_oracle, wparen_value
from wfax.wfa import Wfa, close_rel, configuration, weight

# Seed block chosen once for the whole panel; each (states, alphabet-size)
# combination appears exactly twice across the 20 seeds.
PANEL_SEEDS = range(20, 40)


def panel_oracle(seed):
    n = 1 + seed % 5
    k = 2 + seed % 2
    target = random_wfa(default_alphabet(k), n, seed)
    return wfa_oracle(target), n, k


def report_pass(num, text):
    print(f"\nACCEPTANCE {num}: PASS — {text}")


def test_01_exact_recovery_bfs():
    t0 = time.time()
    worst = 0.0
    for seed in PANEL_SEEDS:
        oracle, n, k = panel_oracle(seed)
        cfg = ExtractionConfig(e=1e-9, tau0=1e-10, decay=0.5, eq_engine="bfs",
                               bfs_budget=12_000, max_eq_rounds=60)
        report = extract(oracle, cfg)
        sup = sup_error_exhaustive(oracle, report.wfa, 8)
        assert report.wfa.n_states <= n, f"seed {seed}: {report.wfa.n_states} > {n} states"
        assert sup < 1e-6, f"seed {seed}: sup-error {sup:.2e}"
        worst = max(worst, sup)
    elapsed = time.time() - t0
    assert elapsed < 60.0, f"took {elapsed:.1f}s"
    report_pass(1, f"exact recovery on 20 oracles, worst sup-error {worst:.2e}, "
                   f"{elapsed:.1f}s")


def test_02_regression_engine_parity():
    t0 = time.time()
    worst = 0.0
    for seed in PANEL_SEEDS:
        oracle, n, k = panel_oracle(seed)
        cfg = ExtractionConfig(e=0.05, M=5, L=20, tau0=1e-4, decay=0.5,
                               eq_engine="regression", max_eq_rounds=50,
                               max_pops=50_000, length_scale=1.0, ridge=1e-8)
        report = extract(oracle, cfg)
        sup = sup_error_exhaustive(oracle, report.wfa, 8)
        assert sup < 0.05, f"seed {seed}: sup-error {sup:.4f} >= e"
        worst = max(worst, sup)
    elapsed = time.time() - t0
    assert elapsed < 300.0, f"took {elapsed:.1f}s"
    report_pass(2, f"regression engine within e=0.05 on 20 oracles, worst "
                   f"sup-error {worst:.4f}, {elapsed:.1f}s")


def test_03_fixture_values_bit_exact(example1):
    cfg = configuration(example1, ("b", "a"))
    assert cfg.tolist() == [50.0, -14.0, 7.0]
    assert weight(example1, ("b", "a")) == 21.0
    report_pass(3, "fixture weight('ba') == 21 and configuration('ba') == "
                   "(50, -14, 7), bit-exact")


def test_04_closeness_relation_bounds_output_gap():
    t0 = time.time()
    rng = np.random.default_rng(123)
    total_close = 0
    for n_states in (1, 2, 3, 4, 6):
        n_samples = 20_000
        x = rng.normal(0.0, 5.0, (n_samples, n_states))
        beta = rng.normal(0.0, 2.0, (n_samples, n_states))
        e = rng.uniform(1e-3, 1.0, n_samples)
        # place y so the weighted squared distance lands uniformly inside
        # the ellipsoid; every sampled pair is then a close pair
        delta = rng.normal(0.0, 1.0, (n_samples, n_states))
        lhs = np.sum((beta * delta) ** 2, axis=1)
        safe_lhs = np.where(lhs == 0.0, 1.0, lhs)
        scale = np.sqrt(rng.uniform(0.0, 1.0, n_samples) * (e * e / n_states) / safe_lhs)
        y = x + delta * scale[:, None]

        inside = np.sum((beta * (x - y)) ** 2, axis=1) < e * e / n_states
        gaps = np.abs(np.sum((x - y) * beta, axis=1))
        assert np.count_nonzero(inside & (gaps >= e)) == 0
        assert np.count_nonzero(inside) > 0.99 * n_samples
        total_close += int(np.count_nonzero(inside))

        # spot-check the vectorized formula against the actual relation
        alphabet = default_alphabet(1)
        for i in rng.integers(0, n_samples, size=200):
            probe = Wfa(alphabet, np.ones(n_states), beta[i],
                        {"a": np.eye(n_states)})
            assert close_rel(probe, x[i], y[i], e[i]) == bool(inside[i])
    elapsed = time.time() - t0
    assert elapsed < 5.0
    report_pass(4, f"0 violations of the output-gap bound over {total_close} "
                   f"close pairs, {elapsed:.2f}s")


def test_05_wparen_values_and_dataset():
    t0 = time.time()
    assert wparen_value(tuple("((3)(7))))")) == 0.0
    assert wparen_value(tuple("((3)(7))")) == 0.75
    assert wparen_value(tuple("(0)(1)(2)")) == 0.5
    train, test = build_wparen_dataset(seed=7)
    assert len(train.items) == 9000
    assert len(test.items) == 1000
    elapsed = time.time() - t0
    assert elapsed < 5.0
    report_pass(5, f"wparen fixtures exact and 9000/1000 split, {elapsed:.2f}s")


def _threshold_transitions(wfa, threshold):
    masked = {s: np.where(np.abs(m) > threshold, m, 0.0)
              for s, m in wfa.transitions.items()}
    return Wfa(wfa.alphabet, wfa.alpha, wfa.beta, masked)


def test_06_wparen_extraction_shape():
    t0 = time.time()
    cfg = ExtractionConfig(e=0.05, M=5, L=20, tau0=1e-4, decay=0.5,
                           eq_engine="regression", max_eq_rounds=50,
                           max_pops=50_000, ridge=1e-8)
    report = extract(wparen_oracle(), cfg)
    masked = _threshold_transitions(report.wfa, 0.01)
    depth_one = [tuple("()"), tuple("(7)"), tuple("()()")]
    for word in depth_one:
        value = weight(masked, word)
        assert abs(value - 0.5) < 0.1, f"{''.join(word)} -> {value}"
    mismatched = weight(masked, tuple(")("))
    assert abs(mismatched) < 0.1
    elapsed = time.time() - t0
    assert elapsed < 300.0
    report_pass(6, f"{report.wfa.n_states}-state wparen extraction accepts "
                   f"depth-1 strings near 0.5 and rejects ')(' near 0, "
                   f"{elapsed:.1f}s")


def test_07_baseline_returns_shortlex_least_gap():
    t0 = time.time()
    rng = np.random.default_rng(77)
    checked = 0
    for i in range(50):
        k = 2 + i % 2
        alphabet = default_alphabet(k)
        target = random_wfa(alphabet, 2 + i % 3, seed=1000 + i)
        length = int(rng.integers(0, 5))
        planted = tuple(alphabet.symbols[j]
                        for j in rng.integers(0, k, size=length))
        oracle = PlantedGapOracle(wfa_oracle(target),
                                  lambda w, planted=planted: 0.2 if w == planted else 0.0)
        result, index = bfs_eq(oracle, target, e=0.05, n=500)

        expected_word, expected_index, count = None, None, 0
        for l in range(0, 10):
            for word in product(alphabet.symbols, repeat=l):
                if count >= 500:
                    break
                if abs(weight(target, word) - oracle.output(word)) > 0.05:
                    expected_word, expected_index = word, count
                    break
                count += 1
            if expected_word is not None or count >= 500:
                break
        assert result.is_counterexample
        assert result.word == expected_word == planted
        assert index == expected_index
        checked += 1
    elapsed = time.time() - t0
    assert elapsed < 10.0
    report_pass(7, f"shortlex-least counterexample verified on {checked} "
                   f"planted-gap instances, {elapsed:.1f}s")


def test_08_tau_decay_once_per_repetition(example1):
    script = iter([
        counterexample(("a", "b"), 1.0, 0.0),
        counterexample(("a", "b"), 1.0, 0.0),
        counterexample(("a", "b"), 1.0, 0.0),
        equivalent("queue-exhausted"),
    ])
    cfg = ExtractionConfig(tau0=1e-2, decay=0.5, max_eq_rounds=10)
    report = extract(wfa_oracle(example1), cfg, eq_fn=lambda o, w, r: next(script))
    taus = report.tau_trajectory
    assert taus == [1e-2, 1e-2, 0.5e-2, 0.25e-2]
    repetitions = sum(1 for a, b in zip(report.counterexamples,
                                        report.counterexamples[1:]) if a == b)
    decays = sum(1 for a, b in zip(taus, taus[1:]) if b < a)
    assert repetitions == decays == 2
    report_pass(8, "tau decays by exactly the configured factor once per "
                   "repeated counterexample")


def test_09_wfa_inference_faster_than_lstm():
    alphabet = default_alphabet(4)
    oracle = rnn_oracle(random_rnn_weights(alphabet, 50, seed=13))
    cfg = ExtractionConfig(e=0.05, M=5, L=20, tau0=1e-4, eq_engine="regression",
                           max_eq_rounds=3, max_pops=300, ridge=1e-8)
    report = extract(oracle, cfg)
    words = sample_uniform(alphabet, max_len=20, count=1000, seed=14)
    result = bench(oracle, report.wfa, words, repetitions=3)
    assert result.speedup_ratio > 1.0
    report_pass(9, f"extracted {report.wfa.n_states}-state WFA is "
                   f"{result.speedup_ratio:.0f}x faster than the 50-dim "
                   f"2-layer LSTM oracle")
