#!/usr/bin/env python3
"""Desk-scale accuracy sweep: extract WFAs from random-WFA oracles with the
regression engine and the breadth-first baseline, and report MSE and
running time per setting.

Usage: python scripts/run_extraction_sweep.py [--sampler uniform|block]
"""

import argparse
import time

from wfax.datagen import default_alphabet, random_wfa, sample_block, sample_uniform
from wfax.harness import mse
from wfax.learner import ExtractionConfig, extract
from wfax.oracles import wfa_oracle


def run_setting(alphabet_size, n_states, engine, sampler, seeds, **cfg_kw):
    alphabet = default_alphabet(alphabet_size)
    mses, times = [], []
    for seed in seeds:
        target = random_wfa(alphabet, n_states, seed)
        oracle = wfa_oracle(target)
        cfg = ExtractionConfig(eq_engine=engine, **cfg_kw)
        t0 = time.time()
        report = extract(oracle, cfg)
        times.append(time.time() - t0)
        if sampler == "block":
            words = sample_block(alphabet, 20, 1000, seed=seed + 10_000)
        else:
            words = sample_uniform(alphabet, 20, 1000, seed=seed + 10_000)
        mses.append(mse(oracle, report.wfa, words).mse)
    return sum(mses) / len(mses), sum(times) / len(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sampler", choices=["uniform", "block"], default="uniform")
    parser.add_argument("--seeds", type=int, default=5)
    args = parser.parse_args()

    settings = [(2, 3), (2, 5), (3, 5), (3, 8)]
    engines = {
        "regr(5)": dict(engine="regression", M=5, e=0.05, L=20, tau0=1e-4,
                        ridge=1e-8, max_eq_rounds=50, max_pops=50_000),
        "regr(2)": dict(engine="regression", M=2, e=0.05, L=20, tau0=1e-4,
                        ridge=1e-8, max_eq_rounds=50, max_pops=50_000),
        "search(500)": dict(engine="bfs", bfs_budget=500, e=0.05,
                            max_eq_rounds=50),
        "search(2000)": dict(engine="bfs", bfs_budget=2000, e=0.05,
                             max_eq_rounds=50),
    }

    print(f"sampler={args.sampler}; cells are mean MSE / mean seconds over "
          f"{args.seeds} seeds")
    header = f"{'(|Σ|, n)':>10} " + " ".join(f"{name:>18}" for name in engines)
    print(header)
    for alphabet_size, n_states in settings:
        row = [f"({alphabet_size}, {n_states}):".rjust(10)]
        for name, kw in engines.items():
            kw = dict(kw)
            engine = kw.pop("engine")
            avg_mse, avg_t = run_setting(alphabet_size, n_states, engine,
                                         args.sampler, range(args.seeds), **kw)
            row.append(f"{avg_mse:10.2e}/{avg_t:6.2f}s")
        print(" ".join(row))


if __name__ == "__main__":
    main()
