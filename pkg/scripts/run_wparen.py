#!/usr/bin/env python3
"""Extract WFAs from the weighted balanced-parentheses oracle at several
concentration thresholds and render their support graphs as DOT files.

Usage: python scripts/run_wparen.py [--out-dir wparen_out]
"""

import argparse
import pathlib

from wfax.learner import ExtractionConfig, extract
from wfax.oracles import wparen_oracle, wparen_value
from wfax.wfa import export_dot, save_file, weight

PROBES = ["()", "(3)", "()()", "(())", "((7))", ")(", "((", "))"]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out-dir", default="wparen_out")
    parser.add_argument("--thresholds", type=int, nargs="+", default=[5, 15])
    args = parser.parse_args()
    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    for m in args.thresholds:
        cfg = ExtractionConfig(e=0.05, M=m, L=20, tau0=1e-4, decay=0.5,
                               eq_engine="regression", max_eq_rounds=50,
                               max_pops=50_000, ridge=1e-8)
        report = extract(wparen_oracle(), cfg)
        wfa_path = out_dir / f"wparen_m{m}.json"
        dot_path = out_dir / f"wparen_m{m}.dot"
        save_file(report.wfa, wfa_path)
        dot_path.write_text(export_dot(report.wfa, 0.01))
        print(f"M={m}: {report.wfa.n_states} states, {report.rounds} rounds, "
              f"{report.stopped}; wrote {wfa_path} and {dot_path}")
        for text in PROBES:
            word = tuple(text)
            print(f"   {text!r:10} true={wparen_value(word):6.3f} "
                  f"extracted={weight(report.wfa, word):8.4f}")


if __name__ == "__main__":
    main()
