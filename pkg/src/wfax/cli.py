"""Command-line interface tying the generators, the learner, and the
evaluation harness together.  All configuration is via flags and files.

Oracles are named by spec strings: `wfa:path.json`, `rnn:weights.json`, or
`wparen`.
"""

import argparse
import json
import sys

from . import datagen, harness, obs_table, wfa as wfa_mod
from .learner import ExtractionConfig, extract
from .numerics import NumericError
from .oracles import Oracle, load_rnn_weights, rnn_oracle, wfa_oracle, wparen_oracle


def parse_oracle(spec: str) -> Oracle:
    if spec == "wparen":
        return wparen_oracle()
    if spec.startswith("wfa:"):
        return wfa_oracle(wfa_mod.load_file(spec[len("wfa:"):]))
    if spec.startswith("rnn:"):
        return rnn_oracle(load_rnn_weights(spec[len("rnn:"):]))
    raise ValueError(f"unknown oracle spec {spec!r} "
                     "(expected wfa:<path>, rnn:<path>, or wparen)")


def _write_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def cmd_gen_wfa(args):
    alphabet = datagen.default_alphabet(args.alphabet_size)
    generated = datagen.random_wfa(alphabet, args.states, args.seed)
    wfa_mod.save_file(generated, args.out)
    print(f"wrote {args.states}-state WFA over {args.alphabet_size} symbols to {args.out}")


def cmd_gen_data(args):
    alphabet = datagen.default_alphabet(args.alphabet_size)
    if args.exclude:
        existing = [w for w, _ in datagen.read_jsonl(args.exclude)]
        words = datagen.sample_disjoint(alphabet, args.count, existing,
                                        args.max_len, args.seed, args.sampler)
    elif args.sampler == "uniform":
        words = datagen.sample_uniform(alphabet, args.max_len, args.count, args.seed)
    else:
        words = datagen.sample_block(alphabet, args.max_len, args.count, args.seed)
    oracle = parse_oracle(args.oracle) if args.oracle else None
    items = [(w, oracle.output(w) if oracle else None) for w in words]
    datagen.write_jsonl(items, args.out)
    print(f"wrote {len(items)} {args.sampler} words to {args.out}")


def cmd_gen_wparen(args):
    train, test = datagen.build_wparen_dataset(args.seed)
    datagen.write_jsonl(train.items, args.out_train)
    datagen.write_jsonl(test.items, args.out_test)
    print(f"wrote {len(train.items)} train to {args.out_train}, "
          f"{len(test.items)} test to {args.out_test}")


def cmd_extract(args):
    oracle = parse_oracle(args.oracle)
    cfg = ExtractionConfig(
        e=args.e, M=args.M, L=args.L, tau0=args.tau0, decay=args.decay,
        eq_engine="bfs" if args.eq == "bfs" else "regression",
        bfs_budget=args.n, max_eq_rounds=args.max_rounds, max_pops=args.max_pops,
        length_scale=args.length_scale, ridge=args.ridge, seed=args.seed,
    )
    trace = open(args.trace, "w", encoding="utf-8") if args.trace else None
    try:
        report = extract(oracle, cfg, trace=trace)
    finally:
        if trace:
            trace.close()
    wfa_mod.save_file(report.wfa, args.out)
    if args.report:
        _write_json(report.to_dict(), args.report)
    if args.dump_table:
        with open(args.dump_table, "w", encoding="utf-8") as fh:
            fh.write(obs_table.to_csv(report._table))
    print(f"extracted {report.wfa.n_states}-state WFA in {report.rounds} rounds "
          f"({report.stopped}); wrote {args.out}")


def cmd_eval(args):
    oracle = parse_oracle(args.oracle)
    hypothesis = wfa_mod.load_file(args.wfa)
    if args.exhaustive_len is not None:
        sup = harness.sup_error_exhaustive(oracle, hypothesis, args.exhaustive_len)
        result = {"sup_error": sup, "max_len": args.exhaustive_len, "exhaustive": True}
    else:
        words = [w for w, _ in datagen.read_jsonl(args.data)]
        result = harness.mse(oracle, hypothesis, words).to_dict()
    if args.out:
        _write_json(result, args.out)
    print(json.dumps(result if "per_length" not in result
                     else {k: v for k, v in result.items() if k != "per_length"}))


def cmd_bench(args):
    oracle = parse_oracle(args.oracle)
    hypothesis = wfa_mod.load_file(args.wfa)
    words = [w for w, _ in datagen.read_jsonl(args.data)]
    result = harness.bench(oracle, hypothesis, words, repetitions=args.reps)
    print(json.dumps(result.to_dict()))


def cmd_export_dot(args):
    hypothesis = wfa_mod.load_file(args.wfa)
    dot = wfa_mod.export_dot(hypothesis, args.threshold,
                             underline_threshold=args.underline_threshold)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(dot)
    print(f"wrote {wfa_mod.count_dot_edges(dot)} edges to {args.out}")


def cmd_oracle_out(args):
    oracle = parse_oracle(args.oracle)
    words = [w for w, _ in datagen.read_jsonl(args.data)]
    outputs = [{"w": list(w), "y": oracle.output(w)} for w in words]
    _write_json(outputs, args.out)
    print(f"wrote {len(outputs)} oracle outputs to {args.out}")


def _add_oracle_arg(p):
    p.add_argument("--oracle", required=True,
                   help="wfa:<path.json> | rnn:<weights.json> | wparen")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wfax",
                                     description="WFA extraction from black-box sequence scorers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-wfa", help="generate a random output-bounded WFA")
    p.add_argument("--alphabet-size", type=int, required=True)
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_wfa)

    p = sub.add_parser("gen-data", help="sample a word dataset")
    p.add_argument("--sampler", choices=["uniform", "block"], required=True)
    p.add_argument("--alphabet-size", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--max-len", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--oracle", help="optional oracle spec used to label the words")
    p.add_argument("--exclude",
                   help="JSONL file of words the sample must not overlap")
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("gen-wparen", help="build the weighted-parentheses dataset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-train", required=True)
    p.add_argument("--out-test", required=True)
    p.set_defaults(func=cmd_gen_wparen)

    p = sub.add_parser("extract", help="extract a WFA from an oracle")
    _add_oracle_arg(p)
    p.add_argument("--eq", choices=["regr", "bfs"], default="regr")
    p.add_argument("--M", type=int, default=5, help="concentration threshold (regr engine)")
    p.add_argument("--n", type=int, default=500, help="per-round word budget (bfs engine)")
    p.add_argument("--e", type=float, default=0.05, help="error tolerance")
    p.add_argument("--L", type=int, default=20, help="max plausible word length")
    p.add_argument("--tau0", type=float, default=1e-2, help="initial rank tolerance")
    p.add_argument("--decay", type=float, default=0.5, help="rank tolerance decay rate")
    p.add_argument("--max-rounds", type=int, default=50)
    p.add_argument("--max-pops", type=int, default=100_000)
    p.add_argument("--length-scale", type=float, default=1.0)
    p.add_argument("--ridge", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.add_argument("--trace", help="JSON-lines search trace output")
    p.add_argument("--dump-table", help="CSV dump of the final observation table")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("eval", help="evaluate an extracted WFA against an oracle")
    _add_oracle_arg(p)
    p.add_argument("--wfa", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--data", help="JSONL word list")
    group.add_argument("--exhaustive-len", type=int,
                       help="check ALL words up to this length instead")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="compare inference time of oracle and WFA")
    _add_oracle_arg(p)
    p.add_argument("--wfa", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--reps", type=int, default=5)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export-dot", help="render a WFA as Graphviz DOT")
    p.add_argument("--wfa", required=True)
    p.add_argument("--threshold", type=float, default=0.01,
                   help="hide transitions with |weight| <= threshold")
    p.add_argument("--underline-threshold", type=float, default=0.1,
                   help="underline initial/final values at or above this magnitude")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("oracle-out", help="dump oracle outputs for a word list")
    _add_oracle_arg(p)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_oracle_out)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValueError, OSError, KeyError, NumericError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
