/**
 * Cross-implementation parity check: run this trainer's forward pass and
 * the extraction package's LSTM oracle on the same words and compare.
 * Any deviation above the tolerance means a layout or gate-order bug.
 *
 *   node dist/verify.js --weights weights.json --data words.jsonl [--count 100]
 */

import { execFileSync } from "node:child_process";
import fs from "node:fs";
import os from "node:os";
import path from "node:path";
import { parseArgs } from "node:util";

import * as tf from "@tensorflow/tfjs";

import { readDataset } from "./data.js";
import { LstmModel, disposeModel, forwardWord, modelFromWeights } from "./lstm.js";
import { loadWeights } from "./weights.js";

export const PARITY_TOLERANCE = 1e-4;

export interface ParityResult {
  maxDeviation: number;
  count: number;
}

/** Outputs of the primary package's oracle on the given words, obtained
 * through its CLI (`wfax oracle-out`). */
export function primaryOutputs(weightsPath: string, words: string[][],
                               wfaxCli = process.env.WFAX_CLI ?? "wfax"): number[] {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "wfax-parity-"));
  const wordsPath = path.join(dir, "words.jsonl");
  const outPath = path.join(dir, "outputs.json");
  try {
    fs.writeFileSync(wordsPath,
      words.map((w) => JSON.stringify({ w })).join("\n") + "\n");
    execFileSync(wfaxCli, [
      "oracle-out", "--oracle", `rnn:${weightsPath}`,
      "--data", wordsPath, "--out", outPath,
    ], { stdio: ["ignore", "ignore", "inherit"] });
    const records: { y: number }[] = JSON.parse(fs.readFileSync(outPath, "utf-8"));
    return records.map((r) => r.y);
  } finally {
    fs.rmSync(dir, { recursive: true, force: true });
  }
}

function compareWithPrimary(ours: number[], weightsPath: string,
                            words: string[][], wfaxCli?: string): ParityResult {
  const theirs = primaryOutputs(weightsPath, words, wfaxCli);
  if (theirs.length !== ours.length) {
    throw new Error("primary returned a different number of outputs");
  }
  let maxDeviation = 0;
  for (let i = 0; i < ours.length; i += 1) {
    maxDeviation = Math.max(maxDeviation, Math.abs(ours[i] - theirs[i]));
  }
  return { maxDeviation, count: ours.length };
}

/**
 * Parity between a live model and an exported weights file as the primary
 * reads it.  This is the check that catches exporter layout or gate-order
 * bugs: the model's own outputs are the baseline.
 */
export async function verifyModelExport(model: LstmModel, weightsPath: string,
                                        words: string[][],
                                        wfaxCli?: string): Promise<ParityResult> {
  await tf.setBackend("cpu");
  await tf.ready();
  const ours = words.map((w) => forwardWord(model, w));
  return compareWithPrimary(ours, weightsPath, words, wfaxCli);
}

/**
 * Parity between this package's reading of a weights file and the
 * primary's: both sides load the same file and run their own forward
 * pass, so any disagreement is a schema-interpretation mismatch.
 */
export async function verifyExport(weightsPath: string, words: string[][],
                                   wfaxCli?: string): Promise<ParityResult> {
  await tf.setBackend("cpu");
  await tf.ready();
  const model = modelFromWeights(loadWeights(weightsPath));
  const ours = words.map((w) => forwardWord(model, w));
  disposeModel(model);
  return compareWithPrimary(ours, weightsPath, words, wfaxCli);
}

async function main(): Promise<void> {
  const { values } = parseArgs({
    options: {
      weights: { type: "string" },
      data: { type: "string" },
      count: { type: "string", default: "100" },
      "wfax-cli": { type: "string" },
    },
  });
  if (!values.weights || !values.data) {
    console.error("usage: verify --weights weights.json --data words.jsonl "
      + "[--count 100] [--wfax-cli path]");
    process.exit(2);
  }
  const words = readDataset(values.data)
    .slice(0, Number(values.count))
    .map((item) => item.word);
  const result = await verifyExport(values.weights, words, values["wfax-cli"]);
  console.log(`max |deviation| over ${result.count} words: `
    + result.maxDeviation.toExponential(3));
  if (result.maxDeviation > PARITY_TOLERANCE) {
    console.error(`FAIL: deviation exceeds ${PARITY_TOLERANCE} `
      + "(gate order or layout mismatch)");
    process.exit(1);
  }
}

const isCliEntry = process.argv[1] && import.meta.url.endsWith(
  process.argv[1].split("/").pop() as string);
if (isCliEntry) {
  main().catch((err) => {
    console.error(err.message ?? err);
    process.exit(1);
  });
}
