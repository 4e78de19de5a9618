/**
 * Offline trainer: fit the stacked LSTM on a labeled JSONL dataset and
 * export the weights in the shared JSON schema.
 *
 *   node dist/train.js --data train.jsonl --hidden 50 --epochs 10 \
 *        --seed 0 --out weights.json [--val-data test.jsonl] [--lr 0.02]
 */

import fs from "node:fs";
import { parseArgs } from "node:util";

import * as tf from "@tensorflow/tfjs";

import { LabeledWord, alphabetOf, bucketByLength, readDataset } from "./data.js";
import {
  LstmModel,
  encodeWords,
  forwardBatch,
  initModel,
  trainableVariables,
} from "./lstm.js";
import { saveWeights } from "./weights.js";
import { exportWeights } from "./lstm.js";

export interface TrainOptions {
  hidden: number;
  layers: number;
  epochs: number;
  lr: number;
  seed: number;
  batchSize: number;
  alphabet?: string[];
  quiet?: boolean;
}

export interface TrainResult {
  model: LstmModel;
  trainMse: number[];
  valMse?: number;
}

export function datasetMse(model: LstmModel, items: LabeledWord[]): number {
  let sum = 0;
  for (const [, bucket] of bucketByLength(items)) {
    const xs = encodeWords(model, bucket.map((it) => it.word));
    const preds = forwardBatch(model, xs);
    const values = preds.dataSync();
    bucket.forEach((item, i) => {
      const gap = values[i] - item.y;
      sum += gap * gap;
    });
    xs.dispose();
    preds.dispose();
  }
  return sum / items.length;
}

export async function train(items: LabeledWord[], opts: TrainOptions,
                            valItems?: LabeledWord[]): Promise<TrainResult> {
  await tf.setBackend("cpu");
  await tf.ready();
  for (const item of items) {
    if (item.y < 0 || item.y > 1) {
      throw new Error(`label ${item.y} outside [0, 1]; the head is a sigmoid`);
    }
  }
  const alphabet = opts.alphabet ?? alphabetOf(items);
  const model = initModel(alphabet, opts.hidden, opts.layers, opts.seed);
  const optimizer = tf.train.adam(opts.lr);
  const variables = trainableVariables(model);

  // pre-encode each length bucket once; batches are fixed slices so runs
  // with the same seed are reproducible
  const buckets = [...bucketByLength(items).entries()].sort((a, b) => a[0] - b[0]);
  const encoded = buckets.map(([, bucket]) => {
    const xs = encodeWords(model, bucket.map((it) => it.word));
    const ys = tf.tensor2d(bucket.map((it) => [it.y]));
    return { xs, ys, size: bucket.length };
  });

  const trainMse: number[] = [];
  for (let epoch = 0; epoch < opts.epochs; epoch += 1) {
    for (const { xs, ys, size } of encoded) {
      for (let start = 0; start < size; start += opts.batchSize) {
        const count = Math.min(opts.batchSize, size - start);
        const xBatch = xs.slice([start, 0, 0], [count, -1, -1]) as tf.Tensor3D;
        const yBatch = ys.slice([start, 0], [count, -1]) as tf.Tensor2D;
        const loss = optimizer.minimize(
          () => tf.losses.meanSquaredError(yBatch, forwardBatch(model, xBatch)) as tf.Scalar,
          true,
          variables,
        ) as tf.Scalar;
        const value = loss.dataSync()[0];
        loss.dispose();
        xBatch.dispose();
        yBatch.dispose();
        if (!Number.isFinite(value)) {
          throw new Error(`training diverged: loss ${value} in epoch ${epoch + 1}`);
        }
      }
    }
    const epochMse = datasetMse(model, items);
    trainMse.push(epochMse);
    if (!opts.quiet) {
      console.log(`epoch ${epoch + 1}/${opts.epochs}: train mse ${epochMse.toExponential(3)}`);
    }
  }
  encoded.forEach(({ xs, ys }) => {
    xs.dispose();
    ys.dispose();
  });
  optimizer.dispose();

  const result: TrainResult = { model, trainMse };
  if (valItems && valItems.length) {
    result.valMse = datasetMse(model, valItems);
    if (!opts.quiet) {
      console.log(`validation mse ${result.valMse.toExponential(3)}`);
    }
  }
  return result;
}

async function main(): Promise<void> {
  const { values } = parseArgs({
    options: {
      data: { type: "string" },
      "val-data": { type: "string" },
      hidden: { type: "string", default: "50" },
      layers: { type: "string", default: "2" },
      epochs: { type: "string", default: "10" },
      lr: { type: "string", default: "0.02" },
      "batch-size": { type: "string", default: "64" },
      seed: { type: "string", default: "0" },
      alphabet: { type: "string" },
      out: { type: "string" },
      report: { type: "string" },
      verify: { type: "boolean", default: false },
    },
  });
  if (!values.data || !values.out) {
    console.error("usage: train --data train.jsonl --out weights.json "
      + "[--hidden 50] [--layers 2] [--epochs 10] [--lr 0.02] [--seed 0] "
      + "[--val-data test.jsonl] [--alphabet a,b,c] [--report report.json]");
    process.exit(2);
  }
  const items = readDataset(values.data);
  const valItems = values["val-data"] ? readDataset(values["val-data"]) : undefined;
  const result = await train(items, {
    hidden: Number(values.hidden),
    layers: Number(values.layers),
    epochs: Number(values.epochs),
    lr: Number(values.lr),
    batchSize: Number(values["batch-size"]),
    seed: Number(values.seed),
    alphabet: values.alphabet ? values.alphabet.split(",") : undefined,
  }, valItems);
  saveWeights(exportWeights(result.model), values.out);
  console.log(`wrote ${values.out}`);
  if (values.report) {
    fs.writeFileSync(values.report, JSON.stringify({
      train_mse: result.trainMse,
      val_mse: result.valMse ?? null,
    }, null, 2) + "\n");
  }
  if (values.verify) {
    const { PARITY_TOLERANCE, verifyModelExport } = await import("./verify.js");
    const sample = items.slice(0, 100).map((item) => item.word);
    const parity = await verifyModelExport(result.model, values.out, sample);
    console.log(`export parity: max |deviation| ${parity.maxDeviation.toExponential(3)} `
      + `over ${parity.count} words`);
    if (parity.maxDeviation > PARITY_TOLERANCE) {
      console.error("FAIL: exported weights disagree with the trained model "
        + "(layout/gate-order bug)");
      process.exit(1);
    }
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
