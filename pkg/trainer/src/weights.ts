/**
 * The shared LSTM weights JSON schema (see ../schemas/rnn_weights.schema.json
 * in the extraction package).  Gate blocks are stacked in the fixed order
 * (input, forget, cell-candidate, output), each of height `hidden`.
 */

import fs from "node:fs";

export interface LayerWeightsJson {
  w_x: number[][]; // (4h, input_width)
  w_h: number[][]; // (4h, h)
  b: number[]; // (4h)
}

export interface RnnWeightsJson {
  hidden: number;
  alphabet: string[];
  layers: LayerWeightsJson[];
  head: { w: number[]; b: number };
}

export function validateWeights(w: RnnWeightsJson): RnnWeightsJson {
  if (!Number.isInteger(w.hidden) || w.hidden < 1) {
    throw new Error(`hidden must be a positive integer, got ${w.hidden}`);
  }
  if (!Array.isArray(w.alphabet) || w.alphabet.length < 1) {
    throw new Error("alphabet must be a nonempty list of symbols");
  }
  if (new Set(w.alphabet).size !== w.alphabet.length) {
    throw new Error("alphabet symbols must be distinct");
  }
  let inWidth = w.alphabet.length;
  const h = w.hidden;
  w.layers.forEach((layer, i) => {
    const check = (m: number[][], rows: number, cols: number, name: string) => {
      if (m.length !== rows || m.some((row) => row.length !== cols)) {
        throw new Error(`layer ${i}: ${name} must be ${rows}x${cols}`);
      }
      if (m.some((row) => row.some((v) => !Number.isFinite(v)))) {
        throw new Error(`layer ${i}: ${name} has non-finite entries`);
      }
    };
    check(layer.w_x, 4 * h, inWidth, "w_x");
    check(layer.w_h, 4 * h, h, "w_h");
    if (layer.b.length !== 4 * h || layer.b.some((v) => !Number.isFinite(v))) {
      throw new Error(`layer ${i}: b must be length ${4 * h} and finite`);
    }
    inWidth = h;
  });
  if (w.head.w.length !== h || !Number.isFinite(w.head.b)) {
    throw new Error(`head must have a length-${h} weight vector and finite bias`);
  }
  return w;
}

export function saveWeights(w: RnnWeightsJson, path: string): void {
  fs.writeFileSync(path, JSON.stringify(validateWeights(w)) + "\n");
}

export function loadWeights(path: string): RnnWeightsJson {
  return validateWeights(JSON.parse(fs.readFileSync(path, "utf-8")));
}
