/**
 * Stacked LSTM scorer with one-hot inputs and a scalar sigmoid head,
 * built from raw tensor ops on variables shaped exactly like the shared
 * weights schema (w_x: 4h x in, w_h: 4h x h, b: 4h; gate rows ordered
 * input, forget, cell-candidate, output).  Keeping the parameters in the
 * export layout makes the forward pass the documented layout conversion.
 */

import * as tf from "@tensorflow/tfjs";

import { RnnWeightsJson, validateWeights } from "./weights.js";

export interface LstmModel {
  hidden: number;
  alphabet: string[];
  symbolIndex: Map<string, number>;
  layers: { wx: tf.Variable; wh: tf.Variable; b: tf.Variable }[];
  headW: tf.Variable; // (h, 1)
  headB: tf.Variable; // (1)
}

/** Deterministic PRNG (mulberry32) so identical seeds give identical
 * initial weights regardless of library internals. */
export function seededRandom(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function normals(rand: () => number, count: number, std: number): Float32Array {
  const out = new Float32Array(count);
  for (let i = 0; i < count; i += 1) {
    const u = Math.max(rand(), 1e-12);
    const v = rand();
    out[i] = Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v) * std;
  }
  return out;
}

export function initModel(
  alphabet: string[],
  hidden: number,
  nLayers: number,
  seed: number,
  initStd = 0.08,
): LstmModel {
  const rand = seededRandom(seed);
  const layers = [];
  let inWidth = alphabet.length;
  for (let d = 0; d < nLayers; d += 1) {
    const wx = tf.variable(
      tf.tensor2d(normals(rand, 4 * hidden * inWidth, initStd), [4 * hidden, inWidth]),
    );
    const wh = tf.variable(
      tf.tensor2d(normals(rand, 4 * hidden * hidden, initStd), [4 * hidden, hidden]),
    );
    // forget-gate bias starts at 1 so early training does not wipe the cell
    const bInit = new Float32Array(4 * hidden);
    bInit.fill(1, hidden, 2 * hidden);
    const b = tf.variable(tf.tensor1d(bInit));
    layers.push({ wx, wh, b });
    inWidth = hidden;
  }
  const headW = tf.variable(
    tf.tensor2d(normals(rand, hidden, initStd), [hidden, 1]),
  );
  const headB = tf.variable(tf.tensor1d(new Float32Array(1)));
  return {
    hidden,
    alphabet,
    symbolIndex: new Map(alphabet.map((s, i) => [s, i])),
    layers,
    headW,
    headB,
  };
}

export function trainableVariables(model: LstmModel): tf.Variable[] {
  const vars: tf.Variable[] = [];
  for (const layer of model.layers) {
    vars.push(layer.wx, layer.wh, layer.b);
  }
  vars.push(model.headW, model.headB);
  return vars;
}

/**
 * Forward pass on a batch of same-length one-hot words.
 * xs: (batch, steps, alphabet) -> predictions (batch, 1) in (0, 1).
 */
export function forwardBatch(model: LstmModel, xs: tf.Tensor3D): tf.Tensor2D {
  return tf.tidy(() => {
    const [batch, steps] = xs.shape;
    const h = model.hidden;
    let hiddenStates = model.layers.map(() => tf.zeros([batch, h]) as tf.Tensor2D);
    let cellStates = model.layers.map(() => tf.zeros([batch, h]) as tf.Tensor2D);
    for (let t = 0; t < steps; t += 1) {
      let input = xs
        .slice([0, t, 0], [batch, 1, xs.shape[2]])
        .reshape([batch, xs.shape[2]]) as tf.Tensor2D;
      const nextH: tf.Tensor2D[] = [];
      const nextC: tf.Tensor2D[] = [];
      for (let d = 0; d < model.layers.length; d += 1) {
        const layer = model.layers[d];
        const gates = tf.add(
          tf.add(
            tf.matMul(input, layer.wx as unknown as tf.Tensor2D, false, true),
            tf.matMul(hiddenStates[d], layer.wh as unknown as tf.Tensor2D, false, true),
          ),
          layer.b,
        ) as tf.Tensor2D;
        const iGate = tf.sigmoid(gates.slice([0, 0], [batch, h]));
        const fGate = tf.sigmoid(gates.slice([0, h], [batch, h]));
        const gCand = tf.tanh(gates.slice([0, 2 * h], [batch, h]));
        const oGate = tf.sigmoid(gates.slice([0, 3 * h], [batch, h]));
        const c = tf.add(tf.mul(fGate, cellStates[d]), tf.mul(iGate, gCand)) as tf.Tensor2D;
        const hNew = tf.mul(oGate, tf.tanh(c)) as tf.Tensor2D;
        nextH.push(hNew);
        nextC.push(c);
        input = hNew;
      }
      hiddenStates = nextH;
      cellStates = nextC;
    }
    const last = hiddenStates[hiddenStates.length - 1];
    return tf.sigmoid(
      tf.add(tf.matMul(last, model.headW as unknown as tf.Tensor2D), model.headB),
    ) as tf.Tensor2D;
  });
}

export function encodeWords(model: LstmModel, words: string[][]): tf.Tensor3D {
  const steps = words[0].length;
  const v = model.alphabet.length;
  const data = new Float32Array(words.length * steps * v);
  words.forEach((word, row) => {
    if (word.length !== steps) {
      throw new Error("encodeWords needs same-length words");
    }
    word.forEach((sym, t) => {
      const idx = model.symbolIndex.get(sym);
      if (idx === undefined) {
        throw new Error(`symbol ${JSON.stringify(sym)} not in the alphabet`);
      }
      data[(row * steps + t) * v + idx] = 1;
    });
  });
  return tf.tensor3d(data, [words.length, steps, v]);
}

/** Scalar output for a single word. */
export function forwardWord(model: LstmModel, word: string[]): number {
  const xs = encodeWords(model, [word]);
  const out = forwardBatch(model, xs);
  const value = out.dataSync()[0];
  xs.dispose();
  out.dispose();
  return value;
}

export function exportWeights(model: LstmModel): RnnWeightsJson {
  const matrix = (v: tf.Variable): number[][] =>
    (v as unknown as tf.Tensor2D).arraySync() as number[][];
  const vector = (v: tf.Variable): number[] =>
    Array.from((v as unknown as tf.Tensor1D).dataSync());
  return validateWeights({
    hidden: model.hidden,
    alphabet: model.alphabet,
    layers: model.layers.map((layer) => ({
      w_x: matrix(layer.wx),
      w_h: matrix(layer.wh),
      b: vector(layer.b),
    })),
    head: {
      w: vector(model.headW as unknown as tf.Variable),
      b: (model.headB as unknown as tf.Tensor1D).dataSync()[0],
    },
  });
}

export function modelFromWeights(w: RnnWeightsJson): LstmModel {
  validateWeights(w);
  return {
    hidden: w.hidden,
    alphabet: w.alphabet,
    symbolIndex: new Map(w.alphabet.map((s, i) => [s, i])),
    layers: w.layers.map((layer) => ({
      wx: tf.variable(tf.tensor2d(layer.w_x)),
      wh: tf.variable(tf.tensor2d(layer.w_h)),
      b: tf.variable(tf.tensor1d(layer.b)),
    })),
    headW: tf.variable(tf.tensor2d(w.head.w.map((x) => [x]))),
    headB: tf.variable(tf.tensor1d([w.head.b])),
  };
}

export function disposeModel(model: LstmModel): void {
  for (const layer of model.layers) {
    layer.wx.dispose();
    layer.wh.dispose();
    layer.b.dispose();
  }
  model.headW.dispose();
  model.headB.dispose();
}
