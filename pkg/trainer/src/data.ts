/**
 * JSONL datasets: one {"w": [...symbols], "y": value} object per line,
 * the same file format the extraction package's generators emit.
 */

import fs from "node:fs";

export interface LabeledWord {
  word: string[];
  y: number;
}

export function readDataset(path: string): LabeledWord[] {
  const items: LabeledWord[] = [];
  const lines = fs.readFileSync(path, "utf-8").split("\n");
  lines.forEach((line, i) => {
    const text = line.trim();
    if (!text) return;
    let record: { w?: unknown; y?: unknown };
    try {
      record = JSON.parse(text);
    } catch (err) {
      throw new Error(`${path}:${i + 1}: invalid JSON line`);
    }
    if (!Array.isArray(record.w) || record.w.some((s) => typeof s !== "string")) {
      throw new Error(`${path}:${i + 1}: "w" must be an array of symbol strings`);
    }
    if (typeof record.y !== "number" || !Number.isFinite(record.y)) {
      throw new Error(`${path}:${i + 1}: missing or non-finite label "y"`);
    }
    items.push({ word: record.w as string[], y: record.y });
  });
  if (items.length === 0) {
    throw new Error(`${path}: empty dataset`);
  }
  return items;
}

export function alphabetOf(items: LabeledWord[]): string[] {
  const symbols = new Set<string>();
  for (const item of items) {
    for (const sym of item.word) symbols.add(sym);
  }
  if (symbols.size === 0) {
    throw new Error("dataset contains no symbols; pass --alphabet explicitly");
  }
  return [...symbols].sort();
}

/** Group items by word length so each batch is a rectangular tensor. */
export function bucketByLength(items: LabeledWord[]): Map<number, LabeledWord[]> {
  const buckets = new Map<number, LabeledWord[]>();
  for (const item of items) {
    const bucket = buckets.get(item.word.length);
    if (bucket) {
      bucket.push(item);
    } else {
      buckets.set(item.word.length, [item]);
    }
  }
  return buckets;
}
