/** Deterministic fixture helpers for the parity tests. */

import { featureMatrix, type FeatureMatrix } from '../src/fmat.js';

/** mulberry32: small deterministic PRNG, good enough for fixtures. */
export function rng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randomFeatures(
  seed: number,
  rows: number,
  cols: number,
  baseRateHz = 80,
): FeatureMatrix {
  const next = rng(seed);
  const data = new Float32Array(rows * cols);
  for (let i = 0; i < data.length; i++) {
    data[i] = Math.fround(next() * 4 - 2);
  }
  return featureMatrix(data, rows, cols, baseRateHz);
}

export function randomScheme(seed: number, T: number, U: number): number[] {
  const next = rng(seed);
  const out: number[] = [];
  let left = T;
  while (left > 0) {
    const s = 1 + Math.floor(next() * Math.min(U, left));
    out.push(s);
    left -= s;
  }
  return out;
}
