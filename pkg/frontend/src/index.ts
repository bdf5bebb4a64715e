/** Bindings over the native pipeline's external interfaces.
 *
 * Scheduling and curriculum sampling round-trip through the CLI (FMAT in,
 * scheme JSON / JSON lines out); downsampling and the DFRT token codec are
 * implemented natively against the published wire formats. Inputs are never
 * mutated.
 */

import { mkdtempSync, readFileSync, rmSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { packTokens, unpackTokens, type TokenStream } from './dfrt.js';
import { FormatError, ValidationError } from './errors.js';
import { encodeFmat, featureMatrix, type FeatureMatrix } from './fmat.js';
import { runNative } from './native.js';

export { contentBits, durationBits, packTokens, unpackTokens } from './dfrt.js';
export type { TokenStream } from './dfrt.js';
export { FormatError, NativeToolError, ValidationError } from './errors.js';
export { decodeFmat, encodeFmat, featureMatrix } from './fmat.js';
export type { FeatureMatrix } from './fmat.js';
export { nativeCommand, runNative } from './native.js';

export interface Scheme {
  T: number;
  U: number;
  segments: number[];
}

export interface ScheduleResult {
  segments: number[];
  score: number;
  T: number;
  U: number;
}

export type Objective = 'jh' | 'l2' | 'cosine';

function withTempDir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), 'dfrtok-'));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

export function parseScheme(text: string): Scheme {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch (exc) {
    throw new FormatError(`malformed scheme JSON: ${exc}`);
  }
  const rec = obj as { T?: unknown; U?: unknown; segments?: unknown };
  if (
    typeof rec.T !== 'number' ||
    typeof rec.U !== 'number' ||
    !Array.isArray(rec.segments)
  ) {
    throw new FormatError('scheme JSON must carry T, U and segments');
  }
  return { T: rec.T, U: rec.U, segments: rec.segments.map(Number) };
}

/** Run the optimal-scheme scheduler on a T x d feature matrix. */
export function boundSchedule(
  features: FeatureMatrix,
  ratio: number,
  U: number,
  objective: Objective = 'jh',
): ScheduleResult {
  return withTempDir((dir) => {
    const input = join(dir, 'features.fmat');
    const out = join(dir, 'scheme.json');
    writeFileSync(input, encodeFmat(features));
    const stdout = runNative([
      'schedule',
      '--input', input,
      '--rate', String(ratio),
      '--max-seg', String(U),
      '--objective', objective,
      '--out', out,
    ]);
    const match = /score=([-+0-9.eE]+|-?inf)/.exec(stdout);
    if (!match) throw new FormatError(`native output missing score: ${stdout}`);
    const scheme = parseScheme(readFileSync(out, 'utf8'));
    return {
      segments: scheme.segments,
      score: Number(match[1]),
      T: scheme.T,
      U: scheme.U,
    };
  });
}

/** Segment-mean downsampling against the published semantics.
 *
 * Accumulates in float32 in row order, exactly like the native vectorized
 * path, so results agree with it well within the documented 1e-6 relative
 * tolerance.
 */
export function boundDownsample(
  features: FeatureMatrix,
  segments: number[],
  mode: 'compact' | 'expanded' = 'compact',
): FeatureMatrix {
  const total = segments.reduce((a, b) => a + b, 0);
  if (total !== features.rows) {
    throw new ValidationError(
      `segments sum to ${total}, features have ${features.rows} rows`,
    );
  }
  for (const s of segments) {
    if (s < 1) throw new ValidationError(`segment length ${s} must be >= 1`);
  }
  const d = features.cols;
  const means = new Float32Array(segments.length * d);
  let row = 0;
  segments.forEach((len, i) => {
    const acc = new Float32Array(d);
    for (let r = row; r < row + len; r++) {
      for (let c = 0; c < d; c++) {
        acc[c] = Math.fround(acc[c] + features.data[r * d + c]);
      }
    }
    for (let c = 0; c < d; c++) means[i * d + c] = Math.fround(acc[c] / len);
    row += len;
  });
  if (mode === 'compact') {
    return featureMatrix(means, segments.length, d, features.baseRateHz);
  }
  const out = new Float32Array(features.rows * d);
  row = 0;
  segments.forEach((len, i) => {
    for (let r = row; r < row + len; r++) {
      out.set(means.subarray(i * d, (i + 1) * d), r * d);
    }
    row += len;
  });
  return featureMatrix(out, features.rows, d, features.baseRateHz);
}

/** Serialize a token stream to DFRT bytes (bit-exact with the native tool). */
export function boundPack(ts: TokenStream): Uint8Array {
  return packTokens(ts);
}

/** Parse DFRT bytes back into a token stream. */
export function boundUnpack(bytes: Uint8Array): TokenStream {
  return unpackTokens(bytes);
}

export interface MeltConfigInit {
  U?: number;
  S_p?: number;
  p_tgt?: number[];
  c?: number;
  epsilon?: number;
  rho?: number;
}

/** Draw n curriculum proportion vectors (or nulls for skipped steps). */
export function boundMeltSample(
  step: number,
  n: number,
  seed: number,
  config?: MeltConfigInit,
): Array<number[] | null> {
  return withTempDir((dir) => {
    const args = [
      'melt-sample',
      '--step', String(step),
      '--n', String(n),
      '--seed', String(seed),
    ];
    if (config) {
      const cfgPath = join(dir, 'melt.json');
      writeFileSync(cfgPath, JSON.stringify(config));
      args.push('--config', cfgPath);
    }
    const stdout = runNative(args);
    return stdout
      .trim()
      .split('\n')
      .map((line) => {
        const obj = JSON.parse(line) as { step: number; p: number[] | null };
        return obj.p;
      });
  });
}
