/** FMAT feature-matrix codec (little-endian, float32 payload).
 *
 * Layout: magic 'FMAT' | version u16=1 | flags u16=0 | T u64 | d u64 |
 * base_rate_hz f64 | T*d row-major float32.
 */

import { FormatError, ValidationError } from './errors.js';

export interface FeatureMatrix {
  rows: number;
  cols: number;
  baseRateHz: number;
  /** Row-major, rows*cols entries. */
  data: Float32Array;
}

const MAGIC = 0x54414d46; // 'FMAT' read as little-endian u32
const HEADER_BYTES = 32;

export function featureMatrix(
  data: Float32Array | number[],
  rows: number,
  cols: number,
  baseRateHz = 80,
): FeatureMatrix {
  const arr = data instanceof Float32Array ? data : Float32Array.from(data);
  if (rows < 1 || cols < 1 || arr.length !== rows * cols) {
    throw new ValidationError(
      `data length ${arr.length} does not match ${rows}x${cols}`,
    );
  }
  for (const v of arr) {
    if (!Number.isFinite(v)) {
      throw new ValidationError('features contain NaN or infinite entries');
    }
  }
  return { rows, cols, baseRateHz, data: arr };
}

export function encodeFmat(m: FeatureMatrix): Uint8Array {
  const out = new Uint8Array(HEADER_BYTES + m.data.length * 4);
  const view = new DataView(out.buffer);
  view.setUint32(0, MAGIC, true);
  view.setUint16(4, 1, true); // version
  view.setUint16(6, 0, true); // flags
  view.setBigUint64(8, BigInt(m.rows), true);
  view.setBigUint64(16, BigInt(m.cols), true);
  view.setFloat64(24, m.baseRateHz, true);
  for (let i = 0; i < m.data.length; i++) {
    view.setFloat32(HEADER_BYTES + 4 * i, m.data[i], true);
  }
  return out;
}

export function decodeFmat(bytes: Uint8Array): FeatureMatrix {
  if (bytes.length < HEADER_BYTES) {
    throw new FormatError(
      `truncated header: need ${HEADER_BYTES} bytes, got ${bytes.length}`,
    );
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  if (view.getUint32(0, true) !== MAGIC) {
    throw new FormatError('bad magic, expected FMAT');
  }
  if (view.getUint16(4, true) !== 1) {
    throw new FormatError(`unsupported version ${view.getUint16(4, true)}`);
  }
  const rows = Number(view.getBigUint64(8, true));
  const cols = Number(view.getBigUint64(16, true));
  const baseRateHz = view.getFloat64(24, true);
  const expected = HEADER_BYTES + rows * cols * 4;
  if (bytes.length !== expected) {
    throw new FormatError(
      `payload size mismatch: expected ${expected} bytes, got ${bytes.length}`,
    );
  }
  const data = new Float32Array(rows * cols);
  for (let i = 0; i < data.length; i++) {
    data[i] = view.getFloat32(HEADER_BYTES + 4 * i, true);
  }
  return { rows, cols, baseRateHz, data };
}
