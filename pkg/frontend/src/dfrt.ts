/** DFRT token-stream codec, bit-exact with the native writer.
 *
 * Layout (little-endian): magic 'DFRT' | version u16=1 | K u64 | U u8 |
 * base_rate_hz f64 | count u64 | content plane | duration plane. Planes
 * pack ceil(log2 K)- and ceil(log2 U)-bit fields LSB-first, byte-padded;
 * durations are stored minus one.
 */

import { FormatError, ValidationError } from './errors.js';

export interface TokenStream {
  codes: number[];
  durations: number[];
  K: number;
  U: number;
  baseRateHz: number;
}

const HEADER_BYTES = 31;
const MAGIC = 0x54524644; // 'DFRT' as little-endian u32

export function contentBits(K: number): number {
  return bitLength(K - 1);
}

export function durationBits(U: number): number {
  return bitLength(U - 1);
}

function bitLength(x: number): number {
  let n = 0;
  let v = BigInt(x);
  while (v > 0n) {
    v >>= 1n;
    n += 1;
  }
  return n;
}

function validate(ts: TokenStream): void {
  if (ts.codes.length !== ts.durations.length) {
    throw new ValidationError(
      `${ts.codes.length} codes vs ${ts.durations.length} durations`,
    );
  }
  if (!(ts.K >= 1 && Number.isSafeInteger(ts.K))) {
    throw new ValidationError(`K must be a safe integer >= 1, got ${ts.K}`);
  }
  if (!(ts.U >= 1 && ts.U <= 255)) {
    throw new ValidationError(`U must be in [1, 255], got ${ts.U}`);
  }
  if (!(ts.baseRateHz > 0 && Number.isFinite(ts.baseRateHz))) {
    throw new ValidationError(`base rate must be positive, got ${ts.baseRateHz}`);
  }
  for (const c of ts.codes) {
    if (c < 0 || c >= ts.K) throw new ValidationError(`code ${c} outside [0, ${ts.K})`);
  }
  for (const d of ts.durations) {
    if (d < 1 || d > ts.U) throw new ValidationError(`duration ${d} outside [1, ${ts.U}]`);
  }
}

function packPlane(values: number[], width: number): Uint8Array {
  if (width === 0 || values.length === 0) return new Uint8Array(0);
  let acc = 0n;
  const w = BigInt(width);
  for (let i = 0; i < values.length; i++) {
    acc |= BigInt(values[i]) << (w * BigInt(i));
  }
  const nbytes = Math.ceil((values.length * width) / 8);
  const out = new Uint8Array(nbytes);
  for (let i = 0; i < nbytes; i++) {
    out[i] = Number(acc & 0xffn);
    acc >>= 8n;
  }
  return out;
}

function unpackPlane(
  bytes: Uint8Array,
  width: number,
  count: number,
  what: string,
): number[] {
  if (width === 0 || count === 0) return new Array(count).fill(0);
  let acc = 0n;
  for (let i = bytes.length - 1; i >= 0; i--) {
    acc = (acc << 8n) | BigInt(bytes[i]);
  }
  const w = BigInt(width);
  const mask = (1n << w) - 1n;
  if (acc >> (w * BigInt(count)) !== 0n) {
    throw new FormatError(`nonzero padding bits in ${what} plane`);
  }
  const out: number[] = new Array(count);
  for (let i = 0; i < count; i++) {
    out[i] = Number((acc >> (w * BigInt(i))) & mask);
  }
  return out;
}

export function packTokens(ts: TokenStream): Uint8Array {
  validate(ts);
  const cw = contentBits(ts.K);
  const dw = durationBits(ts.U);
  const content = packPlane(ts.codes, cw);
  const duration = packPlane(ts.durations.map((d) => d - 1), dw);
  const out = new Uint8Array(HEADER_BYTES + content.length + duration.length);
  const view = new DataView(out.buffer);
  view.setUint32(0, MAGIC, true);
  view.setUint16(4, 1, true);
  view.setBigUint64(6, BigInt(ts.K), true);
  view.setUint8(14, ts.U);
  view.setFloat64(15, ts.baseRateHz, true);
  view.setBigUint64(23, BigInt(ts.codes.length), true);
  out.set(content, HEADER_BYTES);
  out.set(duration, HEADER_BYTES + content.length);
  return out;
}

export function unpackTokens(bytes: Uint8Array): TokenStream {
  if (bytes.length < HEADER_BYTES) {
    throw new FormatError(
      `truncated header: need ${HEADER_BYTES} bytes, got ${bytes.length}`,
    );
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  if (view.getUint32(0, true) !== MAGIC) {
    throw new FormatError('bad magic at offset 0, expected DFRT');
  }
  if (view.getUint16(4, true) !== 1) {
    throw new FormatError(`unsupported version ${view.getUint16(4, true)} at offset 4`);
  }
  const bigK = view.getBigUint64(6, true);
  if (bigK > BigInt(Number.MAX_SAFE_INTEGER)) {
    throw new FormatError(`codebook size ${bigK} too large for this client`);
  }
  const K = Number(bigK);
  const U = view.getUint8(14);
  const baseRateHz = view.getFloat64(15, true);
  const count = Number(view.getBigUint64(23, true));
  const cw = contentBits(K);
  const dw = durationBits(U);
  const cLen = Math.ceil((count * cw) / 8);
  const dLen = Math.ceil((count * dw) / 8);
  const expected = HEADER_BYTES + cLen + dLen;
  if (bytes.length < expected) {
    throw new FormatError(
      `truncated planes: expected ${expected} bytes total, got ${bytes.length}`,
    );
  }
  if (bytes.length > expected) {
    throw new FormatError(`${bytes.length - expected} trailing bytes after offset ${expected}`);
  }
  const codes = unpackPlane(
    bytes.subarray(HEADER_BYTES, HEADER_BYTES + cLen), cw, count, 'content',
  );
  const stored = unpackPlane(
    bytes.subarray(HEADER_BYTES + cLen, expected), dw, count, 'duration',
  );
  const durations = stored.map((v) => v + 1);
  codes.forEach((c, i) => {
    if (c >= K) throw new FormatError(`code ${c} >= K=${K} at token ${i}`);
  });
  durations.forEach((d, i) => {
    if (d > U) throw new FormatError(`duration ${d} > U=${U} at token ${i}`);
  });
  return { codes, durations, K, U, baseRateHz };
}
