import assert from 'node:assert/strict';
import { test } from 'node:test';

import { contentBits, durationBits, packTokens, unpackTokens } from '../src/dfrt.js';
import { FormatError, ValidationError } from '../src/errors.js';
import { rng } from './util.js';

function randomStream(seed: number, n: number, K = 18225, U = 4) {
  const next = rng(seed);
  return {
    codes: Array.from({ length: n }, () => Math.floor(next() * K)),
    durations: Array.from({ length: n }, () => 1 + Math.floor(next() * U)),
    K,
    U,
    baseRateHz: 80,
  };
}

test('field widths for the production codebook', () => {
  assert.equal(contentBits(18225), 15);
  assert.equal(durationBits(4), 2);
  assert.equal(contentBits(1), 0);
});

test('pack/unpack round-trips randomized streams', () => {
  for (let seed = 0; seed < 20; seed++) {
    const ts = randomStream(seed, seed * 13);
    const back = unpackTokens(packTokens(ts));
    assert.deepEqual(back.codes, ts.codes);
    assert.deepEqual(back.durations, ts.durations);
    assert.equal(back.K, ts.K);
    assert.equal(back.U, ts.U);
    assert.equal(back.baseRateHz, ts.baseRateHz);
  }
});

test('pinned bit layout: 3-bit codes 1,2,3 LSB-first', () => {
  const data = packTokens({
    codes: [1, 2, 3],
    durations: [1, 1, 1],
    K: 8,
    U: 1,
    baseRateHz: 80,
  });
  assert.deepEqual(Array.from(data.subarray(31)), [0b11010001, 0b00000000]);
});

test('rejects malformed bytes', () => {
  const good = packTokens(randomStream(1, 10));
  const badMagic = Uint8Array.from(good);
  badMagic[0] = 0x58;
  assert.throws(() => unpackTokens(badMagic), FormatError);
  assert.throws(() => unpackTokens(good.subarray(0, good.length - 1)), FormatError);
  const trailing = new Uint8Array(good.length + 1);
  trailing.set(good);
  assert.throws(() => unpackTokens(trailing), FormatError);
});

test('rejects invalid streams before writing', () => {
  assert.throws(
    () => packTokens({ codes: [9], durations: [1], K: 4, U: 4, baseRateHz: 80 }),
    ValidationError,
  );
  assert.throws(
    () => packTokens({ codes: [1], durations: [0], K: 4, U: 4, baseRateHz: 80 }),
    ValidationError,
  );
});
