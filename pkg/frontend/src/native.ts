/** Spawns the native CLI and maps its exit-code contract to typed errors. */

import { spawnSync } from 'node:child_process';

import { FormatError, NativeToolError, ValidationError } from './errors.js';

/** Command line used to reach the native tool; override with DFRTOK_CLI. */
export function nativeCommand(): string[] {
  const env = process.env.DFRTOK_CLI;
  if (env && env.trim()) return env.trim().split(/\s+/);
  return ['python3', '-m', 'dfrtok.cli'];
}

export function runNative(args: string[]): string {
  const [cmd, ...prefix] = nativeCommand();
  const proc = spawnSync(cmd, [...prefix, ...args], {
    encoding: 'utf8',
    maxBuffer: 1 << 28,
  });
  if (proc.error) {
    throw new NativeToolError(`failed to launch ${cmd}: ${proc.error.message}`);
  }
  if (proc.status === 0) return proc.stdout;
  const message = (proc.stderr || proc.stdout || '').trim().replace(/^error:\s*/, '');
  if (proc.status === 2) throw new ValidationError(message);
  if (proc.status === 1) throw new FormatError(message);
  throw new NativeToolError(`exit code ${proc.status}: ${message}`);
}
