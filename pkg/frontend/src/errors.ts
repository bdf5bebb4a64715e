/** Typed errors mirroring the native tool's exit-code contract. */

/** Input violated a documented precondition (native exit code 2). */
export class ValidationError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'ValidationError';
  }
}

/** Bytes or text failed to parse under the declared format (exit code 1). */
export class FormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'FormatError';
  }
}

/** The native process itself failed to run. */
export class NativeToolError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'NativeToolError';
  }
}
