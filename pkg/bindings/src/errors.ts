/** Typed errors mirroring the core toolkit's error codes 1:1. */

export class CoditkitError extends Error {
  readonly code: string;

  constructor(code: string, message: string) {
    super(message);
    this.name = new.target.name;
    this.code = code;
  }
}

export class UnknownToken extends CoditkitError {
  constructor(readonly token: string) {
    super("unknown-token", `token cannot be realized: ${JSON.stringify(token)}`);
  }
}

export class MissingMarker extends CoditkitError {
  constructor(readonly marker: string) {
    super("missing-marker", `vocabulary is missing reserved marker ${marker}`);
  }
}

export class ParseError extends CoditkitError {
  constructor(message: string) {
    super("parse-error", message);
  }
}

export class MalformedPlan extends CoditkitError {
  constructor(readonly position: number, readonly reason: string) {
    super("malformed-plan", `malformed plan at token ${position}: ${reason}`);
  }
}

export class SpanNotFound extends CoditkitError {
  constructor(readonly opIndex: number, detail = "") {
    super("span-not-found",
      `operation ${opIndex}: old span not found${detail ? ` (${detail})` : ""}`);
  }
}

export class AmbiguousInsert extends CoditkitError {
  constructor(readonly opIndex: number) {
    super("ambiguous-insert", `operation ${opIndex}: insert position is ambiguous`);
  }
}

export class SpecOutOfBounds extends CoditkitError {
  constructor(message: string) {
    super("spec-out-of-bounds", message);
  }
}

export class LengthMismatch extends CoditkitError {
  constructor(what: string, left: number, right: number) {
    super("length-mismatch", `${what}: ${left} vs ${right}`);
  }
}

export class ZeroLength extends CoditkitError {
  constructor(message: string) {
    super("zero-length", message);
  }
}

export class MissingCrossScore extends CoditkitError {
  constructor(readonly index: number) {
    super("missing-cross-score", `candidate ${index} has no cross-model score`);
  }
}

export class ClosedHandle extends CoditkitError {
  constructor() {
    super("closed-handle", "tokenizer handle was closed");
  }
}
