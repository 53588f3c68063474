import { describe, expect, it } from "vitest";

import {
  ALL_MARKERS,
  ClosedHandle,
  MissingMarker,
  UnknownToken,
  loadTokenizer,
  tokenize,
} from "../src/index.js";

const VOCAB = [...ALL_MARKERS, "l", "o", "w", "lo", "low"].join("\n") + "\n";

describe("tokenizer handles", () => {
  it("use after close throws", () => {
    const tok = loadTokenizer(VOCAB, "l o\nlo w\n");
    expect(tokenize("low", tok)).toEqual(["low"]);
    tok.close();
    expect(() => tokenize("low", tok)).toThrow(ClosedHandle);
  });

  it("independent handles do not interfere", () => {
    const a = loadTokenizer(VOCAB, "l o\n");
    const b = loadTokenizer(VOCAB, "l o\nlo w\n");
    a.close();
    expect(tokenize("low", b)).toEqual(["low"]);
    expect(() => tokenize("low", a)).toThrow(ClosedHandle);
  });

  it("missing marker is rejected", () => {
    const vocab = ALL_MARKERS.filter((m) => m !== "[MASK]").join("\n") + "\n";
    expect(() => loadTokenizer(vocab)).toThrow(MissingMarker);
  });

  it("whitespace detokenize rejects unrealizable tokens", async () => {
    const { detokenize } = await import("../src/index.js");
    expect(() => detokenize(["a b"])).toThrow(UnknownToken);
  });
});
