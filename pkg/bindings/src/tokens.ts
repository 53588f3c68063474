/** Token primitives: marker constants, sanitization, tokenizer handles. */

import { readFileSync } from "node:fs";

import { ClosedHandle, MissingMarker, ParseError, UnknownToken } from "./errors.js";

export type TokenSeq = string[];

export const MASK = "[MASK]";
export const SEPARATOR = "<s>";
export const INSERT = "<Insert>";
export const INSERT_END = "<InsertEnd>";
export const DELETE = "<Delete>";
export const DELETE_END = "<DeleteEnd>";
export const REPLACE_OLD = "<ReplaceOld>";
export const REPLACE_NEW = "<ReplaceNew>";
export const REPLACE_END = "<ReplaceEnd>";
export const KEEP = "<Keep>";
export const KEEP_END = "<KeepEnd>";

export const OPERATION_MARKERS = [
  INSERT, INSERT_END, DELETE, DELETE_END,
  REPLACE_OLD, REPLACE_NEW, REPLACE_END, KEEP, KEEP_END,
] as const;

export const ALL_MARKERS = [MASK, SEPARATOR, ...OPERATION_MARKERS] as const;

const MARKER_SET = new Set<string>(ALL_MARKERS);

function escapeRegExp(s: string): string {
  return s.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");
}

const ESCAPE_RE = new RegExp(ALL_MARKERS.map(escapeRegExp).join("|"), "g");

/** Escape literal marker occurrences so corpus text cannot fake plan syntax. */
export function sanitizeText(text: string): string {
  return text.replace(ESCAPE_RE, (m) => m.replace(/[<>[\]]/g, (c) => `\\${c}`));
}

export type TokenizerKind = "whitespace" | "bpe";

/** Opaque handle over a loaded tokenizer; invalid after close(). */
export class TokenizerHandle {
  readonly kind: TokenizerKind;
  readonly vocab: Map<string, number>;
  readonly merges: ReadonlyArray<readonly [string, string]>;
  private closed = false;

  constructor(kind: TokenizerKind, vocab?: Map<string, number>,
              merges?: ReadonlyArray<readonly [string, string]>) {
    this.kind = kind;
    this.vocab = vocab ?? new Map();
    this.merges = merges ?? [];
  }

  static whitespace(): TokenizerHandle {
    return new TokenizerHandle("whitespace");
  }

  assertOpen(): void {
    if (this.closed) throw new ClosedHandle();
  }

  close(): void {
    this.closed = true;
  }
}

/** Build a tokenizer from vocabulary text (one token per line, line = id) and
 * optional merges text ("left right" per line, line order = priority). */
export function loadTokenizer(vocabText: string, mergesText?: string): TokenizerHandle {
  const vocab = new Map<string, number>();
  const lines = vocabText.split("\n");
  if (lines.length && lines[lines.length - 1] === "") lines.pop();
  lines.forEach((token, i) => {
    if (!token) throw new ParseError(`empty token at line ${i + 1}`);
    if (vocab.has(token)) throw new ParseError(`duplicate token ${token} at line ${i + 1}`);
    vocab.set(token, i);
  });
  for (const marker of ALL_MARKERS) {
    if (!vocab.has(marker)) throw new MissingMarker(marker);
  }
  if (mergesText === undefined) return new TokenizerHandle("whitespace", vocab);
  const merges: Array<readonly [string, string]> = [];
  mergesText.split("\n").forEach((line, i) => {
    if (!line) return;
    const parts = line.split(" ");
    if (parts.length !== 2 || !parts[0] || !parts[1]) {
      throw new ParseError(`bad merge rule at line ${i + 1}: ${line}`);
    }
    merges.push([parts[0], parts[1]]);
  });
  return new TokenizerHandle("bpe", vocab, merges);
}

export function loadTokenizerFromFiles(vocabPath: string, mergesPath?: string): TokenizerHandle {
  const vocabText = readFileSync(vocabPath, "utf-8");
  const mergesText = mergesPath === undefined ? undefined : readFileSync(mergesPath, "utf-8");
  return loadTokenizer(vocabText, mergesText);
}

function bpeWord(word: string, merges: ReadonlyArray<readonly [string, string]>): string[] {
  let symbols = Array.from(word);
  for (const [left, right] of merges) {
    const merged: string[] = [];
    let i = 0;
    while (i < symbols.length) {
      if (i + 1 < symbols.length && symbols[i] === left && symbols[i + 1] === right) {
        merged.push(left + right);
        i += 2;
      } else {
        merged.push(symbols[i]);
        i += 1;
      }
    }
    symbols = merged;
  }
  return symbols;
}

/** Split raw text into tokens; marker tokens always come out whole. */
export function tokenize(text: string, tok?: TokenizerHandle): TokenSeq {
  const t = tok ?? TokenizerHandle.whitespace();
  t.assertOpen();
  const words = text.split(/\s+/).filter((w) => w.length > 0);
  if (t.kind === "whitespace") return words;
  const out: string[] = [];
  words.forEach((word, i) => {
    if (i > 0) out.push(" ");
    if (MARKER_SET.has(word)) {
      out.push(word);
    } else {
      out.push(...bpeWord(word, t.merges));
    }
  });
  return out;
}

/** Inverse of tokenize for producible token sequences. */
export function detokenize(seq: TokenSeq, tok?: TokenizerHandle): string {
  const t = tok ?? TokenizerHandle.whitespace();
  t.assertOpen();
  if (t.kind === "whitespace") {
    for (const token of seq) {
      if (!token || /\s/.test(token)) throw new UnknownToken(token);
    }
    return seq.join(" ");
  }
  for (const token of seq) {
    if (!token || (token !== " " && /\s/.test(token))) throw new UnknownToken(token);
  }
  return seq.join("");
}
