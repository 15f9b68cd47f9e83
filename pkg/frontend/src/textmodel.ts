/**
 * Source-text model: deterministic word tokenization with UTF-8 byte
 * offsets, and the FNV-1a document fingerprint. Mirrors the engine that
 * produces doc.json, and must agree with it byte for byte.
 */

export interface Token {
  index: number;
  surface: string;
  byteStart: number;
  byteEnd: number;
}

export interface Doc {
  fingerprint: string;
  title: string;
  raw: string;
  tokens: Token[];
}

const JOINERS = new Set(["'", "’", "-"]);
const WORD_CHAR = /^[\p{L}\p{Nd}]$/u;
const LETTER = /^\p{L}$/u;

const FNV_OFFSET = 0xcbf29ce484222325n;
const FNV_PRIME = 0x100000001b3n;
const MASK64 = 0xffffffffffffffffn;

function utf8Length(ch: string): number {
  const cp = ch.codePointAt(0)!;
  if (cp < 0x80) return 1;
  if (cp < 0x800) return 2;
  if (cp < 0x10000) return 3;
  return 4;
}

/** Maximal runs of letters/digits; apostrophe and hyphen only between letters. */
export function tokenize(raw: string): Token[] {
  const chars = Array.from(raw);
  const tokens: Token[] = [];
  let bytePos = 0;
  let i = 0;
  while (i < chars.length) {
    const ch = chars[i];
    if (!WORD_CHAR.test(ch)) {
      bytePos += utf8Length(ch);
      i += 1;
      continue;
    }
    const startChar = i;
    const startByte = bytePos;
    while (i < chars.length) {
      const c = chars[i];
      if (WORD_CHAR.test(c)) {
        bytePos += utf8Length(c);
        i += 1;
        continue;
      }
      if (
        JOINERS.has(c) &&
        i + 1 < chars.length &&
        LETTER.test(chars[i - 1]) &&
        LETTER.test(chars[i + 1])
      ) {
        bytePos += utf8Length(c);
        i += 1;
        continue;
      }
      break;
    }
    tokens.push({
      index: tokens.length,
      surface: chars.slice(startChar, i).join(""),
      byteStart: startByte,
      byteEnd: bytePos,
    });
  }
  return tokens;
}

export function fnv1a64(data: Uint8Array): bigint {
  let h = FNV_OFFSET;
  for (const byte of data) {
    h ^= BigInt(byte);
    h = (h * FNV_PRIME) & MASK64;
  }
  return h;
}

export function normalizeText(raw: string): string {
  if (raw.startsWith("﻿")) raw = raw.slice(1);
  return raw.replace(/\r\n/g, "\n").replace(/\r/g, "\n");
}

export function fingerprint(raw: string): string {
  const bytes = new TextEncoder().encode(normalizeText(raw));
  return fnv1a64(bytes).toString(16).padStart(16, "0");
}

export function buildDocument(text: string, title = ""): Doc {
  const raw = normalizeText(text);
  return { fingerprint: fingerprint(raw), title, raw, tokens: tokenize(raw) };
}

export class SpanRangeError extends Error {}

/** Raw-text substring covering tokens start..end (inclusive). */
export function tokenSlice(doc: Doc, start: number, end: number): string {
  const count = doc.tokens.length;
  if (!(start >= 0 && start < count)) {
    throw new SpanRangeError(`start token index ${start} out of range 0..${count - 1}`);
  }
  if (!(end >= 0 && end < count)) {
    throw new SpanRangeError(`end token index ${end} out of range 0..${count - 1}`);
  }
  if (start > end) {
    throw new SpanRangeError(`start token index ${start} exceeds end index ${end}`);
  }
  const bytes = new TextEncoder().encode(doc.raw);
  return new TextDecoder().decode(
    bytes.slice(doc.tokens[start].byteStart, doc.tokens[end].byteEnd),
  );
}
