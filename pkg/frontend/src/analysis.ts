/**
 * Legible text analysis mirrored from the engine: stems, normalized edit
 * distance, related-token search, and single-linkage group suggestions.
 */

import { porterStem } from "./porter";
import { Doc } from "./textmodel";

export const DEFAULT_SIMILARITY_THRESHOLD = 0.8;
export const DEFAULT_SUGGESTION_THRESHOLD = 0.75;

/** Stem of the lowercased word; only pure ASCII words are stripped. */
export function stem(word: string): string {
  const lowered = word.toLowerCase();
  return /^[a-z]+$/.test(lowered) ? porterStem(lowered) : lowered;
}

/** Edit distance over Unicode code points. */
export function levenshtein(a: string, b: string): number {
  if (a === b) return 0;
  const ca = Array.from(a);
  const cb = Array.from(b);
  if (ca.length === 0) return cb.length;
  if (cb.length === 0) return ca.length;
  let previous = Array.from({ length: cb.length + 1 }, (_, j) => j);
  for (let i = 1; i <= ca.length; i++) {
    const current = [i];
    for (let j = 1; j <= cb.length; j++) {
      const cost = ca[i - 1] === cb[j - 1] ? 0 : 1;
      current.push(Math.min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost));
    }
    previous = current;
  }
  return previous[cb.length];
}

/** Case-insensitive similarity in [0, 1]; both-empty counts as equal. */
export function similarity(a: string, b: string): number {
  const la = a.toLowerCase();
  const lb = b.toLowerCase();
  const longest = Math.max(Array.from(la).length, Array.from(lb).length);
  if (longest === 0) return 1.0;
  return 1.0 - levenshtein(la, lb) / longest;
}

export type MatchMode = "stem" | "similarity" | "regex";

/** Ascending token indices related to the needle under the given mode. */
export function findRelated(
  doc: Doc,
  mode: MatchMode,
  needle: string,
  threshold = DEFAULT_SIMILARITY_THRESHOLD,
): number[] {
  if (mode === "stem") {
    const target = stem(needle);
    return doc.tokens.filter((t) => stem(t.surface) === target).map((t) => t.index);
  }
  if (mode === "similarity") {
    return doc.tokens
      .filter((t) => similarity(t.surface, needle) >= threshold)
      .map((t) => t.index);
  }
  const pattern = new RegExp(`^(?:${needle})$`, "u");
  return doc.tokens.filter((t) => pattern.test(t.surface)).map((t) => t.index);
}

export interface Suggestion {
  memberIds: number[];
  proposedName: string;
  score: number;
}

/**
 * Single-linkage clusters of annotations with similar stems. Clusters of
 * two or more are reported ordered by smallest member id, named by their
 * lexicographically smallest stem, scored by minimum pairwise similarity.
 */
export function suggestGroups(
  annotations: Array<[id: number, surface: string]>,
  threshold = DEFAULT_SUGGESTION_THRESHOLD,
): Suggestion[] {
  const stems = new Map<number, string>();
  for (const [id, surface] of annotations) stems.set(id, stem(surface));
  const ids = [...stems.keys()].sort((a, b) => a - b);

  const parent = new Map<number, number>(ids.map((id) => [id, id]));
  const find = (x: number): number => {
    while (parent.get(x) !== x) {
      parent.set(x, parent.get(parent.get(x)!)!);
      x = parent.get(x)!;
    }
    return x;
  };

  const pairSim = new Map<string, number>();
  for (let i = 0; i < ids.length; i++) {
    for (let j = i + 1; j < ids.length; j++) {
      const s = similarity(stems.get(ids[i])!, stems.get(ids[j])!);
      pairSim.set(`${ids[i]}:${ids[j]}`, s);
      if (s >= threshold) parent.set(find(ids[i]), find(ids[j]));
    }
  }

  const clusters = new Map<number, number[]>();
  for (const id of ids) {
    const root = find(id);
    clusters.set(root, [...(clusters.get(root) ?? []), id]);
  }

  const suggestions: Suggestion[] = [];
  for (const members of clusters.values()) {
    if (members.length < 2) continue;
    members.sort((a, b) => a - b);
    let score = 1.0;
    let name = stems.get(members[0])!;
    for (let i = 0; i < members.length; i++) {
      const si = stems.get(members[i])!;
      if (si < name) name = si;
      for (let j = i + 1; j < members.length; j++) {
        score = Math.min(score, pairSim.get(`${members[i]}:${members[j]}`)!);
      }
    }
    suggestions.push({ memberIds: members, proposedName: name, score });
  }
  suggestions.sort((a, b) => a.memberIds[0] - b.memberIds[0]);
  return suggestions;
}
