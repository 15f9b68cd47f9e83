/**
 * Porter suffix-stripping stemmer, the same frozen variant the engine
 * ships (length <= 2 unchanged, bli->ble, logi->log). Lowercase ASCII in,
 * stem out; the parity test vectors pin the behavior.
 */

const VOWELS = "aeiou";

function isConsonant(word: string, i: number): boolean {
  const ch = word[i];
  if (VOWELS.includes(ch)) return false;
  if (ch === "y") return i === 0 || !isConsonant(word, i - 1);
  return true;
}

function measure(stem: string): number {
  let m = 0;
  let prevVowel = false;
  for (let i = 0; i < stem.length; i++) {
    if (isConsonant(stem, i)) {
      if (prevVowel) m += 1;
      prevVowel = false;
    } else {
      prevVowel = true;
    }
  }
  return m;
}

function hasVowel(stem: string): boolean {
  for (let i = 0; i < stem.length; i++) if (!isConsonant(stem, i)) return true;
  return false;
}

function endsDoubleConsonant(word: string): boolean {
  const n = word.length;
  return n >= 2 && word[n - 1] === word[n - 2] && isConsonant(word, n - 1);
}

function endsCvc(word: string): boolean {
  const n = word.length;
  if (n < 3) return false;
  if (!(isConsonant(word, n - 1) && !isConsonant(word, n - 2) && isConsonant(word, n - 3))) {
    return false;
  }
  return !"wxy".includes(word[n - 1]);
}

type Rule = [suffix: string, replacement: string];

// Nested suffixes listed longest first so the longest match wins; if its
// measure condition fails the whole step is a no-op.
const STEP2_RULES: Rule[] = [
  ["ational", "ate"], ["tional", "tion"], ["enci", "ence"], ["anci", "ance"],
  ["izer", "ize"], ["bli", "ble"], ["alli", "al"], ["entli", "ent"],
  ["eli", "e"], ["ousli", "ous"], ["ization", "ize"], ["ation", "ate"],
  ["ator", "ate"], ["alism", "al"], ["iveness", "ive"], ["fulness", "ful"],
  ["ousness", "ous"], ["aliti", "al"], ["iviti", "ive"], ["biliti", "ble"],
  ["logi", "log"],
];

const STEP3_RULES: Rule[] = [
  ["icate", "ic"], ["ative", ""], ["alize", "al"], ["iciti", "ic"],
  ["ical", "ic"], ["ful", ""], ["ness", ""],
];

const STEP4_SUFFIXES = [
  "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
  "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
];

function replaceLongest(word: string, rules: Rule[], minMeasure: number): string {
  for (const [suffix, replacement] of rules) {
    if (word.endsWith(suffix)) {
      const stem = word.slice(0, word.length - suffix.length);
      if (measure(stem) > minMeasure) return stem + replacement;
      return word;
    }
  }
  return word;
}

function step1a(word: string): string {
  if (word.endsWith("sses")) return word.slice(0, -2);
  if (word.endsWith("ies")) return word.slice(0, -2);
  if (word.endsWith("s") && !word.endsWith("ss")) return word.slice(0, -1);
  return word;
}

function step1b(word: string): string {
  if (word.endsWith("eed")) {
    return measure(word.slice(0, -3)) > 0 ? word.slice(0, -1) : word;
  }
  if (word.endsWith("ed") && hasVowel(word.slice(0, -2))) {
    word = word.slice(0, -2);
  } else if (word.endsWith("ing") && hasVowel(word.slice(0, -3))) {
    word = word.slice(0, -3);
  } else {
    return word;
  }
  if (word.endsWith("at") || word.endsWith("bl") || word.endsWith("iz")) {
    return word + "e";
  }
  if (endsDoubleConsonant(word) && !"lsz".includes(word[word.length - 1])) {
    return word.slice(0, -1);
  }
  if (measure(word) === 1 && endsCvc(word)) return word + "e";
  return word;
}

function step1c(word: string): string {
  if (word.endsWith("y") && hasVowel(word.slice(0, -1))) {
    return word.slice(0, -1) + "i";
  }
  return word;
}

function step4(word: string): string {
  for (const suffix of STEP4_SUFFIXES) {
    if (word.endsWith(suffix)) {
      const stem = word.slice(0, word.length - suffix.length);
      if (suffix === "ion" && !(stem.endsWith("s") || stem.endsWith("t"))) {
        return word;
      }
      return measure(stem) > 1 ? stem : word;
    }
  }
  return word;
}

function step5(word: string): string {
  if (word.endsWith("e")) {
    const m = measure(word.slice(0, -1));
    if (m > 1 || (m === 1 && !endsCvc(word.slice(0, -1)))) {
      word = word.slice(0, -1);
    }
  }
  if (word.endsWith("ll") && measure(word.slice(0, -1)) > 1) {
    word = word.slice(0, -1);
  }
  return word;
}

export function porterStem(word: string): string {
  if (word.length <= 2) return word;
  word = step1a(word);
  word = step1b(word);
  word = step1c(word);
  word = replaceLongest(word, STEP2_RULES, 0);
  word = replaceLongest(word, STEP3_RULES, 0);
  word = step4(word);
  word = step5(word);
  return word;
}
