// Change detection between successive hypothesis snapshots, for row
// highlighting. A refinement either rewrites rules in place (premise or
// conclusion shrinks) or appends one rule, so index-wise comparison is
// exactly right.

import type { ImplicationPayload, LogRecord } from "./types.js";

export type RowChange = "unchanged" | "changed" | "appended";

function sameImplication(a: ImplicationPayload, b: ImplicationPayload): boolean {
  if (a.premise.length !== b.premise.length) return false;
  if (a.premise.some((label, i) => label !== b.premise[i])) return false;
  if (a.conclusion === "bottom" || b.conclusion === "bottom") {
    return a.conclusion === b.conclusion;
  }
  return (
    a.conclusion.length === b.conclusion.length &&
    a.conclusion.every((label, i) => label === (b.conclusion as string[])[i])
  );
}

export function diffHypothesis(
  previous: ImplicationPayload[],
  current: ImplicationPayload[],
): RowChange[] {
  return current.map((imp, i) => {
    if (i >= previous.length) return "appended";
    return sameImplication(previous[i]!, imp) ? "unchanged" : "changed";
  });
}

/** Rules the expert explicitly confirmed during this session, by identity. */
export function confirmedKeys(log: LogRecord[]): Set<string> {
  const keys = new Set<string>();
  for (const record of log) {
    if (record.type !== "answer" || !record.answer?.valid || !record.query) continue;
    keys.add(implicationKey(record.query));
  }
  return keys;
}

export function implicationKey(imp: ImplicationPayload): string {
  const conclusion =
    imp.conclusion === "bottom" ? "⊥" : imp.conclusion.join(",");
  return `${imp.premise.join(",")}=>${conclusion}`;
}
