// Counterexample drafts: an attribute checklist pre-checked with the query
// premise, plus the client-side mirror of the server's violation check.
// This mirror only gates the submit button; the server re-validates every
// rejection and stays authoritative.

import type { QueryPayload } from "./types.js";

export interface Draft {
  readonly universe: string[];
  readonly checked: ReadonlySet<string>;
}

export function createDraft(universe: string[], query: QueryPayload): Draft {
  return { universe, checked: new Set(query.premise) };
}

export function toggleAttribute(draft: Draft, label: string): Draft {
  if (!draft.universe.includes(label)) return draft;
  const checked = new Set(draft.checked);
  if (checked.has(label)) {
    checked.delete(label);
  } else {
    checked.add(label);
  }
  return { universe: draft.universe, checked };
}

export interface DraftStatus {
  containsPremise: boolean;
  avoidsConclusion: boolean;
  /** Both conditions hold: the draft genuinely violates the query. */
  submittable: boolean;
  missingPremise: string[];
}

export function draftStatus(draft: Draft, query: QueryPayload): DraftStatus {
  const missingPremise = query.premise.filter((label) => !draft.checked.has(label));
  const containsPremise = missingPremise.length === 0;
  // Falsum is never contained in an assignment, so any premise superset violates.
  const avoidsConclusion =
    query.conclusion === "bottom" ||
    query.conclusion.some((label) => !draft.checked.has(label));
  return {
    containsPremise,
    avoidsConclusion,
    submittable: containsPremise && avoidsConclusion,
    missingPremise,
  };
}

export function draftLabels(draft: Draft): string[] {
  // universe order keeps payloads deterministic
  return draft.universe.filter((label) => draft.checked.has(label));
}
