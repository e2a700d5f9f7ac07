import { describe, expect, it } from "vitest";

import { createDraft, draftLabels, draftStatus, toggleAttribute } from "../src/draft.js";
import type { QueryPayload } from "../src/types.js";

const UNIVERSE = ["hair", "feathers", "eggs", "milk"];

function query(premise: string[], conclusion: string[] | "bottom"): QueryPayload {
  return {
    premise,
    conclusion,
    conclusion_display: conclusion,
    restricted: true,
    round: 1,
    sample: 1,
    budget: 10,
    purpose: "sample-membership",
  };
}

describe("counterexample drafts", () => {
  it("pre-checks the premise", () => {
    const draft = createDraft(UNIVERSE, query(["hair", "milk"], ["eggs"]));
    expect(draftLabels(draft)).toEqual(["hair", "milk"]);
  });

  it("submit is enabled only for genuine violations", () => {
    const q = query(["hair"], ["eggs"]);
    let draft = createDraft(UNIVERSE, q);
    // contains premise, misses conclusion: submittable
    expect(draftStatus(draft, q).submittable).toBe(true);
    // adding the conclusion makes it a non-violation
    draft = toggleAttribute(draft, "eggs");
    expect(draftStatus(draft, q).submittable).toBe(false);
    expect(draftStatus(draft, q).avoidsConclusion).toBe(false);
    // dropping the premise also blocks submission
    draft = toggleAttribute(draft, "eggs");
    draft = toggleAttribute(draft, "hair");
    const status = draftStatus(draft, q);
    expect(status.submittable).toBe(false);
    expect(status.missingPremise).toEqual(["hair"]);
  });

  it("falsum conclusions are violated by any premise superset", () => {
    const q = query(["hair"], "bottom");
    const draft = createDraft(UNIVERSE, q);
    expect(draftStatus(draft, q).submittable).toBe(true);
  });

  it("toggling unknown labels is a no-op", () => {
    const q = query([], ["eggs"]);
    const draft = createDraft(UNIVERSE, q);
    expect(toggleAttribute(draft, "wings")).toBe(draft);
  });

  it("labels come out in universe order", () => {
    const q = query([], ["eggs"]);
    let draft = createDraft(UNIVERSE, q);
    draft = toggleAttribute(draft, "milk");
    draft = toggleAttribute(draft, "hair");
    expect(draftLabels(draft)).toEqual(["hair", "milk"]);
  });

  it("mirror agrees with the protocol predicate on fuzzed drafts", () => {
    // reference predicate straight from PROTOCOL.md
    const reference = (checked: Set<string>, q: QueryPayload): boolean => {
      const hasPremise = q.premise.every((a) => checked.has(a));
      const avoids =
        q.conclusion === "bottom" || q.conclusion.some((a) => !checked.has(a));
      return hasPremise && avoids;
    };
    let seed = 1234567;
    const rand = () => {
      // xorshift: deterministic fuzz without dependencies
      seed ^= seed << 13;
      seed ^= seed >>> 17;
      seed ^= seed << 5;
      return (seed >>> 0) / 2 ** 32;
    };
    for (let trial = 0; trial < 2000; trial++) {
      const premise = UNIVERSE.filter(() => rand() < 0.3);
      const conclusion: string[] | "bottom" =
        rand() < 0.2 ? "bottom" : UNIVERSE.filter(() => rand() < 0.4);
      const q = query(premise, conclusion);
      let draft = createDraft(UNIVERSE, q);
      for (const label of UNIVERSE) {
        if (rand() < 0.5) draft = toggleAttribute(draft, label);
      }
      expect(draftStatus(draft, q).submittable).toBe(
        reference(new Set(draftLabels(draft)), q),
      );
    }
  });
});
