// End-to-end against the real Python service: a scripted expert answers
// dataset-faithfully through the client layer and must reproduce the CLI
// run's formula for the same seed; non-violating drafts submitted by a
// tampered client (skipping the mirror check) must all bounce with 400.

import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, SessionClient } from "../src/api.js";
import { createDraft, draftStatus } from "../src/draft.js";
import type { QueryPayload, SessionView } from "../src/types.js";

const PORT = 8480 + (process.pid % 400);
const BASE = `http://127.0.0.1:${PORT}`;
const REPO_ROOT = join(__dirname, "..", "..");

const TOY_CXT = "B\ntoy\n4\n4\no1\no2\no3\no4\nw\nx\ny\nz\nXX..\nX.X.\nX...\n..XX\n";
const TOY_ROWS: string[][] = [["w", "x"], ["w", "y"], ["w"], ["y", "z"]];

let server: ChildProcess | null = null;
let workdir = "";

function firstViolatingRow(query: QueryPayload): string[] | null {
  for (const row of TOY_ROWS) {
    const rowSet = new Set(row);
    if (!query.premise.every((a) => rowSet.has(a))) continue;
    if (query.conclusion === "bottom") return row;
    if (!query.conclusion.every((a) => rowSet.has(a))) return row;
  }
  return null;
}

async function waitForServer(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${BASE}/sessions/probe`);
      if (response.status === 404) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "hornpac-ui-e2e-"));
  writeFileSync(join(workdir, "toy.cxt"), TOY_CXT);
  server = spawn(
    "python3",
    ["-m", "hornpac.cli", "serve", "--host", "127.0.0.1", "--port", String(PORT)],
    { cwd: REPO_ROOT, stdio: "ignore" },
  );
  await waitForServer();
}, 30_000);

afterAll(() => {
  server?.kill();
  rmSync(workdir, { recursive: true, force: true });
});

describe("scripted expert session against the live service", () => {
  it("reproduces the CLI formula for the same seed", async () => {
    const reference = join(workdir, "reference.jsonl");
    execFileSync("python3", [
      "-m", "hornpac.cli", "learn",
      "--data", join(workdir, "toy.cxt"),
      "--epsilon", "0.1", "--delta", "0.1", "--seed", "21",
      "--out", reference,
    ], { cwd: REPO_ROOT });
    const expected = readFileSync(reference, "utf-8")
      .trim()
      .split("\n")
      .map((line) => JSON.parse(line));

    const client = new SessionClient(BASE);
    let view: SessionView = await client.createSession({
      epsilon: 0.1,
      delta: 0.1,
      seed: 21,
      universe: ["w", "x", "y", "z"],
      answering: "manual",
      cache_counterexamples: false,
      cache_confirmed: false,
    });
    let answers = 0;
    while (view.pending_query !== null) {
      const witness = firstViolatingRow(view.pending_query);
      view = witness === null
        ? await client.accept(view.id)
        : await client.reject(view.id, witness);
      answers += 1;
      if (answers > 20_000) throw new Error("scripted session did not converge");
    }
    expect(view.state).toBe("finished");
    const got = view.hypothesis.map(({ premise, conclusion }) => ({ premise, conclusion }));
    expect(got).toEqual(expected);
  }, 120_000);

  it("rejects every non-violating draft a tampered client submits", async () => {
    const client = new SessionClient(BASE);
    const view = await client.createSession({
      epsilon: 0.5,
      delta: 0.5,
      seed: 9,
      universe: ["w", "x", "y", "z"],
      answering: "manual",
      cache_counterexamples: false,
      cache_confirmed: false,
    });
    const query = view.pending_query;
    expect(query).not.toBeNull();
    const universe = ["w", "x", "y", "z"];
    let tested = 0;
    let falseAccepts = 0;
    for (let mask = 0; mask < 16 && tested < 200; mask++) {
      const labels = universe.filter((_, i) => mask & (1 << i));
      const draft = { universe, checked: new Set(labels) };
      const status = draftStatus(draft, query!);
      if (status.submittable) continue; // the UI would block these anyway
      tested += 1;
      // tampered client: bypass the mirror and submit regardless
      const outcome = await client.reject(view.id, labels).catch((error) => error);
      if (outcome instanceof ApiError) {
        expect(outcome.status).toBe(400);
      } else {
        falseAccepts += 1;
      }
    }
    expect(tested).toBeGreaterThan(0);
    expect(falseAccepts).toBe(0);
    // the pending query survived all invalid submissions
    const after = await client.getQuery(view.id);
    expect(after.query).toEqual(query);
  }, 60_000);

  it("draft pre-checking matches the pending query premise", async () => {
    const client = new SessionClient(BASE);
    const view = await client.createSession({
      epsilon: 0.9,
      delta: 0.9,
      seed: 3,
      universe: ["w", "x", "y", "z"],
      answering: "manual",
    });
    if (view.pending_query === null) return; // single-sample round may pass
    const draft = createDraft(view.universe, view.pending_query);
    for (const label of view.pending_query.premise) {
      expect(draft.checked.has(label)).toBe(true);
    }
  }, 30_000);
});
