// Payload shapes of the session protocol (see PROTOCOL.md at the repo root).

export type SessionState =
  | "created"
  | "awaiting_answer"
  | "running"
  | "finished"
  | "aborted";

export type AnsweringMode = "auto" | "hybrid" | "manual";

export interface ImplicationPayload {
  premise: string[];
  conclusion: string[] | "bottom";
  conclusion_display: string[] | "bottom";
}

export interface QueryPayload extends ImplicationPayload {
  restricted: boolean;
  round: number;
  sample: number;
  budget: number;
  purpose: string;
}

export interface Progress {
  round: number;
  sample: number;
  budget: number;
}

export interface QueryCounts {
  restricted: number;
  full: number;
  cache_hits: number;
  by_source: Record<string, number>;
}

export interface SessionView {
  id: string;
  state: SessionState;
  answering: AnsweringMode;
  config: Record<string, unknown>;
  universe: string[];
  dataset: string | null;
  pending_query: QueryPayload | null;
  progress: Progress | null;
  hypothesis: ImplicationPayload[];
  implications: number;
  queries: QueryCounts;
  terminated: boolean | null;
  abort_reason: string | null;
}

export interface LogRecord {
  seq: number;
  ts: number;
  type: "created" | "answer" | "finished" | "aborted";
  source?: "human" | "dataset" | "cache";
  query?: QueryPayload;
  answer?: { valid: boolean; counterexample: string[] | null };
  [key: string]: unknown;
}

export interface ReportPayload {
  id: string;
  state: SessionState;
  report: Record<string, unknown> | null;
  log: LogRecord[];
}

export interface CreateSessionRequest {
  epsilon: number;
  delta: number;
  mode?: "approx" | "strong";
  seed?: number;
  universe?: string[];
  dataset?: string;
  answering?: AnsweringMode;
  cache_counterexamples?: boolean;
  cache_confirmed?: boolean;
  valid_hypothesis?: boolean;
  max_counterexamples?: number;
}
