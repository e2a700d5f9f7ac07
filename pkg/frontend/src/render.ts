// Pure HTML renderers: every view is a deterministic function of fetched
// state. No closure computation happens here or anywhere else client-side.

import type { RowChange } from "./diff.js";
import type {
  ImplicationPayload,
  LogRecord,
  QueryPayload,
  SessionView,
} from "./types.js";

const FALSUM = "⊥";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function chips(labels: string[], kind: string): string {
  if (labels.length === 0) return `<span class="chip chip-empty">{}</span>`;
  return labels
    .map((label) => `<span class="chip chip-${kind}">${escapeHtml(label)}</span>`)
    .join("");
}

function conclusionChips(imp: ImplicationPayload): string {
  if (imp.conclusion === "bottom") {
    return `<span class="chip chip-falsum">${FALSUM}</span>`;
  }
  const display = imp.conclusion_display === "bottom" ? [] : imp.conclusion_display;
  const full = (imp.conclusion as string[]).join(", ");
  return `<span title="full conclusion: {${escapeHtml(full)}}">${chips(
    display,
    "conclusion",
  )}</span>`;
}

export function renderImplication(imp: ImplicationPayload): string {
  return `<span class="implication">${chips(imp.premise, "premise")}` +
    `<span class="arrow">&rarr;</span>${conclusionChips(imp)}</span>`;
}

export function renderQuery(query: QueryPayload | null): string {
  if (query === null) {
    return `<div class="query query-none">no pending query</div>`;
  }
  const kind = query.restricted ? "restricted" : "full";
  return `<div class="query">` +
    `<div class="query-kind">${kind} implication query (${escapeHtml(query.purpose)})</div>` +
    `<div class="query-body">${renderImplication(query)}</div>` +
    `</div>`;
}

export function renderProgress(view: SessionView): string {
  if (view.progress === null) {
    return `<div class="progress">state: ${view.state}</div>`;
  }
  const { round, sample, budget } = view.progress;
  return `<div class="progress">round ${round}, sample ${sample} of ${budget}</div>`;
}

export function renderHypothesis(
  hypothesis: ImplicationPayload[],
  changes: RowChange[],
  confirmed: Set<string>,
  keyOf: (imp: ImplicationPayload) => string,
): string {
  if (hypothesis.length === 0) {
    return `<div class="hypothesis-empty">The hypothesis is empty: every assignment is still admitted.</div>`;
  }
  const rows = hypothesis.map((imp, i) => {
    const change = changes[i] ?? "unchanged";
    const badge = confirmed.has(keyOf(imp))
      ? `<span class="badge badge-confirmed">confirmed</span>`
      : "";
    return `<li class="rule rule-${change}">${renderImplication(imp)}${badge}</li>`;
  });
  return `<ol class="hypothesis">${rows.join("")}</ol>`;
}

export function renderLog(log: LogRecord[], limit = 50): string {
  const answers = log.filter((record) => record.type === "answer");
  const recent = answers.slice(-limit).reverse();
  const rows = recent.map((record) => {
    const verdict = record.answer?.valid
      ? `<span class="verdict verdict-valid">valid</span>`
      : `<span class="verdict verdict-rejected">rejected</span>`;
    const counterexample = record.answer?.counterexample
      ? ` <span class="cex">{${escapeHtml(record.answer.counterexample.join(", "))}}</span>`
      : "";
    const query = record.query ? renderImplication(record.query) : "";
    return `<li class="log-entry log-${record.source}">` +
      `<span class="source">${record.source}</span> ${query} ${verdict}${counterexample}</li>`;
  });
  return `<ul class="timeline">${rows.join("")}</ul>` +
    `<div class="log-count">${answers.length} answered queries</div>`;
}

export function renderCounts(view: SessionView): string {
  const { restricted, full, cache_hits, by_source } = view.queries;
  const sources = Object.entries(by_source)
    .map(([source, count]) => `${source}: ${count}`)
    .join(", ");
  return `<div class="counts">queries: ${restricted + full} ` +
    `(${restricted} restricted, ${full} full), cache hits: ${cache_hits}; ` +
    `answers by source: ${sources}</div>`;
}

export function renderStateBadge(view: SessionView): string {
  const note = view.abort_reason ? ` (${escapeHtml(view.abort_reason)})` : "";
  return `<span class="state state-${view.state}">${view.state}${note}</span>`;
}
