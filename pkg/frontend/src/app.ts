// DOM wiring: the setup form, the answer flow, and interval polling.
// One active session per tab; every mutation round-trips to the server and
// the screen re-renders from the response snapshot alone.

import { ApiError, SessionClient } from "./api.js";
import { createDraft, draftLabels, draftStatus, toggleAttribute, type Draft } from "./draft.js";
import { confirmedKeys, diffHypothesis, implicationKey, type RowChange } from "./diff.js";
import {
  escapeHtml,
  renderCounts,
  renderHypothesis,
  renderLog,
  renderProgress,
  renderQuery,
  renderStateBadge,
} from "./render.js";
import type { ImplicationPayload, SessionView } from "./types.js";

const POLL_INTERVAL_MS = 2000;

interface AppState {
  view: SessionView | null;
  previousHypothesis: ImplicationPayload[];
  changes: RowChange[];
  draft: Draft | null;
  drafting: boolean;
  error: string;
}

export class App {
  private state: AppState = {
    view: null,
    previousHypothesis: [],
    changes: [],
    draft: null,
    drafting: false,
    error: "",
  };
  private timer: number | undefined;

  constructor(
    private readonly client: SessionClient,
    private readonly root: Document,
  ) {}

  bind(): void {
    const form = this.root.getElementById("setup-form") as HTMLFormElement | null;
    form?.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.createSession(new FormData(form));
    });
    this.root.getElementById("accept")?.addEventListener("click", () => {
      void this.accept();
    });
    this.root.getElementById("reject")?.addEventListener("click", () => {
      this.startDraft();
    });
    this.root.getElementById("submit-draft")?.addEventListener("click", () => {
      void this.submitDraft();
    });
    this.root.getElementById("cancel-draft")?.addEventListener("click", () => {
      this.state.drafting = false;
      this.state.draft = null;
      this.render();
    });
    this.root.getElementById("abort")?.addEventListener("click", () => {
      void this.abort();
    });
  }

  private async createSession(form: FormData): Promise<void> {
    const epsilon = Number(form.get("epsilon"));
    const delta = Number(form.get("delta"));
    if (!(epsilon > 0 && epsilon <= 1) || !(delta > 0 && delta <= 1)) {
      this.state.error = "epsilon and delta must lie in (0, 1]";
      this.render();
      return; // invalid input never leaves the browser
    }
    const universeText = String(form.get("universe") ?? "").trim();
    const dataset = String(form.get("dataset") ?? "").trim();
    const body: Record<string, unknown> = {
      epsilon,
      delta,
      mode: String(form.get("mode") ?? "approx"),
      seed: Number(form.get("seed") ?? 0),
      valid_hypothesis: form.get("valid_hypothesis") === "on",
    };
    if (universeText) {
      body["universe"] = universeText.split(",").map((s) => s.trim()).filter(Boolean);
    }
    if (dataset) {
      body["dataset"] = dataset;
      body["answering"] = form.get("hybrid") === "on" ? "hybrid" : "auto";
    } else {
      body["answering"] = "manual";
    }
    try {
      const view = await this.client.createSession(body as never);
      this.adopt(view);
      this.schedulePolling();
    } catch (error) {
      this.state.error = error instanceof ApiError ? error.detail : String(error);
      this.render();
    }
  }

  private adopt(view: SessionView): void {
    const previous = this.state.view?.hypothesis ?? [];
    this.state.changes = diffHypothesis(previous, view.hypothesis);
    this.state.previousHypothesis = previous;
    this.state.view = view;
    this.state.error = "";
    if (!view.pending_query) {
      this.state.drafting = false;
      this.state.draft = null;
    }
    this.render();
  }

  private async accept(): Promise<void> {
    const view = this.state.view;
    if (!view) return;
    try {
      this.adopt(await this.client.accept(view.id));
    } catch (error) {
      await this.recover(error);
    }
  }

  private startDraft(): void {
    const view = this.state.view;
    if (!view?.pending_query) return;
    this.state.drafting = true;
    this.state.draft = createDraft(view.universe, view.pending_query);
    this.render();
  }

  toggleDraftAttribute(label: string): void {
    if (!this.state.draft) return;
    this.state.draft = toggleAttribute(this.state.draft, label);
    this.render();
  }

  private async submitDraft(): Promise<void> {
    const view = this.state.view;
    const draft = this.state.draft;
    if (!view?.pending_query || !draft) return;
    const status = draftStatus(draft, view.pending_query);
    if (!status.submittable) return; // button should be disabled anyway
    try {
      const next = await this.client.reject(view.id, draftLabels(draft));
      this.state.drafting = false;
      this.state.draft = null;
      this.adopt(next);
    } catch (error) {
      await this.recover(error, /* keepDraft */ true);
    }
  }

  private async abort(): Promise<void> {
    const view = this.state.view;
    if (!view) return;
    try {
      this.adopt(await this.client.abort(view.id));
    } catch (error) {
      await this.recover(error);
    }
  }

  private async recover(error: unknown, keepDraft = false): Promise<void> {
    if (error instanceof ApiError && error.status === 409) {
      // someone else advanced the session: refresh and re-render
      const view = this.state.view;
      if (view) this.adopt(await this.client.getSession(view.id));
      return;
    }
    this.state.error = error instanceof ApiError ? error.detail : String(error);
    if (!keepDraft) {
      this.state.drafting = false;
    }
    this.render();
  }

  private schedulePolling(): void {
    if (this.timer !== undefined) clearInterval(this.timer);
    this.timer = setInterval(() => {
      void this.poll();
    }, POLL_INTERVAL_MS) as unknown as number;
  }

  private async poll(): Promise<void> {
    const view = this.state.view;
    if (!view) return;
    if (view.state === "finished" || view.state === "aborted") return;
    if (this.state.drafting) return; // do not clobber an open draft
    try {
      this.adopt(await this.client.getSession(view.id));
    } catch {
      // transient polling failures are quietly retried
    }
  }

  private set(id: string, html: string): void {
    const node = this.root.getElementById(id);
    if (node) node.innerHTML = html;
  }

  render(): void {
    const view = this.state.view;
    this.set("error", this.state.error ? escapeHtml(this.state.error) : "");
    if (!view) return;
    this.set("state-badge", renderStateBadge(view));
    this.set("progress", renderProgress(view));
    this.set("query", renderQuery(view.pending_query));
    this.set("counts", renderCounts(view));
    this.set(
      "hypothesis",
      renderHypothesis(view.hypothesis, this.state.changes, new Set(), implicationKey),
    );
    const answering = this.root.getElementById("answering");
    if (answering) {
      const show = view.state === "awaiting_answer" && !this.state.drafting;
      (answering as HTMLElement).style.display = show ? "block" : "none";
    }
    const observer = this.root.getElementById("observer-banner");
    if (observer) {
      (observer as HTMLElement).style.display =
        view.answering === "auto" ? "block" : "none";
    }
    this.renderDraft();
    void this.refreshLog();
  }

  private renderDraft(): void {
    const container = this.root.getElementById("draft");
    const view = this.state.view;
    if (!container) return;
    if (!this.state.drafting || !view?.pending_query || !this.state.draft) {
      (container as HTMLElement).style.display = "none";
      return;
    }
    (container as HTMLElement).style.display = "block";
    const draft = this.state.draft;
    const query = view.pending_query;
    const status = draftStatus(draft, query);
    const boxes = view.universe
      .map((label) => {
        const checked = draft.checked.has(label) ? "checked" : "";
        return `<label class="draft-attr"><input type="checkbox" data-label="${escapeHtml(
          label,
        )}" ${checked}/>${escapeHtml(label)}</label>`;
      })
      .join("");
    this.set("draft-checklist", boxes);
    const problems: string[] = [];
    if (!status.containsPremise) {
      problems.push(`missing premise attributes: ${status.missingPremise.join(", ")}`);
    }
    if (!status.avoidsConclusion) {
      problems.push("the draft contains the whole conclusion, so it does not violate the query");
    }
    this.set(
      "draft-validity",
      status.submittable
        ? `<span class="ok">draft violates the query: ready to submit</span>`
        : `<span class="bad">${escapeHtml(problems.join("; "))}</span>`,
    );
    const submit = this.root.getElementById("submit-draft") as HTMLButtonElement | null;
    if (submit) submit.disabled = !status.submittable;
    for (const box of Array.from(
      this.root.querySelectorAll<HTMLInputElement>("#draft-checklist input[type=checkbox]"),
    )) {
      box.addEventListener("change", () => {
        this.toggleDraftAttribute(box.dataset["label"] ?? "");
      });
    }
  }

  private async refreshLog(): Promise<void> {
    const view = this.state.view;
    if (!view) return;
    try {
      const payload = await this.client.report(view.id);
      this.set("log", renderLog(payload.log));
      this.set(
        "hypothesis",
        renderHypothesis(
          view.hypothesis,
          this.state.changes,
          confirmedKeys(payload.log),
          implicationKey,
        ),
      );
    } catch {
      // the log pane is best-effort
    }
  }
}

export function bootstrap(): void {
  const app = new App(new SessionClient(""), document);
  app.bind();
}

if (typeof document !== "undefined" && typeof window !== "undefined") {
  window.addEventListener("DOMContentLoaded", bootstrap);
}
