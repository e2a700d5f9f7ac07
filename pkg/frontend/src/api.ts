// Thin typed client for the session endpoints. Every mutation round-trips;
// the server is the single source of truth and the client stores nothing
// beyond the last response.

import type {
  CreateSessionRequest,
  QueryPayload,
  ReportPayload,
  SessionView,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function parseDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (typeof body?.detail === "string") return body.detail;
    return JSON.stringify(body?.detail ?? body);
  } catch {
    return response.statusText;
  }
}

export class SessionClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      throw new ApiError(response.status, await parseDetail(response));
    }
    return (await response.json()) as T;
  }

  createSession(body: CreateSessionRequest): Promise<SessionView> {
    return this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request(`/sessions/${id}`);
  }

  getQuery(id: string): Promise<{ id: string; state: string; query: QueryPayload | null }> {
    return this.request(`/sessions/${id}/query`);
  }

  accept(id: string): Promise<SessionView> {
    return this.request(`/sessions/${id}/answer`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ accept: true }),
    });
  }

  reject(id: string, counterexample: string[]): Promise<SessionView> {
    return this.request(`/sessions/${id}/answer`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ accept: false, counterexample }),
    });
  }

  report(id: string): Promise<ReportPayload> {
    return this.request(`/sessions/${id}/report`);
  }

  abort(id: string): Promise<SessionView> {
    return this.request(`/sessions/${id}/abort`, { method: "POST" });
  }
}
