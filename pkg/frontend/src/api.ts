/** Thin HTTP client over the session API. */

import type { ClientView, LearnerAction } from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = fetch,
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      let code = "error";
      let message = response.statusText;
      try {
        const body = (await response.json()) as { code?: string; message?: string };
        code = body.code ?? code;
        message = body.message ?? message;
      } catch {
        /* non-JSON error body: keep the status text */
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  createSession(scenario: string): Promise<{ id: string; view: ClientView }> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({ scenario }),
    });
  }

  getView(sessionId: string): Promise<ClientView> {
    return this.request(`/sessions/${sessionId}`);
  }

  applyAction(sessionId: string, action: LearnerAction): Promise<ClientView> {
    return this.request(`/sessions/${sessionId}/actions`, {
      method: "POST",
      body: JSON.stringify(action),
    });
  }

  logUrl(sessionId: string, format: "jsonl" | "csv" = "jsonl"): string {
    return `${this.baseUrl}/sessions/${sessionId}/log?format=${format}`;
  }

  async fetchLog(sessionId: string, format: "jsonl" | "csv" = "jsonl"): Promise<string> {
    const response = await this.fetchFn(this.logUrl(sessionId, format));
    if (!response.ok) {
      throw new ApiError(response.status, "error", response.statusText);
    }
    return response.text();
  }
}
