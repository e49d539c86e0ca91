/** Thin typed client over the triage HTTP API.
 *
 * Every method maps to exactly one endpoint and returns the decoded JSON
 * body. No scoring, ranking, or similarity math happens here; the server
 * owns all of that and this client only relays its answers.
 */

import type {
  BanResponse,
  PredictionRow,
  RepFilterEntry,
  TriageStats,
  UnbanResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly path: string,
    detail: string,
  ) {
    super(`${status} on ${path}: ${detail}`);
    this.name = "ApiError";
  }
}

export interface ListOptions {
  minScore?: number;
  includeBanned?: boolean;
  rep?: string;
}

export class TriageApi {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly base: string = "",
    fetchFn?: FetchLike,
  ) {
    // Bind so a bare window.fetch reference keeps its receiver.
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  async listPredictions(opts: ListOptions = {}): Promise<PredictionRow[]> {
    const params = new URLSearchParams();
    if (opts.minScore !== undefined) params.set("min_score", String(opts.minScore));
    if (opts.includeBanned) params.set("include_banned", "true");
    if (opts.rep !== undefined) params.set("rep", opts.rep);
    const query = params.toString();
    return this.request<PredictionRow[]>(
      "GET",
      `/api/predictions${query ? `?${query}` : ""}`,
    );
  }

  async listRepresentations(): Promise<RepFilterEntry[]> {
    return this.request<RepFilterEntry[]>("GET", "/api/representations");
  }

  async ban(id: string): Promise<BanResponse> {
    return this.request<BanResponse>(
      "POST",
      `/api/predictions/${encodeURIComponent(id)}/ban`,
    );
  }

  async banSimilar(id: string, alpha: number): Promise<BanResponse> {
    return this.request<BanResponse>(
      "POST",
      `/api/predictions/${encodeURIComponent(id)}/ban-similar`,
      { alpha },
    );
  }

  async unban(id: string): Promise<UnbanResponse> {
    return this.request<UnbanResponse>(
      "POST",
      `/api/predictions/${encodeURIComponent(id)}/unban`,
    );
  }

  async toggleRepresentation(rep: string, hidden: boolean): Promise<void> {
    await this.request<unknown>("POST", "/api/representations/toggle", {
      rep,
      hidden,
    });
  }

  async stats(): Promise<TriageStats> {
    return this.request<TriageStats>("GET", "/api/stats");
  }

  async exportFinal(): Promise<unknown> {
    return this.request<unknown>("GET", "/api/export");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchFn(this.base + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const parsed = (await resp.json()) as { detail?: unknown };
        if (parsed && parsed.detail !== undefined) detail = String(parsed.detail);
      } catch {
        // non-JSON error body, keep the status text
      }
      throw new ApiError(resp.status, path, detail);
    }
    return (await resp.json()) as T;
  }
}
