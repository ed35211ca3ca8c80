/** Typed client for the catalog service.
 *
 * Latest-wins: each logical endpoint keeps a monotonically increasing
 * ticket; a response is surfaced only when its ticket is still the newest
 * for that endpoint, so a stale in-flight request can never overwrite a
 * newer one.
 */

import type {
  CatalogRecord,
  RankedResult,
  SelectionPayload,
  Selector,
  SimilarityGraph,
  Point,
} from "./types.js";

export class StaleResponse extends Error {
  constructor(endpoint: string) {
    super(`superseded request for ${endpoint}`);
  }
}

export class ApiClient {
  private tickets = new Map<string, number>();

  constructor(
    readonly base: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private take(endpoint: string): number {
    const next = (this.tickets.get(endpoint) ?? 0) + 1;
    this.tickets.set(endpoint, next);
    return next;
  }

  private fresh(endpoint: string, ticket: number): boolean {
    return this.tickets.get(endpoint) === ticket;
  }

  private async request<T>(endpoint: string, path: string, init?: RequestInit): Promise<T> {
    const ticket = this.take(endpoint);
    const resp = await this.fetchImpl(this.base + path, init);
    if (!this.fresh(endpoint, ticket)) {
      throw new StaleResponse(endpoint);
    }
    if (!resp.ok) {
      let detail = `${resp.status}`;
      try {
        const body = (await resp.json()) as { error?: string; code?: string };
        if (body.error) detail = `${body.code ?? resp.status}: ${body.error}`;
      } catch {
        /* non-JSON error body */
      }
      throw new Error(detail);
    }
    return (await resp.json()) as T;
  }

  listObjects(): Promise<CatalogRecord[]> {
    return this.request("objects", "/api/objects");
  }

  getGraph(kind: string, k: number): Promise<SimilarityGraph> {
    return this.request("graph", `/api/graph?kind=${encodeURIComponent(kind)}&k=${k}`);
  }

  postSelection(selector: Selector): Promise<SelectionPayload> {
    return this.request("selection", "/api/selection", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ selector }),
    });
  }

  querySketch(
    polylines: Point[][],
    canvas: [number, number],
    kind: string,
    k: number,
  ): Promise<RankedResult> {
    return this.request("query/sketch", "/api/query/sketch", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ polylines, canvas, kind, k }),
    });
  }

  imageUrl(id: string): string {
    return `${this.base}/api/objects/${encodeURIComponent(id)}/image`;
  }
}
