/** Application store: catalog snapshot, view state, selection propagation.
 *
 * Views render from this store and never mutate catalog data; every
 * selection resolves through POST /api/selection so all views highlight
 * exactly the server-confirmed id set. A failed propagation keeps the
 * previous state untouched.
 */

import { ApiClient, StaleResponse } from "./api.js";
import type {
  CatalogRecord,
  RankedResult,
  SelectionPayload,
  Selector,
  SimilarityGraph,
  Point,
} from "./types.js";

export type OriginView = "map" | "timeline" | "network" | "sketch" | "none";

export interface ViewState {
  selectedIds: ReadonlySet<string>;
  selectionPayload: SelectionPayload | null;
  originView: OriginView;
  activeKind: string;
  lastQuery: RankedResult | null;
  lastError: string | null;
}

type Listener = (state: ViewState) => void;

export class AppState {
  records: CatalogRecord[] = [];
  recordsById = new Map<string, CatalogRecord>();
  graph: SimilarityGraph | null = null;

  private state: ViewState = {
    selectedIds: new Set(),
    selectionPayload: null,
    originView: "none",
    activeKind: "hog",
    lastQuery: null,
    lastError: null,
  };
  private listeners: Listener[] = [];

  constructor(readonly api: ApiClient) {}

  get viewState(): ViewState {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  private emit(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const fn of this.listeners) fn(this.state);
  }

  async load(graphKind = "hog", graphK = 6): Promise<void> {
    this.records = await this.api.listObjects();
    this.recordsById = new Map(this.records.map((r) => [r.id, r]));
    this.graph = await this.api.getGraph(graphKind, graphK);
    this.emit({ activeKind: graphKind });
  }

  /** Resolve a selector on the server and highlight the returned ids in
   * every view. The origin view keeps its brushing affordance; on any
   * failure the previous selection survives. */
  async propagateSelection(origin: OriginView, selector: Selector): Promise<ViewState> {
    try {
      const payload = await this.api.postSelection(selector);
      const ids = payload.selected_ids.filter((id) => this.recordsById.has(id));
      this.emit({
        selectedIds: new Set(ids),
        selectionPayload: payload,
        originView: origin,
        lastError: null,
      });
    } catch (err) {
      if (!(err instanceof StaleResponse)) {
        this.emit({ lastError: String(err) });
      }
    }
    return this.state;
  }

  async clearSelection(origin: OriginView): Promise<ViewState> {
    return this.propagateSelection(origin, { ids: [] });
  }

  /** Sketch-to-query round trip; results land in lastQuery for the strip. */
  async sketchQuery(
    polylines: Point[][],
    canvas: [number, number],
    k: number,
    kind?: string,
  ): Promise<RankedResult | null> {
    try {
      const result = await this.api.querySketch(
        polylines,
        canvas,
        kind ?? this.state.activeKind,
        k,
      );
      this.emit({ lastQuery: result, lastError: null });
      return result;
    } catch (err) {
      if (!(err instanceof StaleResponse)) {
        this.emit({ lastError: String(err) });
      }
      return null;
    }
  }

  /** Clicking a ranked thumbnail selects that object everywhere. */
  async selectQueryResult(id: string): Promise<ViewState> {
    return this.propagateSelection("sketch", { ids: [id] });
  }
}
