/** Sketch view model: freehand silhouette strokes, ranked query strip,
 * result clicks feeding the shared selection.
 */

import { AppState } from "../state.js";
import type { ViewState } from "../state.js";
import type { Point, RankedItem } from "../types.js";

export interface ResultTile {
  id: string;
  score: number;
  imageUrl: string;
  highlighted: boolean;
}

export class SketchViewModel {
  readonly canvas: [number, number];
  strokes: Point[][] = [];
  private highlighted = new Set<string>();
  private results: RankedItem[] = [];

  constructor(
    private readonly store: AppState,
    canvas: [number, number] = [256, 256],
  ) {
    this.canvas = canvas;
    store.subscribe((s) => this.onState(s));
  }

  private onState(state: ViewState): void {
    this.highlighted = new Set(state.selectedIds);
    if (state.lastQuery) this.results = state.lastQuery.items;
  }

  highlightedIds(): string[] {
    return [...this.highlighted].sort();
  }

  addStroke(points: Point[]): void {
    if (points.length >= 2) this.strokes.push(points);
  }

  clearStrokes(): void {
    this.strokes = [];
  }

  /** Run the sketch query; inline validation for empty/degenerate input. */
  async runQuery(k = 20, kind?: string): Promise<ResultTile[]> {
    if (!this.strokes.length) {
      throw new Error("draw at least one stroke first");
    }
    await this.store.sketchQuery(this.strokes, this.canvas, k, kind);
    return this.resultTiles();
  }

  resultTiles(): ResultTile[] {
    return this.results.map((item) => ({
      id: item.id,
      score: item.score,
      imageUrl: this.store.api.imageUrl(item.id),
      highlighted: this.highlighted.has(item.id),
    }));
  }

  /** Clicking a tile selects that object across every view. */
  async clickResult(id: string) {
    return this.store.selectQueryResult(id);
  }
}
