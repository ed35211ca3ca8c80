/** Geographic findspot view model: equirectangular projection plus a
 * rectangular brush. Pure data layer; the renderer draws from it.
 */

import { AppState } from "../state.js";
import type { ViewState } from "../state.js";

export interface MapMarker {
  id: string;
  x: number; // [0,1] across the view
  y: number;
  place: string;
  highlighted: boolean;
}

export class MapViewModel {
  private highlighted = new Set<string>();

  constructor(private readonly store: AppState) {
    store.subscribe((s) => this.onState(s));
  }

  private onState(state: ViewState): void {
    this.highlighted = new Set(state.selectedIds);
  }

  highlightedIds(): string[] {
    return [...this.highlighted].sort();
  }

  /** Drawable markers; records without findspots stay off the map but keep
   * membership in highlightedIds. */
  markers(): MapMarker[] {
    return this.store.records
      .filter((r) => r.findspot !== null)
      .map((r) => ({
        id: r.id,
        x: (r.findspot!.lon + 180) / 360,
        y: (90 - r.findspot!.lat) / 180,
        place: r.findspot!.place,
        highlighted: this.highlighted.has(r.id),
      }));
  }

  /** Box select in geographic coordinates; an empty box clears. */
  async brush(latMin: number, lonMin: number, latMax: number, lonMax: number) {
    return this.store.propagateSelection("map", {
      bbox: [latMin, lonMin, latMax, lonMax],
    });
  }

  async clear() {
    return this.store.clearSelection("map");
  }
}
