/** Timeline view model: one bar per object over signed-year axis. */

import { AppState } from "../state.js";
import type { ViewState } from "../state.js";
import { yearLabel } from "../format.js";

export interface TimelineBar {
  id: string;
  from: number;
  to: number;
  x0: number; // [0,1] along the axis
  x1: number;
  lane: number;
  highlighted: boolean;
}

export class TimelineViewModel {
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

  span(): [number, number] {
    const rs = this.store.records;
    if (!rs.length) return [-700, -400];
    let lo = Infinity;
    let hi = -Infinity;
    for (const r of rs) {
      lo = Math.min(lo, r.date_from);
      hi = Math.max(hi, r.date_to);
    }
    return hi > lo ? [lo, hi] : [lo - 1, hi + 1];
  }

  bars(): TimelineBar[] {
    const [lo, hi] = this.span();
    const span = hi - lo;
    const sorted = [...this.store.records].sort(
      (a, b) => a.date_from - b.date_from || a.id.localeCompare(b.id),
    );
    // greedy lane packing so overlapping intervals stack
    const laneEnds: number[] = [];
    return sorted.map((r) => {
      let lane = laneEnds.findIndex((end) => end < r.date_from);
      if (lane === -1) {
        lane = laneEnds.length;
        laneEnds.push(r.date_to);
      } else {
        laneEnds[lane] = r.date_to;
      }
      return {
        id: r.id,
        from: r.date_from,
        to: r.date_to,
        x0: (r.date_from - lo) / span,
        x1: (r.date_to - lo) / span,
        lane,
        highlighted: this.highlighted.has(r.id),
      };
    });
  }

  /** Axis tick labels with correct BC/AD rendering. */
  ticks(count = 6): { x: number; label: string }[] {
    const [lo, hi] = this.span();
    const out = [];
    for (let i = 0; i < count; i++) {
      const year = Math.round(lo + ((hi - lo) * i) / (count - 1));
      out.push({ x: i / (count - 1), label: yearLabel(year) });
    }
    return out;
  }

  /** Brush an interval in years (the origin-view affordance). */
  async brush(fromYear: number, toYear: number) {
    return this.store.propagateSelection("timeline", {
      date: [Math.min(fromYear, toYear), Math.max(fromYear, toYear)],
    });
  }
}
