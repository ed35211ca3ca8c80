/** Shape-similarity network view model: deterministic force layout,
 * node-click selection with 1-hop context halo.
 */

import { AppState } from "../state.js";
import type { ViewState } from "../state.js";
import { forceLayout, LayoutPoint } from "../layout.js";

export interface NetworkNode extends LayoutPoint {
  highlighted: boolean;
  context: boolean; // 1-hop neighbor of the selection, not itself selected
}

export class NetworkViewModel {
  private highlighted = new Set<string>();
  private contextIds = new Set<string>();
  private layoutCache: LayoutPoint[] | null = null;

  constructor(
    private readonly store: AppState,
    private readonly seed = 42,
  ) {
    store.subscribe((s) => this.onState(s));
  }

  private onState(state: ViewState): void {
    this.highlighted = new Set(state.selectedIds);
    this.contextIds = new Set(
      state.selectionPayload?.graph.context.map((c) => c.id) ?? [],
    );
  }

  highlightedIds(): string[] {
    return [...this.highlighted].sort();
  }

  layout(): LayoutPoint[] {
    if (!this.layoutCache && this.store.graph) {
      this.layoutCache = forceLayout(this.store.graph, 150, this.seed);
    }
    return this.layoutCache ?? [];
  }

  nodes(): NetworkNode[] {
    return this.layout().map((p) => ({
      ...p,
      highlighted: this.highlighted.has(p.id),
      context: !this.highlighted.has(p.id) && this.contextIds.has(p.id),
    }));
  }

  edges(): { a: LayoutPoint; b: LayoutPoint; weight: number }[] {
    const graph = this.store.graph;
    if (!graph) return [];
    const pos = new Map(this.layout().map((p) => [p.id, p]));
    return graph.edges
      .filter(([a, b]) => pos.has(a) && pos.has(b))
      .map(([a, b, w]) => ({ a: pos.get(a)!, b: pos.get(b)!, weight: w }));
  }

  /** Node click: select the node plus `hops` graph neighbors. */
  async clickNode(id: string, hops = 1) {
    return this.store.propagateSelection("network", { node: id, hops });
  }
}
