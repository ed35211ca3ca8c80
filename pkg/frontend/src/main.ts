/** Entry point: wires the store, view models and renderers.
 *
 * The single configuration setting is the endpoint base: ?api=<url> or the
 * page origin when served by the catalog service itself.
 */

import { ApiClient } from "./api.js";
import { AppState } from "./state.js";
import { MapViewModel } from "./views/map.js";
import { NetworkViewModel } from "./views/network.js";
import { SketchViewModel } from "./views/sketch.js";
import { TimelineViewModel } from "./views/timeline.js";
import { renderMap, renderNetwork, renderSketch, renderTimeline } from "./render.js";

function endpointBase(): string {
  const param = new URLSearchParams(window.location.search).get("api");
  return (param ?? window.location.origin).replace(/\/$/, "");
}

async function boot(): Promise<void> {
  const store = new AppState(new ApiClient(endpointBase()));
  const mapModel = new MapViewModel(store);
  const timelineModel = new TimelineViewModel(store);
  const networkModel = new NetworkViewModel(store);
  const sketchModel = new SketchViewModel(store);

  const grid = document.getElementById("views")!;
  const panel = (title: string): HTMLElement => {
    const box = document.createElement("section");
    const head = document.createElement("h2");
    head.textContent = title;
    box.appendChild(head);
    grid.appendChild(box);
    return box;
  };

  await store.load();
  renderMap(panel("Findspots"), mapModel, store);
  renderTimeline(panel("Dating"), timelineModel, store);
  renderNetwork(panel("Shape similarity"), networkModel, store);
  renderSketch(panel("Sketch search"), sketchModel, store);

  const footer = document.getElementById("statusline")!;
  store.subscribe((s) => {
    footer.textContent = s.lastError
      ? `error: ${s.lastError}`
      : `${s.selectedIds.size} selected`;
  });
}

void boot();
