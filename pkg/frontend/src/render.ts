/** DOM renderers. All state lives in the view models; these functions only
 * draw and translate pointer gestures into model calls.
 */

import { AppState } from "./state.js";
import { MapViewModel } from "./views/map.js";
import { NetworkViewModel } from "./views/network.js";
import { SketchViewModel } from "./views/sketch.js";
import { TimelineViewModel } from "./views/timeline.js";
import type { Point } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, String(v));
  return el;
}

interface BrushRect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

function attachBrush(
  svg: SVGSVGElement,
  onDone: (r: BrushRect) => void,
): void {
  let start: [number, number] | null = null;
  let rect: SVGRectElement | null = null;
  const toLocal = (ev: PointerEvent): [number, number] => {
    const bounds = svg.getBoundingClientRect();
    return [ev.clientX - bounds.left, ev.clientY - bounds.top];
  };
  svg.addEventListener("pointerdown", (ev) => {
    start = toLocal(ev);
    rect = svgEl("rect", { class: "brush", x: start[0], y: start[1], width: 0, height: 0 });
    svg.appendChild(rect);
    svg.setPointerCapture(ev.pointerId);
  });
  svg.addEventListener("pointermove", (ev) => {
    if (!start || !rect) return;
    const [x, y] = toLocal(ev);
    rect.setAttribute("x", String(Math.min(x, start[0])));
    rect.setAttribute("y", String(Math.min(y, start[1])));
    rect.setAttribute("width", String(Math.abs(x - start[0])));
    rect.setAttribute("height", String(Math.abs(y - start[1])));
  });
  svg.addEventListener("pointerup", (ev) => {
    if (!start) return;
    const [x, y] = toLocal(ev);
    const done = {
      x0: Math.min(start[0], x),
      y0: Math.min(start[1], y),
      x1: Math.max(start[0], x),
      y1: Math.max(start[1], y),
    };
    rect?.remove();
    start = null;
    rect = null;
    onDone(done);
  });
}

export function renderMap(host: HTMLElement, model: MapViewModel, store: AppState): void {
  const w = 460;
  const h = 300;
  const svg = svgEl("svg", { width: w, height: h, class: "view map" });
  host.appendChild(svg);
  const markerLayer = svgEl("g", {});
  svg.appendChild(markerLayer);

  const lon = (x: number) => (x / w) * 360 - 180;
  const lat = (y: number) => 90 - (y / h) * 180;
  attachBrush(svg, (r) => {
    if (r.x1 - r.x0 < 3 && r.y1 - r.y0 < 3) {
      void model.clear();
    } else {
      void model.brush(lat(r.y1), lon(r.x0), lat(r.y0), lon(r.x1));
    }
  });

  const draw = () => {
    markerLayer.replaceChildren();
    for (const m of model.markers()) {
      const c = svgEl("circle", {
        cx: m.x * w,
        cy: m.y * h,
        r: m.highlighted ? 5 : 2.5,
        class: m.highlighted ? "marker hi" : "marker",
      });
      c.appendChild(
        Object.assign(document.createElementNS(SVG_NS, "title"), {
          textContent: `${m.id} (${m.place})`,
        }),
      );
      markerLayer.appendChild(c);
    }
  };
  store.subscribe(draw);
  draw();
}

export function renderTimeline(
  host: HTMLElement,
  model: TimelineViewModel,
  store: AppState,
): void {
  const w = 460;
  const h = 220;
  const svg = svgEl("svg", { width: w, height: h, class: "view timeline" });
  host.appendChild(svg);
  const barLayer = svgEl("g", {});
  const axisLayer = svgEl("g", {});
  svg.appendChild(barLayer);
  svg.appendChild(axisLayer);

  attachBrush(svg, (r) => {
    const [lo, hi] = model.span();
    const from = lo + ((hi - lo) * r.x0) / w;
    const to = lo + ((hi - lo) * r.x1) / w;
    void model.brush(Math.round(from), Math.round(to));
  });

  const draw = () => {
    barLayer.replaceChildren();
    axisLayer.replaceChildren();
    const laneH = 4;
    for (const bar of model.bars()) {
      barLayer.appendChild(
        svgEl("rect", {
          x: bar.x0 * w,
          y: 8 + (bar.lane * laneH) % (h - 40),
          width: Math.max((bar.x1 - bar.x0) * w, 1.5),
          height: laneH - 1,
          class: bar.highlighted ? "bar hi" : "bar",
        }),
      );
    }
    for (const tick of model.ticks()) {
      const t = svgEl("text", { x: tick.x * (w - 40) + 4, y: h - 6, class: "tick" });
      t.textContent = tick.label;
      axisLayer.appendChild(t);
    }
  };
  store.subscribe(draw);
  draw();
}

export function renderNetwork(
  host: HTMLElement,
  model: NetworkViewModel,
  store: AppState,
): void {
  const w = 460;
  const h = 300;
  const canvas = document.createElement("canvas");
  canvas.width = w;
  canvas.height = h;
  canvas.className = "view network";
  host.appendChild(canvas);
  const ctx = canvas.getContext("2d")!;

  const pad = 16;
  const px = (x: number) => pad + x * (w - 2 * pad);
  const py = (y: number) => pad + y * (h - 2 * pad);

  canvas.addEventListener("click", (ev) => {
    const bounds = canvas.getBoundingClientRect();
    const mx = ev.clientX - bounds.left;
    const my = ev.clientY - bounds.top;
    let best: { id: string; d: number } | null = null;
    for (const node of model.nodes()) {
      const d = Math.hypot(px(node.x) - mx, py(node.y) - my);
      if (!best || d < best.d) best = { id: node.id, d };
    }
    if (best && best.d < 14) void model.clickNode(best.id, 1);
  });

  const draw = () => {
    ctx.clearRect(0, 0, w, h);
    ctx.strokeStyle = "#d8cfc4";
    ctx.lineWidth = 0.6;
    for (const e of model.edges()) {
      ctx.beginPath();
      ctx.moveTo(px(e.a.x), py(e.a.y));
      ctx.lineTo(px(e.b.x), py(e.b.y));
      ctx.stroke();
    }
    for (const node of model.nodes()) {
      ctx.beginPath();
      ctx.fillStyle = node.highlighted ? "#b5402a" : node.context ? "#d89c6a" : "#6b665f";
      ctx.arc(px(node.x), py(node.y), node.highlighted ? 5 : 3, 0, Math.PI * 2);
      ctx.fill();
    }
  };
  store.subscribe(draw);
  draw();
}

export function renderSketch(
  host: HTMLElement,
  model: SketchViewModel,
  store: AppState,
): void {
  const [w, h] = model.canvas;
  const wrap = document.createElement("div");
  wrap.className = "sketch-wrap";
  host.appendChild(wrap);

  const canvas = document.createElement("canvas");
  canvas.width = w;
  canvas.height = h;
  canvas.className = "view sketch";
  wrap.appendChild(canvas);
  const ctx = canvas.getContext("2d")!;
  ctx.lineWidth = 2;
  ctx.lineCap = "round";
  ctx.strokeStyle = "#2d2a26";

  const bar = document.createElement("div");
  bar.className = "sketch-bar";
  const queryBtn = document.createElement("button");
  queryBtn.textContent = "Search";
  const clearBtn = document.createElement("button");
  clearBtn.textContent = "Clear";
  const status = document.createElement("span");
  status.className = "status";
  bar.append(queryBtn, clearBtn, status);
  wrap.appendChild(bar);

  const strip = document.createElement("div");
  strip.className = "results";
  wrap.appendChild(strip);

  let current: Point[] | null = null;
  const toLocal = (ev: PointerEvent): Point => {
    const bounds = canvas.getBoundingClientRect();
    return [ev.clientX - bounds.left, ev.clientY - bounds.top];
  };
  const redraw = () => {
    ctx.clearRect(0, 0, w, h);
    const all = current ? [...model.strokes, current] : model.strokes;
    for (const stroke of all) {
      ctx.beginPath();
      ctx.moveTo(stroke[0][0], stroke[0][1]);
      for (const [x, y] of stroke.slice(1)) ctx.lineTo(x, y);
      ctx.stroke();
    }
  };
  canvas.addEventListener("pointerdown", (ev) => {
    current = [toLocal(ev)];
    canvas.setPointerCapture(ev.pointerId);
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!current) return;
    current.push(toLocal(ev));
    redraw();
  });
  canvas.addEventListener("pointerup", () => {
    if (current && current.length >= 2) model.addStroke(current);
    current = null;
    redraw();
  });

  clearBtn.addEventListener("click", () => {
    model.clearStrokes();
    redraw();
  });
  queryBtn.addEventListener("click", () => {
    status.textContent = "searching...";
    model
      .runQuery(12)
      .then(() => {
        status.textContent = "";
      })
      .catch((err) => {
        status.textContent = String(err.message ?? err);
      });
  });

  const drawResults = () => {
    strip.replaceChildren();
    for (const tile of model.resultTiles()) {
      const img = document.createElement("img");
      img.src = tile.imageUrl;
      img.title = `${tile.id} (${tile.score.toFixed(3)})`;
      img.className = tile.highlighted ? "tile hi" : "tile";
      img.addEventListener("click", () => void model.clickResult(tile.id));
      strip.appendChild(img);
    }
  };
  store.subscribe(drawResults);
  drawResults();
}
