/** Deterministic force-directed layout.
 *
 * Seeded initial placement plus a fixed number of spring/repulsion steps:
 * identical inputs always produce identical positions, which keeps network
 * snapshots testable.
 */

import type { SimilarityGraph } from "./types.js";

export interface LayoutPoint {
  id: string;
  x: number;
  y: number;
}

/** mulberry32: tiny deterministic PRNG. */
export function seededRandom(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function forceLayout(
  graph: SimilarityGraph,
  iterations = 150,
  seed = 42,
): LayoutPoint[] {
  const n = graph.nodes.length;
  if (n === 0) return [];
  const rand = seededRandom(seed);
  const index = new Map(graph.nodes.map((id, i) => [id, i]));
  const x = new Float64Array(n);
  const y = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    x[i] = rand() * 2 - 1;
    y[i] = rand() * 2 - 1;
  }
  const edges = graph.edges
    .map(([a, b]) => [index.get(a)!, index.get(b)!] as const)
    .filter(([a, b]) => a !== undefined && b !== undefined);

  const area = 4.0;
  const kIdeal = Math.sqrt(area / n);
  let temperature = 0.25;
  const cool = Math.pow(0.01 / temperature, 1 / Math.max(iterations, 1));

  const dx = new Float64Array(n);
  const dy = new Float64Array(n);
  for (let it = 0; it < iterations; it++) {
    dx.fill(0);
    dy.fill(0);
    // repulsion (exact pairwise; catalogs cap at a few thousand nodes)
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let ux = x[i] - x[j];
        let uy = y[i] - y[j];
        let d2 = ux * ux + uy * uy;
        if (d2 < 1e-9) {
          // deterministic nudge for coincident nodes
          ux = 1e-4 * ((i * 31 + j) % 7 - 3);
          uy = 1e-4 * ((i * 17 + j) % 5 - 2);
          d2 = ux * ux + uy * uy + 1e-12;
        }
        const f = (kIdeal * kIdeal) / d2;
        dx[i] += ux * f;
        dy[i] += uy * f;
        dx[j] -= ux * f;
        dy[j] -= uy * f;
      }
    }
    // spring attraction along edges
    for (const [a, b] of edges) {
      const ux = x[a] - x[b];
      const uy = y[a] - y[b];
      const d = Math.sqrt(ux * ux + uy * uy) + 1e-12;
      const f = d / kIdeal;
      dx[a] -= (ux / d) * f * d;
      dy[a] -= (uy / d) * f * d;
      dx[b] += (ux / d) * f * d;
      dy[b] += (uy / d) * f * d;
    }
    for (let i = 0; i < n; i++) {
      const len = Math.sqrt(dx[i] * dx[i] + dy[i] * dy[i]) + 1e-12;
      const step = Math.min(len * 1e-3, temperature);
      x[i] += (dx[i] / len) * step;
      y[i] += (dy[i] / len) * step;
    }
    temperature *= cool;
  }

  // normalize into the unit square
  let minX = Infinity, maxX = -Infinity, minY = Infinity, maxY = -Infinity;
  for (let i = 0; i < n; i++) {
    minX = Math.min(minX, x[i]);
    maxX = Math.max(maxX, x[i]);
    minY = Math.min(minY, y[i]);
    maxY = Math.max(maxY, y[i]);
  }
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  return graph.nodes.map((id, i) => ({
    id,
    x: (x[i] - minX) / spanX,
    y: (y[i] - minY) / spanY,
  }));
}
