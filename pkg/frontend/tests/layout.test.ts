import { describe, expect, it } from "vitest";

import { forceLayout, seededRandom } from "../src/layout.js";
import type { SimilarityGraph } from "../src/types.js";

function clusterGraph(): SimilarityGraph {
  // two 4-cliques joined by one bridge edge
  const nodes = ["a0", "a1", "a2", "a3", "b0", "b1", "b2", "b3"];
  const edges: [string, string, number][] = [];
  for (const prefix of ["a", "b"]) {
    for (let i = 0; i < 4; i++) {
      for (let j = i + 1; j < 4; j++) {
        edges.push([`${prefix}${i}`, `${prefix}${j}`, 0.1]);
      }
    }
  }
  edges.push(["a0", "b0", 1.0]);
  return { nodes, edges, kind: "hog", k: 3 };
}

describe("seeded PRNG", () => {
  it("is deterministic", () => {
    const a = seededRandom(7);
    const b = seededRandom(7);
    for (let i = 0; i < 100; i++) expect(a()).toBe(b());
  });

  it("stays in [0, 1)", () => {
    const r = seededRandom(3);
    for (let i = 0; i < 1000; i++) {
      const v = r();
      expect(v).toBeGreaterThanOrEqual(0);
      expect(v).toBeLessThan(1);
    }
  });
});

describe("force layout", () => {
  it("is deterministic for a fixed seed", () => {
    const g = clusterGraph();
    const one = forceLayout(g, 120, 42);
    const two = forceLayout(g, 120, 42);
    expect(one).toEqual(two);
  });

  it("changes with the seed", () => {
    const g = clusterGraph();
    const one = forceLayout(g, 120, 42);
    const two = forceLayout(g, 120, 43);
    expect(one).not.toEqual(two);
  });

  it("normalizes into the unit square", () => {
    for (const p of forceLayout(clusterGraph(), 120, 1)) {
      expect(p.x).toBeGreaterThanOrEqual(0);
      expect(p.x).toBeLessThanOrEqual(1);
      expect(p.y).toBeGreaterThanOrEqual(0);
      expect(p.y).toBeLessThanOrEqual(1);
    }
  });

  it("pulls cliques together more than across the bridge", () => {
    const pts = new Map(forceLayout(clusterGraph(), 200, 5).map((p) => [p.id, p]));
    const d = (a: string, b: string) => {
      const pa = pts.get(a)!;
      const pb = pts.get(b)!;
      return Math.hypot(pa.x - pb.x, pa.y - pb.y);
    };
    const intra = (d("a0", "a1") + d("a1", "a2") + d("b0", "b1") + d("b1", "b2")) / 4;
    const across = (d("a1", "b1") + d("a2", "b2") + d("a3", "b3")) / 3;
    expect(across).toBeGreaterThan(intra * 1.5);
  });

  it("handles the empty graph", () => {
    expect(forceLayout({ nodes: [], edges: [], kind: "hog", k: 0 })).toEqual([]);
  });
});
