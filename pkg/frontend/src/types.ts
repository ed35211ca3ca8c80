/** Wire types mirroring the catalog service JSON schemas. */

export interface Findspot {
  lat: number;
  lon: number;
  place: string;
}

export interface CatalogRecord {
  id: string;
  name: string;
  collection: string;
  shape_class: string;
  date_from: number; // signed years, negative = BC
  date_to: number;
  findspot: Findspot | null;
  image_paths: string[];
  mesh_path: string | null;
}

export type GraphEdge = [string, string, number];

export interface SimilarityGraph {
  nodes: string[];
  edges: GraphEdge[];
  kind: string;
  k: number;
}

export interface SelectionPayload {
  selected_ids: string[];
  map: { ids: string[]; points: { id: string; lat: number; lon: number; place: string }[] };
  timeline: { ids: string[]; intervals: { id: string; from: number; to: number }[] };
  graph: { ids: string[]; context: { id: string; selected: boolean }[] };
}

export type Selector =
  | { ids: string[] }
  | { date: [number, number] }
  | { bbox: [number, number, number, number] }
  | { node: string; hops?: number };

export interface RankedItem {
  id: string;
  score: number;
}

export interface RankedResult {
  kind: string;
  items: RankedItem[];
}

export type Point = [number, number];
