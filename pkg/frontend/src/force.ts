// Small deterministic 2-D force-directed layout: spring forces along
// edges, pairwise repulsion, mild centering, velocity damping. Pure and
// frame-rate independent so it is unit-testable without a DOM.

import type { GraphEdge, GraphNode } from "./api";

export interface LayoutNode {
  id: number;
  label: string;
  kind: string;
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export interface LayoutOptions {
  width: number;
  height: number;
  springLength: number;
  springStrength: number;
  repulsion: number;
  centering: number;
  damping: number;
}

export const DEFAULT_OPTIONS: LayoutOptions = {
  width: 600,
  height: 400,
  springLength: 120,
  springStrength: 0.02,
  repulsion: 8000,
  centering: 0.005,
  damping: 0.85,
};

// Deterministic pseudo-random placement so layouts are reproducible.
function hashAngle(id: number): number {
  let h = id >>> 0;
  h = Math.imul(h ^ (h >>> 16), 2246822507);
  h = Math.imul(h ^ (h >>> 13), 3266489909);
  h ^= h >>> 16;
  return ((h >>> 0) / 0xffffffff) * 2 * Math.PI;
}

export function initLayout(
  nodes: GraphNode[],
  options: LayoutOptions = DEFAULT_OPTIONS,
): LayoutNode[] {
  const cx = options.width / 2;
  const cy = options.height / 2;
  const radius = Math.min(options.width, options.height) / 4;
  return nodes.map((node, i) => {
    const angle = hashAngle(node.id);
    const r = nodes.length === 1 ? 0 : radius * (0.5 + (i % 5) / 8);
    return {
      id: node.id,
      label: node.label,
      kind: node.kind,
      x: cx + r * Math.cos(angle),
      y: cy + r * Math.sin(angle),
      vx: 0,
      vy: 0,
    };
  });
}

export function step(
  nodes: LayoutNode[],
  edges: GraphEdge[],
  options: LayoutOptions = DEFAULT_OPTIONS,
): void {
  const byId = new Map(nodes.map((n) => [n.id, n]));
  // pairwise repulsion
  for (let i = 0; i < nodes.length; i++) {
    for (let j = i + 1; j < nodes.length; j++) {
      const a = nodes[i];
      const b = nodes[j];
      let dx = a.x - b.x;
      let dy = a.y - b.y;
      let d2 = dx * dx + dy * dy;
      if (d2 < 1) {
        // coincident nodes: push apart along a deterministic direction
        const angle = hashAngle(a.id * 31 + b.id);
        dx = Math.cos(angle);
        dy = Math.sin(angle);
        d2 = 1;
      }
      const force = options.repulsion / d2;
      const d = Math.sqrt(d2);
      const fx = (dx / d) * force;
      const fy = (dy / d) * force;
      a.vx += fx;
      a.vy += fy;
      b.vx -= fx;
      b.vy -= fy;
    }
  }
  // springs along edges
  for (const edge of edges) {
    const a = byId.get(edge.source);
    const b = byId.get(edge.target);
    if (!a || !b || a === b) continue;
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
    const force = options.springStrength * (d - options.springLength);
    const fx = (dx / d) * force;
    const fy = (dy / d) * force;
    a.vx += fx;
    a.vy += fy;
    b.vx -= fx;
    b.vy -= fy;
  }
  // centering + integrate with damping
  const cx = options.width / 2;
  const cy = options.height / 2;
  for (const node of nodes) {
    node.vx += (cx - node.x) * options.centering;
    node.vy += (cy - node.y) * options.centering;
    node.vx *= options.damping;
    node.vy *= options.damping;
    node.x += node.vx;
    node.y += node.vy;
  }
}

export function totalKineticEnergy(nodes: LayoutNode[]): number {
  return nodes.reduce((sum, n) => sum + n.vx * n.vx + n.vy * n.vy, 0);
}

/** Run the simulation until it settles (or the iteration cap is hit). */
export function runLayout(
  nodes: GraphNode[],
  edges: GraphEdge[],
  options: LayoutOptions = DEFAULT_OPTIONS,
  maxIterations = 300,
  settleThreshold = 0.01,
): LayoutNode[] {
  const layout = initLayout(nodes, options);
  for (let i = 0; i < maxIterations; i++) {
    step(layout, edges, options);
    if (totalKineticEnergy(layout) < settleThreshold) break;
  }
  return layout;
}
