// DOM construction for each pane. Pure element builders: given data and
// callbacks, return a detached element — easy to test without wiring.

import type { GraphExport, SearchHit, TopicDetail } from "./api";
import { DEFAULT_OPTIONS, runLayout } from "./force";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderMessage(kind: "error" | "empty" | "loading", text: string): HTMLElement {
  return el("p", `message message-${kind}`, text);
}

export function renderResults(
  hits: SearchHit[],
  onOpen: (id: number) => void,
): HTMLElement {
  if (hits.length === 0) {
    return renderMessage("empty", "No results.");
  }
  const list = el("ol", "results");
  for (const hit of hits) {
    const item = el("li", "result");
    const link = el("a", "result-name", hit.name || `Topic ${hit.id}`);
    link.href = `#/topic/${hit.id}`;
    link.dataset.topicId = String(hit.id);
    link.addEventListener("click", (event) => {
      event.preventDefault();
      onOpen(hit.id);
    });
    item.append(
      link,
      el("span", "result-score", hit.score.toFixed(4)),
      el("p", "result-snippet", hit.snippet),
    );
    list.append(item);
  }
  return list;
}

function formatDateFact(fact: TopicDetail["dateFacts"][number]): string {
  const parts: string[] = [];
  if (fact.role) parts.push(fact.role);
  if (fact.location) parts.push(fact.location);
  const date =
    fact.day !== null && fact.month !== null
      ? `${fact.day}/${fact.month}/${fact.year}`
      : fact.month !== null
        ? `${fact.month}/${fact.year}`
        : String(fact.year);
  parts.push(date);
  return parts.join(" — ");
}

export function renderTopicDetail(topic: TopicDetail): HTMLElement {
  const pane = el("section", "topic-detail");
  pane.append(el("h2", "topic-name", topic.baseName));
  if (topic.shortdesc) pane.append(el("p", "topic-shortdesc", topic.shortdesc));

  if (topic.dateFacts.length > 0) {
    pane.append(el("h3", undefined, "Date facts"));
    const facts = el("ul", "date-facts");
    for (const fact of topic.dateFacts) {
      facts.append(el("li", "date-fact", formatDateFact(fact)));
    }
    pane.append(facts);
  }
  if (topic.occurrences.length > 0) {
    pane.append(el("h3", undefined, "Occurrences"));
    const occs = el("ul", "occurrences");
    for (const occ of topic.occurrences) {
      occs.append(el("li", "occurrence", `${occ.roleSpec}: ${occ.resourceData}`));
    }
    pane.append(occs);
  }
  if (topic.body) {
    pane.append(el("h3", undefined, "Entry"));
    pane.append(el("p", "topic-body", topic.body));
  }
  return pane;
}

/**
 * Render the neighborhood as an SVG force-directed graph. One rendered
 * edge per GraphExport edge; one-way edges carry an arrowhead marker,
 * two-way edges none. Clicking a node re-roots via onOpen.
 */
export function renderGraph(
  graph: GraphExport,
  rootId: number,
  onOpen: (id: number) => void,
): SVGSVGElement {
  const { width, height } = DEFAULT_OPTIONS;
  const layout = runLayout(graph.nodes, graph.edges);
  const positions = new Map(layout.map((n) => [n.id, n]));

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "graph");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);

  const defs = document.createElementNS(SVG_NS, "defs");
  const marker = document.createElementNS(SVG_NS, "marker");
  marker.setAttribute("id", "arrowhead");
  marker.setAttribute("markerWidth", "10");
  marker.setAttribute("markerHeight", "8");
  marker.setAttribute("refX", "22");
  marker.setAttribute("refY", "4");
  marker.setAttribute("orient", "auto");
  const tip = document.createElementNS(SVG_NS, "path");
  tip.setAttribute("d", "M0,0 L10,4 L0,8 z");
  marker.append(tip);
  defs.append(marker);
  svg.append(defs);

  for (const edge of graph.edges) {
    const a = positions.get(edge.source);
    const b = positions.get(edge.target);
    if (!a || !b) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("class", `edge edge-${edge.direction}`);
    line.setAttribute("x1", a.x.toFixed(1));
    line.setAttribute("y1", a.y.toFixed(1));
    line.setAttribute("x2", b.x.toFixed(1));
    line.setAttribute("y2", b.y.toFixed(1));
    line.dataset.role = edge.role;
    if (edge.direction === "one-way") {
      line.setAttribute("marker-end", "url(#arrowhead)");
    }
    svg.append(line);
  }

  for (const node of layout) {
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute(
      "class",
      node.id === rootId ? "node node-root" : "node",
    );
    group.dataset.topicId = String(node.id);
    group.addEventListener("click", () => onOpen(node.id));

    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", node.x.toFixed(1));
    circle.setAttribute("cy", node.y.toFixed(1));
    circle.setAttribute("r", node.id === rootId ? "14" : "10");
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", node.x.toFixed(1));
    label.setAttribute("y", (node.y - 16).toFixed(1));
    label.setAttribute("text-anchor", "middle");
    label.textContent = node.label;
    group.append(circle, label);
    svg.append(group);
  }
  return svg;
}
