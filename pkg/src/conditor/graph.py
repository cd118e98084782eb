"""Graph-neighborhood export for the explorer UI."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .model import TopicMap


@dataclass
class GraphExport:
    nodes: list[dict] = field(default_factory=list)
    edges: list[dict] = field(default_factory=list)


def neighborhood(topic_map: TopicMap, root: int, depth: int) -> GraphExport:
    """Breadth-first neighborhood over associations.

    TwoWay edges are traversable in both directions, OneWay only from
    source to target. Exported edges are all associations between
    exported nodes.
    """
    if root not in topic_map.topics:
        raise KeyError(root)
    adjacency: dict[int, list[int]] = {}
    for a in topic_map.associations:
        if not isinstance(a.target, int):
            continue
        adjacency.setdefault(a.source, []).append(a.target)
        if a.directionality == "TwoWay":
            adjacency.setdefault(a.target, []).append(a.source)
    visited = {root}
    queue = deque([(root, 0)])
    while queue:
        node, d = queue.popleft()
        if d >= depth:
            continue
        for nxt in sorted(adjacency.get(node, [])):
            if nxt not in visited:
                visited.add(nxt)
                queue.append((nxt, d + 1))
    export = GraphExport()
    for node_id in sorted(visited):
        topic = topic_map.topics[node_id]
        export.nodes.append(
            {"id": node_id, "label": topic.base_name, "kind": str(topic.instance_of)}
        )
    for a in topic_map.associations:
        if isinstance(a.target, int) and a.source in visited and a.target in visited:
            direction = "two-way" if a.directionality == "TwoWay" else "one-way"
            export.edges.append(
                {"source": a.source, "target": a.target, "role": a.role, "direction": direction}
            )
    return export
