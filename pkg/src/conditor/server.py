"""HTTP query service over a built store.

Read-only JSON endpoints consumed by the explorer UI:

    GET /api/search?q=...&k=...
    GET /api/topic/<id>
    GET /api/graph?root=<id>&depth=<n>

plus static file serving for the UI bundle. Responses are UTF-8 JSON
with stable key order. All state is an immutable loaded snapshot, so
concurrent requests need no locking.
"""

from __future__ import annotations

import json
import os
import posixpath
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, unquote, urlparse

from . import index as index_mod
from .graph import neighborhood
from .model import Topic, TopicMap

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "application/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


def topic_json(topic: Topic, topic_map: TopicMap) -> dict:
    adjacent = []
    for a in topic_map.associations:
        if a.source == topic.id or a.target == topic.id:
            adjacent.append(
                {
                    "source": a.source,
                    "target": a.target,
                    "role": a.role,
                    "direction": "two-way" if a.directionality == "TwoWay" else "one-way",
                }
            )
    return {
        "id": topic.id,
        "baseName": topic.base_name,
        "variants": topic.variants,
        "instanceOf": topic.instance_of,
        "shortdesc": topic.shortdesc,
        "body": topic.body,
        "dateFacts": [
            {
                "role": f.role,
                "location": f.location,
                "day": f.day,
                "month": f.month,
                "year": f.year,
            }
            for f in topic.date_facts
        ],
        "occurrences": [
            {"roleSpec": o.role_spec, "resourceData": o.resource_data}
            for o in topic.occurrences
        ],
        "associations": adjacent,
    }


def search_json(snapshot, topic_map: TopicMap, query_string: str, k: int) -> list[dict]:
    query = index_mod.parse_query(query_string)
    hits = index_mod.search(snapshot, query, k)
    out = []
    for hit in hits:
        topic = topic_map.topics.get(hit.topic_id)
        out.append(
            {
                "id": hit.topic_id,
                "score": hit.score,
                "name": topic.base_name if topic else "",
                "snippet": hit.snippet,
            }
        )
    return out


class ConditorService:
    """Holds the immutable data a handler needs."""

    def __init__(self, topic_map: TopicMap, snapshot, static_dir: str | None = None):
        self.topic_map = topic_map
        self.snapshot = snapshot
        self.static_dir = static_dir


class _Handler(BaseHTTPRequestHandler):
    service: ConditorService  # injected via make_server

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def do_GET(self):
        try:
            self._route()
        except BrokenPipeError:
            pass

    def _route(self):
        parsed = urlparse(self.path)
        path = parsed.path
        params = parse_qs(parsed.query)
        if path == "/api/search":
            return self._api_search(params)
        if path.startswith("/api/topic/"):
            return self._api_topic(path[len("/api/topic/"):])
        if path == "/api/graph":
            return self._api_graph(params)
        if path.startswith("/api/"):
            return self._error(404, "unknown endpoint")
        return self._static(path)

    def _api_search(self, params):
        q = params.get("q", [""])[0]
        if not q.strip():
            return self._error(400, "missing query parameter q")
        try:
            k = int(params.get("k", [str(index_mod.DEFAULT_K)])[0])
        except ValueError:
            return self._error(400, "k must be an integer")
        if k <= 0:
            return self._error(400, "k must be positive")
        try:
            hits = search_json(self.service.snapshot, self.service.topic_map, q, k)
        except ValueError as exc:
            return self._error(400, str(exc))
        self._json(200, hits)

    def _api_topic(self, raw_id):
        try:
            topic_id = int(unquote(raw_id))
        except ValueError:
            return self._error(400, "topic id must be an integer")
        topic = self.service.topic_map.topics.get(topic_id)
        if topic is None:
            return self._error(404, f"topic {topic_id} not found")
        self._json(200, topic_json(topic, self.service.topic_map))

    def _api_graph(self, params):
        try:
            root = int(params.get("root", [""])[0])
            depth = int(params.get("depth", ["2"])[0])
        except ValueError:
            return self._error(400, "root and depth must be integers")
        if depth < 0:
            return self._error(400, "depth must be non-negative")
        try:
            export = neighborhood(self.service.topic_map, root, depth)
        except KeyError:
            return self._error(404, f"topic {root} not found")
        self._json(200, {"nodes": export.nodes, "edges": export.edges})

    def _static(self, path):
        static_dir = self.service.static_dir
        if static_dir is None:
            return self._error(404, "no static bundle configured")
        clean = posixpath.normpath(unquote(path)).lstrip("/")
        if clean in ("", "."):
            clean = "index.html"
        full = os.path.join(static_dir, clean)
        if not os.path.abspath(full).startswith(os.path.abspath(static_dir) + os.sep):
            return self._error(404, "not found")
        if not os.path.isfile(full):
            # SPA fallback: unknown paths get the shell page
            full = os.path.join(static_dir, "index.html")
            if not os.path.isfile(full):
                return self._error(404, "not found")
        ext = os.path.splitext(full)[1].lower()
        ctype = _CONTENT_TYPES.get(ext, "application/octet-stream")
        with open(full, "rb") as fh:
            body = fh.read()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _json(self, status, payload):
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _error(self, status, message):
        self._json(status, {"error": message})


def make_server(service: ConditorService, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)
