"""Command-line interface.

    conditor build  --corpus F --rules F --out DIR [--workers N]
    conditor search --store DIR [--k N] "query"
    conditor emit   --store DIR --out F
    conditor graph  --store DIR --root ID --depth N
    conditor serve  --store DIR --port P [--static DIR]

Exit codes: 0 success, 1 per-entry errors only, 2 fatal.
CONDITOR_LOG sets the log level (DEBUG, INFO, ...).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import emit as emit_mod
from . import index as index_mod
from . import store as store_mod
from .graph import neighborhood
from .model import CorpusError
from .pipeline import build_topic_map
from .rules import RuleLoadError, load_rules
from .server import ConditorService, make_server, search_json

log = logging.getLogger("conditor")


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("CONDITOR_LOG", "WARNING").upper())
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CorpusError, RuleLoadError, store_mod.StoreError, OSError) as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conditor")
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("build", help="run the full pipeline over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--rules", help="rules file (default: shipped rules)")
    p.add_argument("--descriptor", help="persistence descriptor (default: shipped)")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("search", help="ranked search over a built store")
    p.add_argument("--store", required=True)
    p.add_argument("--k", type=int, default=index_mod.DEFAULT_K)
    p.add_argument("query")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("emit", help="re-emit the XTM-DITA document from a store")
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("graph", help="export a graph neighborhood as JSON")
    p.add_argument("--store", required=True)
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--depth", type=int, default=2)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("serve", help="serve search/topic/graph endpoints over HTTP")
    p.add_argument("--store", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", help="directory with the explorer UI bundle")
    p.set_defaults(func=cmd_serve)
    return parser


def cmd_build(args) -> int:
    with open(args.corpus, "rb") as fh:
        corpus = fh.read()
    if args.rules:
        with open(args.rules, "rb") as fh:
            ruleset = load_rules(fh.read())
    else:
        ruleset = None
    if args.descriptor:
        with open(args.descriptor, "rb") as fh:
            descriptor = store_mod.parse_descriptor(fh.read())
    else:
        descriptor = store_mod.default_descriptor()

    os.makedirs(args.out, exist_ok=True)
    lock_path = os.path.join(args.out, ".build.lock")
    try:
        lock_fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        print(f"error: another build holds {lock_path}", file=sys.stderr)
        return 2
    try:
        topic_map, report = build_topic_map(corpus, ruleset, workers=args.workers)
        with open(os.path.join(args.out, "topicmap.xtm.xml"), "wb") as fh:
            fh.write(emit_mod.emit_xtm_dita(topic_map))
        store_dir = os.path.join(args.out, "store")
        store_mod.persist(topic_map, descriptor, store_dir)
        snapshot = index_mod.build_index(topic_map.topics)
        index_mod.save_index(snapshot, store_dir)
        report_doc = {
            "topics": report.topics,
            "associations": report.associations,
            "date_facts": report.date_facts,
            "unresolved_refs": report.unresolved_refs,
            "entry_errors": report.entry_errors,
            "lints": report.lints,
        }
        with open(os.path.join(args.out, "report.json"), "wb") as fh:
            payload = json.dumps(report_doc, sort_keys=True, ensure_ascii=False, indent=2)
            fh.write(payload.encode("utf-8"))
            fh.write(b"\n")
    finally:
        os.close(lock_fd)
        os.unlink(lock_path)
    print(
        f"built {report.topics} topics, {report.associations} associations, "
        f"{report.date_facts} date facts, {report.unresolved_refs} unresolved refs, "
        f"{len(report.entry_errors)} entry errors, {len(report.lints)} lints"
    )
    return 1 if report.entry_errors else 0


def _open_store(path: str):
    handle = store_mod.open_store(path)
    topic_map = handle.load_map()
    snapshot = index_mod.load_index(path)
    return topic_map, snapshot


def cmd_search(args) -> int:
    topic_map, snapshot = _open_store(args.store)
    try:
        hits = search_json(snapshot, topic_map, args.query, args.k)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for hit in hits:
        print(f"{hit['id']}\t{json.dumps(hit['score'])}\t{hit['name']}\t{hit['snippet']}")
    return 0


def cmd_emit(args) -> int:
    handle = store_mod.open_store(args.store)
    topic_map = handle.load_map()
    with open(args.out, "wb") as fh:
        fh.write(emit_mod.emit_xtm_dita(topic_map))
    print(f"wrote {args.out}")
    return 0


def cmd_graph(args) -> int:
    handle = store_mod.open_store(args.store)
    topic_map = handle.load_map()
    try:
        export = neighborhood(topic_map, args.root, args.depth)
    except KeyError:
        print(f"error: topic {args.root} not found", file=sys.stderr)
        return 2
    print(json.dumps({"nodes": export.nodes, "edges": export.edges}, ensure_ascii=False))
    return 0


def cmd_serve(args) -> int:
    topic_map, snapshot = _open_store(args.store)
    service = ConditorService(topic_map, snapshot, static_dir=args.static)
    server = make_server(service, host=args.host, port=args.port)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
