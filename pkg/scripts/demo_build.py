#!/usr/bin/env python3
"""Build the bundled demo corpus and poke at every artifact.

Usage: python scripts/demo_build.py [out_dir]
"""

import json
import os
import shutil
import sys
import tempfile

from conditor.app import main as conditor
from conditor.index import load_index, parse_query, search
from conditor.store import open_store

HERE = os.path.dirname(os.path.abspath(__file__))
GOLDEN = os.path.join(HERE, "..", "testdata", "golden-corpus.xml")


def run(out_dir: str) -> None:
    code = conditor(["build", "--corpus", GOLDEN, "--out", out_dir, "--workers", "2"])
    if code != 0:
        sys.exit(code)
    report = json.load(open(os.path.join(out_dir, "report.json")))
    print("\nreport.json:")
    print(json.dumps(report, indent=2, ensure_ascii=False))

    store = open_store(os.path.join(out_dir, "store"))
    print("\ntopics in store:", store.topic_ids())
    topic = store.get_topic(store.topic_ids()[0])
    print("first topic:", topic.base_name)
    for fact in topic.date_facts:
        print("  date fact:", fact)

    snapshot = load_index(os.path.join(out_dir, "store"))
    for query in ("Albarracín", "rey OR emir", '"Abd al-Malik"'):
        hits = search(snapshot, parse_query(query), k=3)
        print(f"\nsearch {query!r}:")
        for hit in hits:
            print(f"  #{hit.topic_id}  {hit.score:.4f}  {hit.snippet}")

    print("\nemitted document head:")
    with open(os.path.join(out_dir, "topicmap.xtm.xml"), encoding="utf-8") as fh:
        for line in fh.read().splitlines()[:12]:
            print(" ", line)


if __name__ == "__main__":
    if len(sys.argv) > 1:
        run(sys.argv[1])
    else:
        tmp = tempfile.mkdtemp(prefix="conditor-demo-")
        try:
            run(tmp)
        finally:
            shutil.rmtree(tmp, ignore_errors=True)
