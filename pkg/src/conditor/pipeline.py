"""End-to-end build: corpus bytes in, topic map + index out.

Entries can be interpreted on a thread pool; results are merged in
voz_id order so the output is independent of worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import ingest, topicmap
from .extract import interpret_entry
from .model import CleanText, EnrichedEntry, Lint, SourceEntry, TopicMap
from .normalize import default_abbreviations, segment
from .rules import RuleSet, default_rules


@dataclass
class BuildReport:
    topics: int = 0
    associations: int = 0
    date_facts: int = 0
    unresolved_refs: int = 0
    entry_errors: list[str] = field(default_factory=list)
    lints: list[str] = field(default_factory=list)


def build_topic_map(
    corpus: bytes,
    ruleset: RuleSet | None = None,
    workers: int = 1,
) -> tuple[TopicMap, BuildReport]:
    """Run the whole pipeline over one corpus."""
    if ruleset is None:
        ruleset = default_rules()
    report = BuildReport()
    entries, entry_lint = ingest.parse_corpus(corpus)
    report.entry_errors = list(entry_lint.notes)

    abbreviations = default_abbreviations()
    cleans: dict[int, CleanText] = {}
    for entry in entries:
        clean, lint = ingest.clean_description(entry.raw_description)
        report.lints.extend(f"voz {entry.voz_id}: {n}" for n in lint.notes)
        cleans[entry.voz_id] = segment(clean, abbreviations)

    alias_table = topicmap.build_alias_table([(e.voz_id, e.name) for e in entries])

    def interpret(entry: SourceEntry) -> EnrichedEntry:
        return interpret_entry(entry, cleans[entry.voz_id], ruleset, alias_table)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(interpret, entries))
    else:
        results = [interpret(e) for e in entries]
    enriched = {r.voz_id: r for r in results}
    for entry in sorted(entries, key=lambda e: e.voz_id):
        report.lints.extend(f"voz {entry.voz_id}: {n}" for n in enriched[entry.voz_id].lints)

    topics = {
        e.voz_id: topicmap.build_topic(e, cleans[e.voz_id], enriched[e.voz_id])
        for e in entries
    }
    associations, unresolved, cross_lint = topicmap.crossing_search(
        topics, alias_table, cleans, enriched
    )
    report.lints.extend(cross_lint.notes)
    topic_map, assemble_lint = topicmap.assemble(list(topics.values()), associations, unresolved)
    report.lints.extend(assemble_lint.notes)

    report.topics = len(topic_map.topics)
    report.associations = len(topic_map.associations)
    report.date_facts = sum(len(t.date_facts) for t in topic_map.topics.values())
    report.unresolved_refs = len(topic_map.unresolved_refs)
    return topic_map, report
