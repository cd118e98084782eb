"""Topic-map construction: topics, occurrences, associations.

The crossing-search scans every topic body for mentions of every other
topic's aliases (normalized, whole-token anchored) and derives one-way
or two-way associations; inline marker references with a resolvable
target become associations directly.
"""

from __future__ import annotations

from .model import (
    Association,
    CleanText,
    CorpusError,
    EnrichedEntry,
    Lint,
    Occurrence,
    SourceEntry,
    Topic,
    TopicMap,
)
from .normalize import merge_title_name, tokenize

AliasTable = dict[tuple[str, ...], tuple[int, str]]

FALLBACK_ROLE = "mención"
MARKER_ROLE = "referencia"


def build_alias_table(entries: list[tuple[int, str]]) -> AliasTable:
    """Map normalized alias token tuples to (topic id, canonical name).

    On collision the lowest topic id wins, which keeps the table
    deterministic regardless of input order.
    """
    table: AliasTable = {}
    for topic_id, title in sorted(entries):
        for alias in merge_title_name(title).aliases:
            key = tuple(t.normalized for t in tokenize(CleanText(text=alias)))
            if key and key not in table:
                table[key] = (topic_id, merge_title_name(title).canonical)
    return table


def build_topic(entry: SourceEntry, clean: CleanText, enriched: EnrichedEntry) -> Topic:
    """Assemble one Topic from the entry, its clean text and its facts."""
    title = merge_title_name(entry.name)
    shortdesc = clean.text[slice(*clean.sentences[0])] if clean.sentences else clean.text
    occurrences = []
    seen = set()
    for fact in enriched.date_facts:
        if fact.role and fact.location and (fact.role, fact.location) not in seen:
            seen.add((fact.role, fact.location))
            occurrences.append(Occurrence(fact.role, fact.location))
    return Topic(
        id=entry.voz_id,
        base_name=title.canonical,
        variants=list(title.aliases),
        instance_of=entry.subcategory_id,
        shortdesc=shortdesc,
        body=clean.text,
        date_facts=list(enriched.date_facts),
        occurrences=occurrences,
    )


def crossing_search(
    topics: dict[int, Topic],
    alias_table: AliasTable,
    cleans: dict[int, CleanText],
    enriched: dict[int, EnrichedEntry],
) -> tuple[list[Association], list[tuple[int, str]], Lint]:
    """Find mentions of each topic inside every other topic's body."""
    lint = Lint()
    # direction -> (role, where the mention starts); textual roles win over markers
    mentions: dict[tuple[int, int], str] = {}
    unresolved: list[tuple[int, str]] = []
    for a_id in sorted(topics):
        body_tokens = tokenize(CleanText(text=topics[a_id].body))
        norms = [t.normalized for t in body_tokens]
        max_len = max((len(k) for k in alias_table), default=0)
        for i in range(len(body_tokens)):
            for length in range(min(max_len, len(norms) - i), 0, -1):
                key = tuple(norms[i:i + length])
                if key not in alias_table:
                    continue
                b_id = alias_table[key][0]
                if b_id == a_id or b_id not in topics or (a_id, b_id) in mentions:
                    continue
                span = (body_tokens[i].char_span[0], body_tokens[i + length - 1].char_span[1])
                mentions[(a_id, b_id)] = _mention_role(span, enriched.get(a_id))
        # inline marker references
        for ref in cleans[a_id].refs if a_id in cleans else []:
            target = ref.target_id
            if target is None:
                key = tuple(t.normalized for t in tokenize(CleanText(text=ref.surface_term)))
                if key in alias_table and alias_table[key][0] != a_id:
                    target = alias_table[key][0]
            if target is None or target not in topics:
                unresolved.append((a_id, ref.surface_term))
                continue
            if target != a_id and (a_id, target) not in mentions:
                mentions[(a_id, target)] = MARKER_ROLE
    associations: list[Association] = []
    done: set[tuple[int, int]] = set()
    for (a, b) in sorted(mentions):
        if (a, b) in done:
            continue
        if (b, a) in mentions:
            lo, hi = min(a, b), max(a, b)
            associations.append(Association(lo, hi, mentions[(lo, hi)], "TwoWay"))
            done.add((a, b))
            done.add((b, a))
        else:
            associations.append(Association(a, b, mentions[(a, b)], "OneWay"))
            done.add((a, b))
    return associations, unresolved, lint


def _mention_role(span: tuple[int, int], enriched: EnrichedEntry | None) -> str:
    if enriched is None:
        return FALLBACK_ROLE
    best = None
    best_dist = None
    for s in enriched.spans:
        if s.kind != "Role":
            continue
        if s.char_span[1] <= span[0]:
            dist = span[0] - s.char_span[1]
        elif s.char_span[0] >= span[1]:
            dist = s.char_span[0] - span[1]
        else:
            dist = 0
        if best_dist is None or dist < best_dist:
            best, best_dist = s.value.lower(), dist
    return best if best is not None else FALLBACK_ROLE


def assemble(
    topics: list[Topic],
    associations: list[Association],
    unresolved: list[tuple[int, str]] | None = None,
) -> tuple[TopicMap, Lint]:
    """Validate and deduplicate into a TopicMap.

    Duplicate topic ids are a hard corpus-integrity error; associations
    with dangling endpoints degrade to unresolved refs with a lint note.
    """
    lint = Lint()
    topic_map: dict[int, Topic] = {}
    for t in topics:
        if t.id in topic_map:
            raise CorpusError(f"duplicate topic id {t.id}")
        topic_map[t.id] = t
    out_assocs: list[Association] = []
    out_unresolved = list(unresolved or [])
    seen: set[tuple] = set()
    for assoc in associations:
        a = assoc
        if a.directionality == "TwoWay" and isinstance(a.target, int) and a.source > a.target:
            a = Association(a.target, a.source, a.role, "TwoWay")
        if a.source not in topic_map:
            lint.warn(f"association source {a.source} unknown, dropped")
            continue
        if isinstance(a.target, int):
            if a.target not in topic_map:
                lint.warn(f"association target {a.target} unknown, moved to unresolved")
                out_unresolved.append((a.source, str(a.target)))
                continue
            if a.source == a.target:
                lint.warn(f"self-association on topic {a.source}, dropped")
                continue
        key = (a.source, a.target, a.role, a.directionality)
        if key in seen:
            continue
        seen.add(key)
        out_assocs.append(a)
    seen_unres = set()
    dedup_unres = []
    for pair in out_unresolved:
        if pair not in seen_unres:
            seen_unres.add(pair)
            dedup_unres.append(pair)
    return TopicMap(topics=topic_map, associations=out_assocs, unresolved_refs=dedup_unres), lint
