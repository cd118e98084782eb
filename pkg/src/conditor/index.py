"""Inverted index with positions, TF-IDF ranking and phrase queries.

Titles, variants and body text share one postings space per topic; a
one-position gap between fields stops phrases from matching across a
field boundary. Stopwords are indexed but down-weighted, so particles
inside names ("al-Dawla") stay searchable.

score(q, d) = sum over query terms t of tf(t,d) * ln(1 + N/df(t)) * sw(t),
divided by sqrt(doc_length(d)); sw(t) is STOPWORD_DAMPING for stopwords.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

from .model import CleanText, Topic
from .normalize import default_stopwords, tokenize

STOPWORD_DAMPING = 0.1
DEFAULT_K = 10
SNIPPET_RADIUS = 8
_FIELD_GAP = 20  # keeps phrases and snippets from crossing field boundaries


@dataclass
class PostingEntry:
    topic_id: int
    tf: int
    positions: list[int]


@dataclass
class IndexSnapshot:
    doc_count: int = 0
    postings: dict[str, list[PostingEntry]] = field(default_factory=dict)
    doc_lengths: dict[int, int] = field(default_factory=dict)
    doc_tokens: dict[int, list[tuple[int, str]]] = field(default_factory=dict)
    stopwords: frozenset[str] = field(default_factory=frozenset)


@dataclass
class Query:
    clauses: list[str]
    mode: str = "AND"  # AND | OR
    phrase: list[str] | None = None

    @property
    def terms(self) -> list[str]:
        return self.clauses + (self.phrase or [])


@dataclass
class ScoredHit:
    topic_id: int
    score: float
    snippet: str


def build_index(topics: dict[int, Topic], stopwords: set[str] | None = None) -> IndexSnapshot:
    """Index base names, variants and bodies of all topics."""
    if stopwords is None:
        stopwords = default_stopwords()
    snapshot = IndexSnapshot(stopwords=frozenset(stopwords))
    for topic_id in sorted(topics):
        topic = topics[topic_id]
        position = 0
        stream: list[tuple[int, str]] = []
        per_term: dict[str, list[int]] = {}
        fields = [topic.base_name, *topic.variants, topic.body]
        for i, text in enumerate(fields):
            if i:
                position += _FIELD_GAP
            for tok in tokenize(CleanText(text=text)):
                per_term.setdefault(tok.normalized, []).append(position)
                stream.append((position, tok.surface))
                position += 1
        snapshot.doc_lengths[topic_id] = len(stream)
        snapshot.doc_tokens[topic_id] = stream
        for term, positions in per_term.items():
            snapshot.postings.setdefault(term, []).append(
                PostingEntry(topic_id, len(positions), positions)
            )
    snapshot.postings = {t: snapshot.postings[t] for t in sorted(snapshot.postings)}
    snapshot.doc_count = len(topics)
    return snapshot


def parse_query(query_string: str) -> Query:
    """Whitespace-separated terms; `"..."` is a phrase; `OR` toggles mode."""
    phrase: list[str] | None = None
    rest = query_string
    if '"' in query_string:
        first = query_string.index('"')
        second = query_string.find('"', first + 1)
        if second < 0:
            second = len(query_string)
        phrase = [t.normalized for t in tokenize(CleanText(text=query_string[first + 1:second]))]
        rest = query_string[:first] + " " + query_string[second + 1:]
    mode = "AND"
    clauses = []
    for word in rest.split():
        if word == "OR":
            mode = "OR"
            continue
        clauses.extend(t.normalized for t in tokenize(CleanText(text=word)))
    if not clauses and not phrase:
        raise ValueError("empty query")
    return Query(clauses=clauses, mode=mode, phrase=phrase or None)


def _docs_for(snapshot: IndexSnapshot, term: str) -> set[int]:
    return {e.topic_id for e in snapshot.postings.get(term, [])}


def _phrase_docs(snapshot: IndexSnapshot, phrase: list[str]) -> set[int]:
    if not phrase:
        return set()
    candidates = _docs_for(snapshot, phrase[0])
    for term in phrase[1:]:
        candidates &= _docs_for(snapshot, term)
    hits = set()
    for doc in candidates:
        position_sets = []
        for term in phrase:
            entry = next(e for e in snapshot.postings[term] if e.topic_id == doc)
            position_sets.append(set(entry.positions))
        starts = position_sets[0]
        for i, positions in enumerate(position_sets[1:], start=1):
            starts = {p for p in starts if p + i in positions}
        if starts:
            hits.add(doc)
    return hits


def search(snapshot: IndexSnapshot, query: Query, k: int = DEFAULT_K) -> list[ScoredHit]:
    """Ranked retrieval; ties break by ascending topic id."""
    if not query.clauses and not query.phrase:
        raise ValueError("empty query")
    candidates: set[int] | None = None
    if query.clauses:
        sets = [_docs_for(snapshot, t) for t in query.clauses]
        candidates = set.intersection(*sets) if query.mode == "AND" else set.union(*sets)
    if query.phrase:
        phrase_hits = _phrase_docs(snapshot, query.phrase)
        if candidates is None:
            candidates = phrase_hits
        elif query.mode == "AND":
            candidates &= phrase_hits
        else:
            candidates |= phrase_hits
    hits = []
    for doc in sorted(candidates or ()):
        score = score_doc(snapshot, query.terms, doc)
        hits.append(ScoredHit(doc, score, _snippet(snapshot, query.terms, doc)))
    hits.sort(key=lambda h: (-h.score, h.topic_id))
    return hits[:k]


def score_doc(snapshot: IndexSnapshot, terms: list[str], doc: int) -> float:
    """The frozen scoring formula; also used by the brute-force oracle."""
    total = 0.0
    n = snapshot.doc_count
    for term in terms:
        entries = snapshot.postings.get(term, [])
        entry = next((e for e in entries if e.topic_id == doc), None)
        if entry is None:
            continue
        damping = STOPWORD_DAMPING if term in snapshot.stopwords else 1.0
        total += entry.tf * math.log(1.0 + n / len(entries)) * damping
    length = snapshot.doc_lengths.get(doc, 0)
    return total / math.sqrt(length) if length else 0.0


def _snippet(snapshot: IndexSnapshot, terms: list[str], doc: int) -> str:
    best_term = None
    best_weight = None
    n = snapshot.doc_count
    for term in terms:
        entries = snapshot.postings.get(term, [])
        entry = next((e for e in entries if e.topic_id == doc), None)
        if entry is None:
            continue
        damping = STOPWORD_DAMPING if term in snapshot.stopwords else 1.0
        weight = entry.tf * math.log(1.0 + n / len(entries)) * damping
        if best_weight is None or weight > best_weight or (weight == best_weight and term < best_term):
            best_term, best_weight = term, weight
    if best_term is None:
        return ""
    entry = next(e for e in snapshot.postings[best_term] if e.topic_id == doc)
    center = entry.positions[0]
    window = [s for p, s in snapshot.doc_tokens[doc]
              if center - SNIPPET_RADIUS <= p <= center + SNIPPET_RADIUS]
    return " ".join(window)


def save_index(snapshot: IndexSnapshot, store_dir: str) -> None:
    """Write index.json: canonical JSON, byte-stable across runs."""
    doc = {
        "doc_count": snapshot.doc_count,
        "doc_lengths": {str(i): l for i, l in snapshot.doc_lengths.items()},
        "doc_tokens": {str(i): [[p, s] for p, s in toks] for i, toks in snapshot.doc_tokens.items()},
        "postings": {
            term: [[e.topic_id, e.tf, e.positions] for e in entries]
            for term, entries in snapshot.postings.items()
        },
        "stopwords": sorted(snapshot.stopwords),
    }
    payload = json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    with open(os.path.join(store_dir, "index.json"), "wb") as fh:
        fh.write(payload.encode("utf-8"))
        fh.write(b"\n")


def load_index(store_dir: str) -> IndexSnapshot:
    with open(os.path.join(store_dir, "index.json"), "rb") as fh:
        doc = json.loads(fh.read().decode("utf-8"))
    snapshot = IndexSnapshot(
        doc_count=doc["doc_count"],
        doc_lengths={int(i): l for i, l in doc["doc_lengths"].items()},
        doc_tokens={int(i): [(p, s) for p, s in toks] for i, toks in doc["doc_tokens"].items()},
        postings={
            term: [PostingEntry(e[0], e[1], list(e[2])) for e in entries]
            for term, entries in sorted(doc["postings"].items())
        },
        stopwords=frozenset(doc["stopwords"]),
    )
    return snapshot
