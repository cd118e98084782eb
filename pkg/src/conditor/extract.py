"""Semantic enrichment of entry bodies.

Detectors run sentence by sentence: lexicon hits for roles/events,
heuristic place candidates, alias-table person matching, and the
regex date rules from the rules file. Overlapping matches of one kind
are resolved by (priority, span length, rule id), so output is
deterministic for a given (entry, rules) pair.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import CleanText, DateFact, EnrichedEntry, EntitySpan, Lint, MarkerRef, SourceEntry
from .normalize import fold, tokenize
from .rules import RuleSet

AliasTable = dict[tuple[str, ...], tuple[int, str]]  # token tuple -> (topic id, canonical)


@dataclass
class _Candidate:
    kind: str
    span: tuple[int, int]
    value: str
    rule_id: str
    priority: int
    fields: dict[str, str]


def _month_number(ruleset: RuleSet, name: str) -> int | None:
    months = [fold(m) for m in ruleset.lexicon("months")]
    try:
        return months.index(fold(name)) + 1
    except ValueError:
        return None


def _resolve_overlaps(cands: list[_Candidate]) -> list[_Candidate]:
    """Keep higher (priority, length), earlier rule_id on overlap, per kind."""
    survivors: list[_Candidate] = []
    by_kind: dict[str, list[_Candidate]] = {}
    for c in cands:
        by_kind.setdefault(c.kind, []).append(c)
    for kind_cands in by_kind.values():
        kind_cands.sort(key=lambda c: (-c.priority, -(c.span[1] - c.span[0]), c.rule_id, c.span[0]))
        taken: list[tuple[int, int]] = []
        for c in kind_cands:
            if any(c.span[0] < b and a < c.span[1] for a, b in taken):
                continue
            taken.append(c.span)
            survivors.append(c)
    survivors.sort(key=lambda c: (c.span[0], c.kind, c.rule_id))
    return survivors


def detect_roles(sentence: str, ruleset: RuleSet, offset: int = 0) -> list[EntitySpan]:
    """Lexicon hits for role nouns and event verbs in role position."""
    lexicon = {fold(t) for t in ruleset.lexicon("roles")}
    spans = []
    for tok in tokenize(CleanText(text=sentence)):
        if tok.normalized in lexicon:
            a, b = tok.char_span
            spans.append(EntitySpan("Role", (a + offset, b + offset), tok.surface, "lexicon:roles"))
    return spans


def detect_lexicon_kind(sentence: str, ruleset: RuleSet, lexicon_name: str, kind: str,
                        offset: int = 0) -> list[EntitySpan]:
    lexicon = {fold(t) for t in ruleset.lexicon(lexicon_name) if t}
    spans = []
    for tok in tokenize(CleanText(text=sentence)):
        if tok.normalized in lexicon:
            a, b = tok.char_span
            spans.append(EntitySpan(kind, (a + offset, b + offset), tok.surface, f"lexicon:{lexicon_name}"))
    return spans


def detect_places(sentence: str, refs: list[MarkerRef], ruleset: RuleSet,
                  offset: int = 0,
                  place_subcategories: set[int] | None = None,
                  ref_targets: dict[int, int] | None = None) -> list[EntitySpan]:
    """Capitalized tokens after a locative preposition, plus resolvable
    marker terms whose target entry has a place-like subcategory."""
    preps = {fold(t) for t in ruleset.lexicon("locative_prepositions")}
    articles = {fold(t) for t in ruleset.lexicon("articles")}
    tokens = tokenize(CleanText(text=sentence))
    spans: list[EntitySpan] = []
    for i, tok in enumerate(tokens):
        if tok.normalized not in preps:
            continue
        j = i + 1
        while j < len(tokens) and tokens[j].normalized in articles:
            j += 1
        if j >= len(tokens):
            continue
        cand = tokens[j]
        if not cand.surface[0].isupper() or cand.ordinal == 0:
            continue
        # absorb hyphen-joined capitalized continuations ("Al-Andalus")
        end = cand.char_span[1]
        k = j + 1
        while (k < len(tokens) and tokens[k].surface[0].isupper()
               and sentence[end:tokens[k].char_span[0]] == "-"):
            end = tokens[k].char_span[1]
            k += 1
        start = cand.char_span[0]
        spans.append(EntitySpan("Place", (start + offset, end + offset),
                                sentence[start:end], "heuristic:place"))
    if place_subcategories and ref_targets:
        for ref in refs:
            if ref.target_id is not None and ref_targets.get(ref.target_id) in place_subcategories:
                spans.append(EntitySpan("Place", ref.char_span, ref.surface_term, "marker:place"))
    return spans


def detect_persons(sentence: str, alias_table: AliasTable, ruleset: RuleSet,
                   offset: int = 0) -> list[EntitySpan]:
    """Longest-match alias scan plus capitalized particle-run fallback."""
    tokens = tokenize(CleanText(text=sentence))
    norms = [t.normalized for t in tokens]
    max_len = max((len(k) for k in alias_table), default=0)
    spans: list[EntitySpan] = []
    covered = [False] * len(tokens)
    i = 0
    while i < len(tokens):
        hit = None
        for length in range(min(max_len, len(tokens) - i), 0, -1):
            key = tuple(norms[i:i + length])
            if key in alias_table:
                hit = (length, alias_table[key])
                break
        if hit:
            length, (_, canonical) = hit
            a = tokens[i].char_span[0]
            b = tokens[i + length - 1].char_span[1]
            spans.append(EntitySpan("Person", (a + offset, b + offset), canonical, "alias"))
            for k in range(i, i + length):
                covered[k] = True
            i += length
        else:
            i += 1
    particles = {fold(t) for t in ruleset.lexicon("name_particles")}
    i = 0
    while i < len(tokens):
        if covered[i] or not tokens[i].surface[0].isupper():
            i += 1
            continue
        j = i
        has_particle = False
        while j < len(tokens) and not covered[j]:
            tok = tokens[j]
            if tok.surface[0].isupper():
                j += 1
            elif tok.normalized in particles and j > i:
                has_particle = True
                j += 1
            else:
                break
        # trim trailing particle
        while j > i and tokens[j - 1].normalized in particles:
            j -= 1
        if j - i >= 2 and (has_particle or any(tokens[k].normalized in particles for k in range(i, j))):
            a = tokens[i].char_span[0]
            b = tokens[j - 1].char_span[1]
            spans.append(EntitySpan("Person", (a + offset, b + offset),
                                    sentence[a:b].strip(), "name-particles"))
            i = j
        else:
            i += 1
    spans.sort(key=lambda s: s.char_span)
    return spans


def detect_dates(sentence: str, context: list[EntitySpan], refs: list[MarkerRef],
                 ruleset: RuleSet, offset: int = 0,
                 lint: Lint | None = None) -> list[DateFact]:
    """Run the Date rules over one sentence and bind role/location context.

    Context spans use the same coordinate system as `offset` (entry
    coordinates); range patterns yield one fact per endpoint.
    """
    if lint is None:
        lint = Lint()
    cands: list[_Candidate] = []
    for rule in ruleset.by_kind("Date"):
        for m in rule.compiled.finditer(sentence):
            fields = {}
            for name, target in rule.captures.items():
                value = m.group(name)
                if value is not None:
                    fields[target] = value
            cands.append(_Candidate("Date", (m.start() + offset, m.end() + offset),
                                    m.group(0).strip(), rule.rule_id, rule.priority, fields))
    facts: list[DateFact] = []
    for cand in _resolve_overlaps(cands):
        role = _nearest_role(cand.span, context)
        location = _nearest_place(cand.span, context, refs)
        for fact in _facts_from_fields(cand, role, location, ruleset, lint):
            facts.append(fact)
    return facts


def _facts_from_fields(cand: _Candidate, role: str, location: str | None,
                       ruleset: RuleSet, lint: Lint) -> list[DateFact]:
    f = cand.fields
    try:
        if "year_start" in f and "year_end" in f:
            years = [int(f["year_start"]), int(f["year_end"])]
            return [_checked(DateFact(role, location, None, None, y), lint, cand) for y in years if y]
        month = None
        if "month_name" in f:
            month = _month_number(ruleset, f["month_name"])
            if month is None:
                lint.warn(f"rule {cand.rule_id}: unknown month {f['month_name']!r}")
                return []
        elif "month" in f:
            month = int(f["month"])
        day = int(f["day"]) if "day" in f else None
        year = int(f["year"]) if "year" in f else None
        if year is None:
            lint.warn(f"rule {cand.rule_id}: match without a year, skipped")
            return []
        if day is not None and month is None:
            lint.warn(f"rule {cand.rule_id}: day without month, day dropped")
            day = None
        fact = _checked(DateFact(role, location, day, month, year), lint, cand)
        return [fact] if fact else []
    except ValueError:
        lint.warn(f"rule {cand.rule_id}: non-numeric date capture, skipped")
        return []


def _checked(fact: DateFact, lint: Lint, cand: _Candidate) -> DateFact | None:
    if not (0 < fact.year < 3000):
        lint.warn(f"rule {cand.rule_id}: year {fact.year} out of range, skipped")
        return None
    if fact.month is not None and not (1 <= fact.month <= 12):
        lint.warn(f"rule {cand.rule_id}: month {fact.month} out of range, skipped")
        return None
    if fact.day is not None and not (1 <= fact.day <= 31):
        lint.warn(f"rule {cand.rule_id}: day {fact.day} out of range, skipped")
        return None
    return fact


def _nearest_role(span: tuple[int, int], context: list[EntitySpan]) -> str:
    # roles bind in lowercase ("Murió en ..." contributes role "murió")
    roles = [s for s in context if s.kind == "Role"]
    preceding = [s for s in roles if s.char_span[1] <= span[0]]
    if preceding:
        return max(preceding, key=lambda s: s.char_span[1]).value.lower()
    following = [s for s in roles if s.char_span[0] >= span[1]]
    if following:
        return min(following, key=lambda s: s.char_span[0]).value.lower()
    return ""


def _nearest_place(span: tuple[int, int], context: list[EntitySpan],
                   refs: list[MarkerRef]) -> str | None:
    candidates: list[tuple[int, int, str]] = []
    for s in context:
        if s.kind == "Place":
            candidates.append((s.char_span[0], s.char_span[1], s.value))
    for r in refs:
        candidates.append((r.char_span[0], r.char_span[1], r.surface_term))
    best = None
    best_key = None
    for a, b, value in candidates:
        if b <= span[0]:
            dist, tie = span[0] - b, 0  # preceding wins ties
        elif a >= span[1]:
            dist, tie = a - span[1], 1
        else:
            dist, tie = 0, 0
        key = (dist, tie, a)
        if best_key is None or key < best_key:
            best, best_key = value, key
    return best


def apply_generic_rules(sentence: str, ruleset: RuleSet, offset: int = 0) -> list[_Candidate]:
    """Non-Date regex rules become entity-span candidates."""
    cands: list[_Candidate] = []
    for rule in ruleset.rules:
        if rule.kind == "Date":
            continue
        for m in rule.compiled.finditer(sentence):
            value = m.group("value") if "value" in rule.compiled.groupindex else m.group(0)
            cands.append(_Candidate(rule.kind, (m.start() + offset, m.end() + offset),
                                    (value or "").strip(), rule.rule_id, rule.priority, {}))
    return cands


def interpret_entry(entry: SourceEntry, clean: CleanText, ruleset: RuleSet,
                    alias_table: AliasTable | None = None) -> EnrichedEntry:
    """Run all detectors over each sentence of one entry."""
    alias_table = alias_table or {}
    lint = Lint()
    all_spans: list[EntitySpan] = []
    all_facts: list[DateFact] = []
    for s_start, s_end in clean.sentences:
        sentence = clean.text[s_start:s_end]
        refs = [r for r in clean.refs if s_start <= r.char_span[0] < s_end]
        cands = [
            _Candidate(s.kind, s.char_span, s.value, s.rule_id, 0, {})
            for s in (
                detect_roles(sentence, ruleset, s_start)
                + detect_places(sentence, refs, ruleset, s_start)
                + detect_persons(sentence, alias_table, ruleset, s_start)
                + detect_lexicon_kind(sentence, ruleset, "events", "Event", s_start)
                + detect_lexicon_kind(sentence, ruleset, "instruments", "Instrument", s_start)
            )
        ]
        cands += apply_generic_rules(sentence, ruleset, s_start)
        resolved = _resolve_overlaps(cands)
        spans = [EntitySpan(c.kind, c.span, c.value, c.rule_id) for c in resolved]
        all_spans.extend(spans)
        all_facts.extend(detect_dates(sentence, spans, refs, ruleset, s_start, lint))
    enriched = EnrichedEntry(voz_id=entry.voz_id, spans=all_spans, date_facts=all_facts)
    enriched.lints = lint.notes
    return enriched
