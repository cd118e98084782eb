"""Core object model shared by every pipeline stage.

All types are plain dataclasses with value semantics; equality is deep,
which the round-trip tests rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field


Span = tuple[int, int]  # half-open character interval


@dataclass
class SourceEntry:
    """One raw corpus record as read from the source XML."""

    voz_id: int
    subcategory_id: int
    name: str
    raw_description: str


@dataclass
class MarkerRef:
    """An inline cross-reference extracted from the entry body.

    char_span points into the cleaned (marker-free) text and always
    slices out exactly surface_term.
    """

    surface_term: str
    target_id: int | None
    char_span: Span
    # raw digit run from the marker, kept so delimiters can be re-inserted
    # byte-exactly (leading zeros survive); not part of value equality
    raw_digits: str = field(default="", compare=False, repr=False)


@dataclass
class CleanText:
    """Marker-free, HTML-free prose with structural intervals."""

    text: str
    sentences: list[Span] = field(default_factory=list)
    paragraphs: list[Span] = field(default_factory=list)
    refs: list[MarkerRef] = field(default_factory=list)


@dataclass
class Token:
    surface: str
    normalized: str
    char_span: Span
    ordinal: int


@dataclass
class TitleName:
    """Entry title split into particles, with matchable alias variants."""

    canonical: str
    particles: list[str]
    aliases: list[str]


@dataclass
class EntitySpan:
    """A typed span found by the extraction rules."""

    kind: str  # Date | Role | Place | Person | Event | Instrument
    char_span: Span
    value: str
    rule_id: str


@dataclass
class DateFact:
    role: str
    location: str | None
    day: int | None
    month: int | None
    year: int


@dataclass
class EnrichedEntry:
    """All facts extracted from one entry body."""

    voz_id: int
    spans: list[EntitySpan] = field(default_factory=list)
    date_facts: list[DateFact] = field(default_factory=list)
    lints: list[str] = field(default_factory=list)


@dataclass
class Occurrence:
    role_spec: str
    resource_data: str


@dataclass
class Association:
    source: int
    target: int | str  # topic id, or unresolved name
    role: str
    directionality: str  # "OneWay" | "TwoWay"


@dataclass
class Topic:
    id: int
    base_name: str = ""
    variants: list[str] = field(default_factory=list)
    instance_of: int = 0
    shortdesc: str = ""
    body: str = ""
    date_facts: list[DateFact] = field(default_factory=list)
    occurrences: list[Occurrence] = field(default_factory=list)


@dataclass
class TopicMap:
    topics: dict[int, Topic] = field(default_factory=dict)
    associations: list[Association] = field(default_factory=list)
    unresolved_refs: list[tuple[int, str]] = field(default_factory=list)


class CorpusError(Exception):
    """Fatal corpus-level failure (malformed XML, duplicate ids)."""


class Lint:
    """Accumulator for non-fatal per-entry problems."""

    def __init__(self) -> None:
        self.notes: list[str] = []

    def warn(self, message: str) -> None:
        self.notes.append(message)

    def extend(self, other: "Lint") -> None:
        self.notes.extend(other.notes)

    def __len__(self) -> int:
        return len(self.notes)
