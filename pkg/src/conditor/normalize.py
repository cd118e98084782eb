"""Text cleaning: sentence segmentation, tokenization, title merging.

The corpus is Spanish prose. Normalized token forms are lowercased with
diacritics folded (á -> a) but "ñ" kept, since it is a distinct letter.
Surface forms are preserved untouched for display and emission.
"""

from __future__ import annotations

import re
import unicodedata
from importlib import resources as importlib_resources

from .model import CleanText, Span, TitleName, Token

_WORD = re.compile(r"[^\W_]+", re.UNICODE)
_ROMAN = re.compile(r"^[ivxl]+$")

# connective particles kept in canonical names but optional for matching
CONNECTIVES = {"ibn", "al", "de", "la", "ben", "del", "el"}

_ENYE = "ñ"
_ENYE_SENTINEL = "\ue000"  # private-use placeholder, survives NFD


def _load_wordlist(name: str) -> list[str]:
    text = importlib_resources.files("conditor.resources").joinpath(name).read_text("utf-8")
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def default_abbreviations() -> set[str]:
    return set(_load_wordlist("abbreviations.txt"))


def default_stopwords() -> set[str]:
    return set(_load_wordlist("stopwords.txt"))


def fold(text: str) -> str:
    """Lowercase and strip combining marks, preserving the letter ñ."""
    lowered = text.lower().replace(_ENYE, _ENYE_SENTINEL)
    decomposed = unicodedata.normalize("NFD", lowered)
    stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
    return unicodedata.normalize("NFC", stripped).replace(_ENYE_SENTINEL, _ENYE)


def segment(clean: CleanText, abbreviations: set[str] | None = None) -> CleanText:
    """Fill in sentence intervals on a marker-free CleanText.

    A sentence ends at `.`, `!` or `?` followed by whitespace and an
    uppercase letter, or at end of text. A period after a single letter
    or a known abbreviation (incl. lowercase roman numerals) never
    splits.
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()
    text = clean.text
    sentences: list[Span] = []
    paragraphs = clean.paragraphs or ([(0, len(text))] if text.strip() else [])
    for p_start, p_end in paragraphs:
        start = p_start
        i = p_start
        while i < p_end:
            ch = text[i]
            if ch in ".!?" and _is_break(text, i, p_end, abbreviations):
                sentences.append((_skip_ws(text, start, p_end), i + 1))
                start = i + 1
            i += 1
        tail = _skip_ws(text, start, p_end)
        if tail < p_end and text[tail:p_end].strip():
            sentences.append((tail, p_end))
    return CleanText(text=text, sentences=sentences, paragraphs=paragraphs, refs=clean.refs)


def _is_break(text: str, i: int, end: int, abbreviations: set[str]) -> bool:
    if text[i] == ".":
        word = _word_before(text, i)
        if len(word) == 1 and word.isalpha():
            return False
        if word.lower() in abbreviations or _ROMAN.match(word):
            return False
    j = i + 1
    while j < end and text[j].isspace():
        j += 1
    if j >= end:
        return True
    return j > i + 1 and text[j].isupper()


def _word_before(text: str, i: int) -> str:
    j = i
    while j > 0 and (text[j - 1].isalnum()):
        j -= 1
    return text[j:i]


def _skip_ws(text: str, i: int, end: int) -> int:
    while i < end and text[i].isspace():
        i += 1
    return i


def tokenize(clean: CleanText) -> list[Token]:
    """Split into maximal letter/digit runs; hyphens and punctuation separate."""
    tokens: list[Token] = []
    for ordinal, m in enumerate(_WORD.finditer(clean.text)):
        surface = m.group(0)
        normalized = fold(surface) or surface.lower()
        tokens.append(Token(surface, normalized, (m.start(), m.end()), ordinal))
    return tokens


def tokenize_text(text: str) -> list[Token]:
    return tokenize(CleanText(text=text))


def merge_title_name(title: str) -> TitleName:
    """Merge an entry title into a canonical name plus matchable aliases.

    Aliases cover the full form and a variant with connective particles
    (ibn, al, de, ...) dropped, so the crossing-search can match either.
    """
    particles = title.split()
    canonical = " ".join(particles)
    aliases = [canonical]
    without = [p for p in particles if fold(p.strip("-")) not in CONNECTIVES]
    reduced = " ".join(without)
    if reduced and reduced != canonical:
        aliases.append(reduced)
    return TitleName(canonical=canonical, particles=particles, aliases=aliases)
