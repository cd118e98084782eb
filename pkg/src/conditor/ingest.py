"""Source corpus parsing and inline marker decoding.

The corpus is UTF-8 XML: a `<voces>` root with `<voz subcategoriaId="N">`
children, each carrying `<vozId>`, `<nombre>` and `<descripcion>`.
Descriptions contain HTML-escaped paragraph tags plus `$$$term%%id$$$`
cross-reference markers.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET

from .model import CleanText, CorpusError, Lint, MarkerRef, SourceEntry

# term = any run of characters not containing "%%"; id = optional digit run
_MARKER = re.compile(r"\$\$\$((?:[^%]|%(?!%))*?)%%(\d*)\$\$\$")
_PARA_TAG = re.compile(r"</?p\s*/?>", re.IGNORECASE)


def parse_corpus(data: bytes) -> tuple[list[SourceEntry], Lint]:
    """Parse corpus bytes into SourceEntry records in document order.

    Malformed XML raises CorpusError with line/column. Broken entries
    (missing or non-numeric vozId, empty name) are skipped with a lint
    note so a dirty corpus still yields its usable entries.
    """
    lint = Lint()
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise CorpusError(f"malformed corpus XML: {exc}") from exc
    if root.tag != "voces":
        raise CorpusError(f"expected root <voces>, found <{root.tag}>")

    entries: list[SourceEntry] = []
    seen: set[int] = set()
    for pos, voz in enumerate(root.findall("voz")):
        voz_id = _int_child(voz, "vozId")
        if voz_id is None or voz_id <= 0:
            lint.warn(f"voz #{pos}: missing or non-numeric <vozId>, skipped")
            continue
        if voz_id in seen:
            lint.warn(f"voz #{pos}: duplicate vozId {voz_id}, skipped")
            continue
        name = (_text_child(voz, "nombre") or "").strip()
        if not name:
            lint.warn(f"voz {voz_id}: empty <nombre>, skipped")
            continue
        # the figure in the source product shows both spellings of the attribute
        sub_raw = voz.get("subcategoriaId") or voz.get("subcategorialId")
        try:
            subcategory = int(sub_raw) if sub_raw is not None else 0
        except ValueError:
            subcategory = 0
        if subcategory <= 0:
            lint.warn(f"voz {voz_id}: missing subcategoriaId, defaulted to 0")
            subcategory = 0
        description = _text_child(voz, "descripcion") or ""
        seen.add(voz_id)
        entries.append(SourceEntry(voz_id, subcategory, name, description))
    return entries, lint


def extract_markers(raw_text: str) -> tuple[str, list[MarkerRef], Lint]:
    """Strip `$$$term%%id$$$` markers, recording each as a MarkerRef.

    Spans point into the returned text and never overlap. An opening
    `$$$` without a well-formed remainder is kept literally and linted.
    """
    lint = Lint()
    out: list[str] = []
    refs: list[MarkerRef] = []
    out_len = 0
    i = 0
    while True:
        pos = raw_text.find("$$$", i)
        if pos < 0:
            out.append(raw_text[i:])
            break
        out.append(raw_text[i:pos])
        out_len += pos - i
        m = _MARKER.match(raw_text, pos)
        if m is None:
            lint.warn(f"unterminated marker at char {pos}")
            out.append("$$$")
            out_len += 3
            i = pos + 3
            continue
        term, digits = m.group(1), m.group(2)
        target = int(digits) if digits else None
        refs.append(
            MarkerRef(
                surface_term=term,
                target_id=target if target else None,
                char_span=(out_len, out_len + len(term)),
                raw_digits=digits,
            )
        )
        out.append(term)
        out_len += len(term)
        i = m.end()
    return "".join(out), refs, lint


def clean_description(raw: str) -> tuple[CleanText, Lint]:
    """Strip paragraph tags and markers from a raw description.

    Paragraph tags become paragraph boundaries; paragraphs are joined
    with blank lines and marker spans are rebased onto the joined text.
    Sentence intervals are left empty for the normalize stage to fill.
    """
    lint = Lint()
    paras = [p for p in (_PARA_TAG.split(raw)) if p.strip()]
    pieces: list[str] = []
    spans: list[tuple[int, int]] = []
    refs: list[MarkerRef] = []
    offset = 0
    for para in paras:
        text, para_refs, para_lint = extract_markers(para.strip())
        lint.extend(para_lint)
        if pieces:
            offset += 2  # "\n\n" separator
        spans.append((offset, offset + len(text)))
        for ref in para_refs:
            a, b = ref.char_span
            refs.append(MarkerRef(ref.surface_term, ref.target_id, (a + offset, b + offset), ref.raw_digits))
        pieces.append(text)
        offset += len(text)
    return CleanText(text="\n\n".join(pieces), paragraphs=spans, refs=refs), lint


def _text_child(elem: ET.Element, tag: str) -> str | None:
    child = elem.find(tag)
    if child is None:
        return None
    return child.text or ""


def _int_child(elem: ET.Element, tag: str) -> int | None:
    text = _text_child(elem, tag)
    if text is None:
        return None
    try:
        return int(text.strip())
    except ValueError:
        return None
