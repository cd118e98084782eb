"""XTM-DITA serialization of a TopicMap, and its inverse.

The element set is frozen in docs/format-xtm-dita.md. Emission is
byte-deterministic: fixed element and attribute order, fixed escaping,
two-space indentation, UTF-8. Leaf elements carry their text inline so
whitespace survives a round trip.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .model import Association, DateFact, Lint, Occurrence, Topic, TopicMap

DITAARCH_NS = "http://dita.oasis-open.org/architecture/2005/"
XLINK_NS = "http://www.w3.org/1999/xlink"

_TOPICREF_ATTRS = (
    'xlink:type="simple" xlink:show="replace" xlink:actuate="onRequest"'
)


class XtmParseError(Exception):
    pass


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _esc_attr(text: str) -> str:
    return _esc(text).replace('"', "&quot;")


def emit_xtm_dita(topic_map: TopicMap) -> bytes:
    """Serialize to the combined XTM-DITA format."""
    w: list[str] = []
    w.append('<?xml version="1.0" encoding="UTF-8"?>')
    if not topic_map.topics and not topic_map.associations and not topic_map.unresolved_refs:
        w.append(f'<voces xmlns:ditaarch="{DITAARCH_NS}" xmlns:xlink="{XLINK_NS}"/>')
        w.append("")
        return "\n".join(w).encode("utf-8")
    w.append(
        f'<voces xmlns:ditaarch="{DITAARCH_NS}" xmlns:xlink="{XLINK_NS}">'
    )
    for topic_id in sorted(topic_map.topics):
        _emit_topic(w, topic_map.topics[topic_id])
    if topic_map.associations or topic_map.unresolved_refs:
        w.append("<associations>")
        for assoc in topic_map.associations:
            _emit_association(w, assoc)
        for source, term in topic_map.unresolved_refs:
            w.append(f'  <unresolved source="{source}"><term>{_esc(term)}</term></unresolved>')
        w.append("</associations>")
    w.append("</voces>")
    w.append("")
    return "\n".join(w).encode("utf-8")


def _emit_topic(w: list[str], t: Topic) -> None:
    w.append(f'<topic id="{t.id}">')
    w.append("  <baseName>")
    w.append(f"    <baseNameString>{_esc(t.base_name)}</baseNameString>")
    for variant in t.variants:
        w.append("    <variant>")
        w.append("      <variantName>")
        w.append(f"        <resourceData>{_esc(variant)}</resourceData>")
        w.append("      </variantName>")
        w.append("    </variant>")
    w.append("  </baseName>")
    w.append("  <instanceOf>")
    w.append(f'    <topicRef {_TOPICREF_ATTRS} xlink:href="#{t.instance_of}"/>')
    w.append("  </instanceOf>")
    w.append("  <contents>")
    w.append(f"    <shortdesc>{_esc(t.shortdesc)}</shortdesc>")
    w.append(f"    <body>{_esc(t.body)}</body>")
    w.append("  </contents>")
    for fact in t.date_facts:
        w.append("  <date>")
        w.append(f"    <role>{_esc(fact.role)}</role>")
        if fact.location is not None:
            w.append(f"    <location>{_esc(fact.location)}</location>")
        if fact.day is not None:
            w.append(f"    <day>{fact.day}</day>")
        if fact.month is not None:
            w.append(f"    <month>{fact.month}</month>")
        w.append(f"    <year>{fact.year}</year>")
        w.append("  </date>")
    for occ in t.occurrences:
        w.append("  <occurrence>")
        w.append(f"    <roleSpec>{_esc(occ.role_spec)}</roleSpec>")
        w.append(f"    <resourceData>{_esc(occ.resource_data)}</resourceData>")
        w.append("  </occurrence>")
    w.append("</topic>")


def _emit_association(w: list[str], a: Association) -> None:
    w.append("  <association>")
    w.append(f"    <role>{_esc(a.role)}</role>")
    w.append(f'    <member ref="#{a.source}"/>')
    if isinstance(a.target, int):
        w.append(f'    <member ref="#{a.target}"/>')
    else:
        w.append(f"    <member><name>{_esc(a.target)}</name></member>")
    direction = "two-way" if a.directionality == "TwoWay" else "one-way"
    w.append(f"    <direction>{direction}</direction>")
    w.append("  </association>")


_KNOWN_TOPIC_CHILDREN = {"baseName", "instanceOf", "contents", "date", "occurrence"}


def parse_xtm_dita(data: bytes) -> tuple[TopicMap, Lint]:
    """Parse the emitted format back into a TopicMap."""
    lint = Lint()
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise XtmParseError(f"malformed XTM-DITA document: {exc}") from exc
    if root.tag != "voces":
        raise XtmParseError(f"expected root <voces>, found <{root.tag}>")
    topic_map = TopicMap()
    for child in root:
        if child.tag == "topic":
            topic = _parse_topic(child, lint)
            topic_map.topics[topic.id] = topic
        elif child.tag == "associations":
            _parse_associations(child, topic_map, lint)
        else:
            lint.warn(f"ignored unknown element <{child.tag}>")
    return topic_map, lint


def _parse_topic(elem: ET.Element, lint: Lint) -> Topic:
    raw_id = elem.get("id")
    if raw_id is None:
        raise XtmParseError("<topic> element lacks an id attribute")
    try:
        topic_id = int(raw_id)
    except ValueError:
        raise XtmParseError(f"<topic> id {raw_id!r} is not numeric")

    base = elem.find("baseName")
    if base is None or base.find("baseNameString") is None:
        raise XtmParseError(f"topic {topic_id}: missing <baseName>/<baseNameString>")
    base_name = base.find("baseNameString").text or ""
    variants = [
        (rd.text or "")
        for rd in base.findall("variant/variantName/resourceData")
    ]

    instance = elem.find("instanceOf/topicRef")
    if instance is None:
        raise XtmParseError(f"topic {topic_id}: missing <instanceOf>/<topicRef>")
    href = instance.get(f"{{{XLINK_NS}}}href") or instance.get("href") or ""
    try:
        instance_of = int(href.lstrip("#"))
    except ValueError:
        raise XtmParseError(f"topic {topic_id}: bad topicRef href {href!r}")

    contents = elem.find("contents")
    if contents is None:
        raise XtmParseError(f"topic {topic_id}: missing <contents>")
    shortdesc = _text(contents.find("shortdesc"))
    body = _text(contents.find("body"))

    facts = []
    for d in elem.findall("date"):
        year_el = d.find("year")
        if year_el is None:
            raise XtmParseError(f"topic {topic_id}: <date> missing <year>")
        location_el = d.find("location")
        facts.append(
            DateFact(
                role=_text(d.find("role")),
                location=None if location_el is None else (location_el.text or ""),
                day=_opt_int(d.find("day")),
                month=_opt_int(d.find("month")),
                year=int(year_el.text or 0),
            )
        )
    occurrences = [
        Occurrence(_text(o.find("roleSpec")), _text(o.find("resourceData")))
        for o in elem.findall("occurrence")
    ]
    for child in elem:
        if child.tag not in _KNOWN_TOPIC_CHILDREN:
            lint.warn(f"topic {topic_id}: ignored unknown element <{child.tag}>")
    return Topic(topic_id, base_name, variants, instance_of, shortdesc, body, facts, occurrences)


def _parse_associations(elem: ET.Element, topic_map: TopicMap, lint: Lint) -> None:
    for child in elem:
        if child.tag == "association":
            role = _text(child.find("role"))
            members = child.findall("member")
            if len(members) != 2:
                raise XtmParseError("<association> must have exactly two members")
            source = _member_value(members[0])
            target = _member_value(members[1])
            if not isinstance(source, int):
                raise XtmParseError("association source must be a topic reference")
            direction_el = child.find("direction")
            direction = "TwoWay" if _text(direction_el) == "two-way" else "OneWay"
            topic_map.associations.append(Association(source, target, role, direction))
        elif child.tag == "unresolved":
            source = int(child.get("source", "0"))
            topic_map.unresolved_refs.append((source, _text(child.find("term"))))
        else:
            lint.warn(f"ignored unknown element <{child.tag}> in <associations>")


def _member_value(member: ET.Element) -> int | str:
    ref = member.get("ref")
    if ref is not None:
        try:
            return int(ref.lstrip("#"))
        except ValueError:
            raise XtmParseError(f"bad member ref {ref!r}")
    return _text(member.find("name"))


def _text(elem: ET.Element | None) -> str:
    if elem is None:
        return ""
    return elem.text or ""


def _opt_int(elem: ET.Element | None) -> int | None:
    if elem is None or elem.text is None:
        return None
    return int(elem.text)
