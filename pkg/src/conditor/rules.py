"""Externally editable extraction rules.

The rules file is plain UTF-8 text, blank-line separated stanzas:

    rule <id>
    kind <Date|Role|Place|Person|Event|Instrument>
    priority <int>
    flags <i>            # optional, i = case-insensitive
    pattern <regex with (?P<name>...) captures>
    capture <name> -> <field>

    lexicon <name>:
    term
    term

Comments start with `#`. Editing this file changes extraction behaviour
without touching code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources as importlib_resources

KINDS = {"Date", "Role", "Place", "Person", "Event", "Instrument"}


class RuleLoadError(Exception):
    pass


@dataclass
class RuleSpec:
    rule_id: str
    kind: str
    pattern: str
    captures: dict[str, str]
    priority: int = 0
    flags: str = ""
    compiled: re.Pattern = field(default=None, repr=False, compare=False)  # type: ignore[assignment]


@dataclass
class RuleSet:
    rules: list[RuleSpec] = field(default_factory=list)
    lexicons: dict[str, list[str]] = field(default_factory=dict)

    def by_kind(self, kind: str) -> list[RuleSpec]:
        return [r for r in self.rules if r.kind == kind]

    def lexicon(self, name: str) -> list[str]:
        return self.lexicons.get(name, [])


def load_rules(data: bytes | str) -> RuleSet:
    """Parse a rules file; raises RuleLoadError naming the broken rule."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    ruleset = RuleSet()
    seen_ids: set[str] = set()
    stanza: list[str] = []
    for raw_line in text.splitlines() + [""]:
        line = raw_line.rstrip()
        if line.strip().startswith("#"):
            continue
        if line.strip():
            stanza.append(line)
            continue
        if stanza:
            _parse_stanza(stanza, ruleset, seen_ids)
            stanza = []
    return ruleset


def _parse_stanza(lines: list[str], ruleset: RuleSet, seen_ids: set[str]) -> None:
    head = lines[0].strip()
    if head.startswith("lexicon ") and head.endswith(":"):
        name = head[len("lexicon "):-1].strip()
        ruleset.lexicons.setdefault(name, []).extend(l.strip() for l in lines[1:])
        return
    if not head.startswith("rule "):
        raise RuleLoadError(f"stanza must start with 'rule' or 'lexicon', got: {head!r}")
    rule_id = head[len("rule "):].strip()
    if rule_id in seen_ids:
        raise RuleLoadError(f"duplicate rule id {rule_id!r}")
    seen_ids.add(rule_id)
    kind = ""
    priority = 0
    flags = ""
    pattern = None
    captures: dict[str, str] = {}
    for line in lines[1:]:
        stripped = line.strip()
        if stripped.startswith("kind "):
            kind = stripped[5:].strip()
        elif stripped.startswith("priority "):
            try:
                priority = int(stripped[9:].strip())
            except ValueError:
                raise RuleLoadError(f"rule {rule_id!r}: bad priority {stripped[9:]!r}")
        elif stripped.startswith("flags "):
            flags = stripped[6:].strip()
        elif stripped.startswith("pattern "):
            pattern = stripped[8:]
        elif stripped.startswith("capture "):
            m = re.match(r"capture\s+(\S+)\s*->\s*(\S+)$", stripped)
            if not m:
                raise RuleLoadError(f"rule {rule_id!r}: bad capture line {stripped!r}")
            captures[m.group(1)] = m.group(2)
        else:
            raise RuleLoadError(f"rule {rule_id!r}: unknown directive {stripped!r}")
    if kind not in KINDS:
        raise RuleLoadError(f"rule {rule_id!r}: unknown kind {kind!r}")
    if pattern is None:
        raise RuleLoadError(f"rule {rule_id!r}: missing pattern")
    re_flags = re.UNICODE | (re.IGNORECASE if "i" in flags else 0)
    try:
        compiled = re.compile(pattern, re_flags)
    except re.error as exc:
        raise RuleLoadError(f"rule {rule_id!r}: bad pattern at position {exc.pos}: {exc.msg}")
    for name in captures:
        if name not in compiled.groupindex:
            raise RuleLoadError(f"rule {rule_id!r}: capture {name!r} not present in pattern")
    ruleset.rules.append(
        RuleSpec(rule_id, kind, pattern, captures, priority, flags, compiled)
    )


def default_rules() -> RuleSet:
    """The shipped rule set (resources/rules.conf)."""
    data = importlib_resources.files("conditor.resources").joinpath("rules.conf").read_bytes()
    return load_rules(data)
