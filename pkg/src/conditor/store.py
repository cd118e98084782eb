"""Embedded single-writer store for the topic-map object model.

Layout (docs/format-store.md): one record file per type plus an offset
table. Records are length-prefixed, crc32-checked canonical JSON in
UTF-8. Which fields get stored is driven by a declarative descriptor,
and the mapping back is transparent: load() restores every persisted
field exactly, leaving the rest at their empty defaults.
"""

from __future__ import annotations

import dataclasses
import json
import os
import shutil
import struct
import tempfile
import zlib
from dataclasses import dataclass, field
from importlib import resources as importlib_resources

from .model import Association, DateFact, Occurrence, Topic, TopicMap

_TYPES = {
    "Topic": Topic,
    "Association": Association,
    "Occurrence": Occurrence,
    "DateFact": DateFact,
}
_CHILD_FIELDS = {"date_facts": "DateFact", "occurrences": "Occurrence"}
_SEQ_KEY = "_seq"


class StoreError(Exception):
    pass


class IntegrityError(StoreError):
    pass


@dataclass
class TypeDescriptor:
    type_name: str
    key_field: str
    persisted: list[str] = field(default_factory=list)


@dataclass
class PersistenceDescriptor:
    types: dict[str, TypeDescriptor] = field(default_factory=dict)

    def persisted(self, type_name: str) -> list[str]:
        return self.types[type_name].persisted


def parse_descriptor(data: bytes | str) -> PersistenceDescriptor:
    """Parse the stanza-format descriptor, validating field names."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    desc = PersistenceDescriptor()
    current: TypeDescriptor | None = None
    unknown: list[str] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("type "):
            name = line[5:].strip()
            if name not in _TYPES:
                raise StoreError(f"descriptor names unknown type {name!r}")
            current = TypeDescriptor(name, "")
            desc.types[name] = current
            continue
        if current is None:
            raise StoreError(f"descriptor line outside a type stanza: {line!r}")
        valid = {f.name for f in dataclasses.fields(_TYPES[current.type_name])}
        if line.startswith("key "):
            key = line[4:].strip()
            if current.key_field:
                raise StoreError(f"type {current.type_name}: more than one key field")
            if key != _SEQ_KEY and key not in valid:
                unknown.append(f"{current.type_name}.{key}")
            current.key_field = key
            if key != _SEQ_KEY and key not in current.persisted:
                current.persisted.append(key)
        elif line.startswith("persist "):
            name = line[8:].strip()
            if name not in valid:
                unknown.append(f"{current.type_name}.{name}")
            elif name not in current.persisted:
                current.persisted.append(name)
        elif line.startswith("skip "):
            name = line[5:].strip()
            if name not in valid:
                unknown.append(f"{current.type_name}.{name}")
        else:
            raise StoreError(f"bad descriptor line: {line!r}")
    if unknown:
        raise StoreError("descriptor names unknown fields: " + ", ".join(sorted(unknown)))
    for name in _TYPES:
        if name not in desc.types:
            raise StoreError(f"descriptor missing type {name}")
        if not desc.types[name].key_field:
            raise StoreError(f"type {name}: no key field")
    if desc.types["Topic"].key_field != "id":
        raise StoreError("Topic must be keyed by id")
    return desc


def default_descriptor() -> PersistenceDescriptor:
    data = importlib_resources.files("conditor.resources").joinpath("default.store").read_bytes()
    return parse_descriptor(data)


def _dump(obj: dict) -> bytes:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def _write_records(path: str, records: list[dict]) -> list[int]:
    offsets = []
    with open(path, "wb") as fh:
        for record in records:
            payload = _dump(record)
            offsets.append(fh.tell())
            fh.write(struct.pack(">II", len(payload), zlib.crc32(payload) & 0xFFFFFFFF))
            fh.write(payload)
    return offsets


def _read_record(fh) -> dict:
    header = fh.read(8)
    if len(header) != 8:
        raise IntegrityError("truncated record header")
    length, crc = struct.unpack(">II", header)
    payload = fh.read(length)
    if len(payload) != length or (zlib.crc32(payload) & 0xFFFFFFFF) != crc:
        raise IntegrityError("record checksum mismatch")
    return json.loads(payload.decode("utf-8"))


def _project(obj, fields: list[str]) -> dict:
    out = {}
    for name in fields:
        if name in _CHILD_FIELDS:
            continue  # children live in their own record file
        value = getattr(obj, name)
        out[name] = value
    return out


def persist(topic_map: TopicMap, descriptor: PersistenceDescriptor, path: str) -> "StoreHandle":
    """Write the store directory atomically (temp dir + rename)."""
    parent = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(parent, exist_ok=True)
    tmp = tempfile.mkdtemp(prefix=".store-", dir=parent)
    try:
        topic_fields = descriptor.persisted("Topic")
        topic_records = []
        child_records: dict[str, list[dict]] = {"DateFact": [], "Occurrence": []}
        child_owners: dict[str, dict[str, list[int]]] = {"DateFact": {}, "Occurrence": {}}
        for topic_id in sorted(topic_map.topics):
            topic = topic_map.topics[topic_id]
            topic_records.append(_project(topic, topic_fields))
            for attr, type_name in _CHILD_FIELDS.items():
                if attr not in topic_fields:
                    continue
                for seq, child in enumerate(getattr(topic, attr)):
                    data = _project(child, descriptor.persisted(type_name))
                    child_owners[type_name].setdefault(str(topic_id), []).append(
                        len(child_records[type_name])
                    )
                    child_records[type_name].append({"owner": topic_id, "seq": seq, "data": data})
        assoc_fields = descriptor.persisted("Association")
        assoc_records = [_project(a, assoc_fields) for a in topic_map.associations]

        offsets = _write_records(os.path.join(tmp, "Topic.rec"), topic_records)
        topic_idx = {
            "key_field": descriptor.types["Topic"].key_field,
            "offsets": {
                str(rec.get("id", i)): off
                for i, (rec, off) in enumerate(zip(topic_records, offsets))
            },
        }
        _write_json(os.path.join(tmp, "Topic.idx"), topic_idx)
        for type_name in ("DateFact", "Occurrence"):
            offs = _write_records(os.path.join(tmp, f"{type_name}.rec"), child_records[type_name])
            idx = {
                "owners": {
                    owner: [offs[i] for i in idxs]
                    for owner, idxs in child_owners[type_name].items()
                }
            }
            _write_json(os.path.join(tmp, f"{type_name}.idx"), idx)
        offs = _write_records(os.path.join(tmp, "Association.rec"), assoc_records)
        _write_json(os.path.join(tmp, "Association.idx"), {"offsets": {str(i): o for i, o in enumerate(offs)}})
        _write_json(
            os.path.join(tmp, "meta.json"),
            {
                "format": 1,
                "unresolved_refs": [[i, t] for i, t in topic_map.unresolved_refs],
                "descriptor": _descriptor_dict(descriptor),
            },
        )
        if os.path.exists(path):
            shutil.rmtree(path)
        os.rename(tmp, path)
    except Exception:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    return StoreHandle(path)


def _descriptor_dict(descriptor: PersistenceDescriptor) -> dict:
    return {
        name: {"key": td.key_field, "persist": td.persisted}
        for name, td in sorted(descriptor.types.items())
    }


def _write_json(path: str, obj: dict) -> None:
    with open(path, "wb") as fh:
        fh.write(_dump(obj))
        fh.write(b"\n")


NOT_FOUND = object()


class StoreHandle:
    """Read access to a committed store directory."""

    def __init__(self, path: str):
        self.path = path
        if not os.path.isdir(path):
            raise StoreError(f"store directory {path!r} does not exist")
        with open(os.path.join(path, "meta.json"), "rb") as fh:
            self.meta = json.loads(fh.read().decode("utf-8"))
        with open(os.path.join(path, "Topic.idx"), "rb") as fh:
            self._topic_idx = json.loads(fh.read().decode("utf-8"))["offsets"]
        self._child_idx = {}
        for type_name in ("DateFact", "Occurrence"):
            with open(os.path.join(path, f"{type_name}.idx"), "rb") as fh:
                self._child_idx[type_name] = json.loads(fh.read().decode("utf-8"))["owners"]

    def topic_ids(self) -> list[int]:
        return sorted(int(k) for k in self._topic_idx)

    def get_topic(self, topic_id: int):
        """Return the persisted topic projection, or NOT_FOUND."""
        key = str(topic_id)
        if key not in self._topic_idx:
            return NOT_FOUND
        try:
            with open(os.path.join(self.path, "Topic.rec"), "rb") as fh:
                fh.seek(self._topic_idx[key])
                record = _read_record(fh)
        except IntegrityError as exc:
            raise IntegrityError(f"topic {topic_id}: {exc}") from exc
        topic = Topic(id=topic_id)
        for name, value in record.items():
            setattr(topic, name, value)
        topic.date_facts = self._load_children("DateFact", key, DateFact,
                                               dict(role="", location=None, day=None, month=None, year=0))
        topic.occurrences = self._load_children("Occurrence", key, Occurrence,
                                                dict(role_spec="", resource_data=""))
        return topic

    def _load_children(self, type_name: str, owner_key: str, cls, defaults: dict) -> list:
        offsets = self._child_idx[type_name].get(owner_key, [])
        out = []
        if not offsets:
            return out
        with open(os.path.join(self.path, f"{type_name}.rec"), "rb") as fh:
            for off in offsets:
                fh.seek(off)
                record = _read_record(fh)
                kwargs = dict(defaults)
                kwargs.update(record["data"])
                out.append(cls(**kwargs))
        return out

    def load_map(self) -> TopicMap:
        topic_map = TopicMap()
        for topic_id in self.topic_ids():
            topic_map.topics[topic_id] = self.get_topic(topic_id)
        with open(os.path.join(self.path, "Association.rec"), "rb") as fh:
            size = os.path.getsize(os.path.join(self.path, "Association.rec"))
            while fh.tell() < size:
                record = _read_record(fh)
                kwargs = dict(source=0, target=0, role="", directionality="OneWay")
                kwargs.update(record)
                topic_map.associations.append(Association(**kwargs))
        topic_map.unresolved_refs = [(i, t) for i, t in self.meta.get("unresolved_refs", [])]
        return topic_map


def open_store(path: str) -> StoreHandle:
    return StoreHandle(path)
