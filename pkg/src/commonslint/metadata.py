"""measure_info files: parsing, serialization and citation resolution.

A measure_info file is a JSON object mapping measure ids to metadata
entries, with an optional reserved ``_references`` block holding the
bibliography. Entries keep their raw key/value data verbatim so that
unknown keys, nulls and legacy shapes survive a parse/serialize round
trip untouched; typed views (sources, layer, citations) normalize on
read only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterator

from .errors import DuplicateKeyError, ParseError
from .schema import REFERENCES_KEY


@dataclass(frozen=True)
class SourceRef:
    """One provenance record under an entry's ``sources`` element."""

    name: str
    url: str | None = None
    location: str | None = None
    date_accessed: str | None = None
    extras: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LayerRef:
    """Pointer to a geographic overlay file shown with the measure."""

    source: str
    extras: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ReferenceEntry:
    """One bibliography record; fields are free key/value pairs."""

    ref_id: str
    fields: dict = field(default_factory=dict)


_KNOWN_SOURCE_KEYS = ("name", "url", "location", "date_accessed")


@dataclass(frozen=True)
class MeasureEntry:
    """One measure's metadata record.

    ``data`` is the raw parsed JSON object for the entry; key presence in
    ``data`` distinguishes absent from blank elements.
    """

    measure_id: str
    data: dict = field(default_factory=dict)

    def get(self, key: str, default: Any = None) -> Any:
        return self.data.get(key, default)

    @property
    def is_dynamic(self) -> bool:
        """True when the entry declares a non-empty categories or variants axis."""
        return bool(self.data.get("categories")) or bool(self.data.get("variants"))

    @property
    def citations(self) -> list[str]:
        """Citation keys, normalized to a list (legacy single strings accepted)."""
        raw = self.data.get("citations")
        if raw is None:
            return []
        if isinstance(raw, str):
            return [raw] if raw else []
        if isinstance(raw, list):
            return [c for c in raw if isinstance(c, str)]
        return []

    @property
    def sources(self) -> list[SourceRef]:
        """Source records, normalized to a list (legacy single objects accepted)."""
        raw = self.data.get("sources")
        if raw is None:
            return []
        items = raw if isinstance(raw, list) else [raw]
        out = []
        for item in items:
            if not isinstance(item, dict):
                continue
            extras = {k: v for k, v in item.items() if k not in _KNOWN_SOURCE_KEYS}
            out.append(
                SourceRef(
                    name=str(item.get("name", "")),
                    url=item.get("url"),
                    location=item.get("location"),
                    date_accessed=_as_opt_str(item.get("date_accessed")),
                    extras=extras,
                )
            )
        return out

    @property
    def layer(self) -> LayerRef | None:
        raw = self.data.get("layer")
        if raw is None:
            return None
        if isinstance(raw, str):
            return LayerRef(source=raw) if raw else None
        if isinstance(raw, dict):
            source = raw.get("source")
            if not source:
                return None
            extras = {k: v for k, v in raw.items() if k != "source"}
            return LayerRef(source=str(source), extras=extras)
        return None


def _as_opt_str(value: Any) -> str | None:
    if value is None:
        return None
    return value if isinstance(value, str) else str(value)


@dataclass(frozen=True)
class MeasureInfoFile:
    """A parsed measure_info file.

    ``entries`` preserves file order; ``references`` is None when the file
    has no ``_references`` key at all (distinct from an empty block).
    """

    path: str
    entries: dict[str, MeasureEntry]
    references: dict[str, ReferenceEntry] | None = None

    def __iter__(self) -> Iterator[MeasureEntry]:
        return iter(self.entries.values())

    def reference_ids(self) -> frozenset[str]:
        return frozenset(self.references or {})


def _reject_duplicates(pairs: list[tuple[str, Any]]) -> dict:
    obj: dict = {}
    for key, value in pairs:
        if key in obj:
            raise DuplicateKeyError(key)
        obj[key] = value
    return obj


def parse_measure_info(raw: bytes | str, path: str = "measure_info.json") -> MeasureInfoFile:
    """Parse raw file content into a MeasureInfoFile.

    Raises ParseError (stage "json") for malformed JSON with the line and
    byte offset of the first syntax error, ParseError (stage "structure")
    when the document is valid JSON but not shaped like a measure_info
    file, and DuplicateKeyError when any object repeats a key. Unknown
    entry keys are preserved; rejecting them is validation's job.
    """
    if isinstance(raw, bytes):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}", path=path) from exc
    else:
        text = raw
    try:
        document = json.loads(text, object_pairs_hook=_reject_duplicates)
    except DuplicateKeyError as exc:
        raise DuplicateKeyError(exc.key, path=path) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(
            exc.msg, path=path, line=exc.lineno, offset=exc.pos
        ) from exc

    if not isinstance(document, dict):
        raise ParseError(
            "measure_info root must be a JSON object", path=path, stage="structure"
        )

    references: dict[str, ReferenceEntry] | None = None
    entries: dict[str, MeasureEntry] = {}
    for key, value in document.items():
        if key == REFERENCES_KEY:
            if not isinstance(value, dict):
                raise ParseError(
                    f"{REFERENCES_KEY} must be a JSON object",
                    path=path,
                    stage="structure",
                )
            references = {
                ref_id: ReferenceEntry(ref_id=ref_id, fields=fields if isinstance(fields, dict) else {"value": fields})
                for ref_id, fields in value.items()
            }
            continue
        if not isinstance(value, dict):
            raise ParseError(
                f"measure entry {key!r} must be a JSON object",
                path=path,
                stage="structure",
            )
        entries[key] = MeasureEntry(measure_id=key, data=value)

    return MeasureInfoFile(path=path, entries=entries, references=references)


def load_measure_info(file_path) -> MeasureInfoFile:
    """Read and parse a measure_info file from disk."""
    from pathlib import Path

    p = Path(file_path)
    return parse_measure_info(p.read_bytes(), path=str(p))


def serialize_measure_info(mi: MeasureInfoFile) -> str:
    """Serialize back to the canonical on-disk form.

    UTF-8 JSON, 2-space indentation, lexicographically sorted keys,
    trailing newline. All keys and values are preserved.
    """
    payload: dict[str, Any] = {mid: entry.data for mid, entry in mi.entries.items()}
    if mi.references is not None:
        payload[REFERENCES_KEY] = {rid: ref.fields for rid, ref in mi.references.items()}
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class CitationResolution:
    """Outcome of resolving one citation key for one measure."""

    measure_id: str
    key: str
    resolved: bool
    reference: ReferenceEntry | None = None


def resolve_citations(mi: MeasureInfoFile) -> list[CitationResolution]:
    """Resolve every citation key in the file against its ``_references`` block."""
    refs = mi.references or {}
    resolutions = []
    for entry in mi:
        for key in entry.citations:
            ref = refs.get(key)
            resolutions.append(
                CitationResolution(
                    measure_id=entry.measure_id,
                    key=key,
                    resolved=ref is not None,
                    reference=ref,
                )
            )
    return resolutions
