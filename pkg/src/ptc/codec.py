"""Wire formats: the two-row CSV export and the JSON session document.

The CSV format is the interchange surface consumed by downstream network
tooling: one header-free row of node codes starting with the subject id, and
a second row of MM/DD/YY dates with an empty field under the subject id. The
session document is the lossless at-rest form; a full round trip through it
reproduces the record exactly, event ids and all.
"""

from __future__ import annotations

import datetime as dt
import json
from typing import Any, Optional

from .model import (
    ADMISSION_CODE,
    CONSENT_CODE,
    NODE_CATALOG,
    ONSET_CODE,
    OTHER_CODE,
    CareEvent,
    NodeCategory,
    NodeType,
    PathwayRecord,
    Violation,
    find_node,
    new_event_id,
    sorted_sequence,
    validate,
)

SCHEMA_VERSION = 1

# Two-digit years cover 1970-2069: 00-69 map to 20xx, 70-99 to 19xx.
PIVOT_MIN = dt.date(1970, 1, 1)
PIVOT_MAX = dt.date(2069, 12, 31)

UNSPECIFIED_LABEL = "(unspecified)"


class CodecError(Exception):
    """Base class for serialization and parsing failures."""


class DateOutOfPivotRange(CodecError):
    pass


class MalformedDate(CodecError):
    pass


class InvalidPathway(CodecError):
    """Export was asked to serialize a record that fails validation."""

    def __init__(self, violations: list[Violation]):
        codes = ", ".join(v.rule_code.value for v in violations)
        super().__init__(f"record fails validation: {codes}")
        self.violations = violations


class RowCountMismatch(CodecError):
    pass


class ColumnCountMismatch(CodecError):
    pass


class MissingAnchors(CodecError):
    pass


class NonChronological(CodecError):
    pass


class ParseValidation(CodecError):
    """Input parsed structurally but the resulting record is invalid."""

    def __init__(self, violations: list[Violation]):
        codes = ", ".join(v.rule_code.value for v in violations)
        super().__init__(f"parsed record fails validation: {codes}")
        self.violations = violations


class MalformedDocument(CodecError):
    pass


class SchemaVersionUnsupported(CodecError):
    pass


def format_date(d: dt.date) -> str:
    """Render MM/DD/YY, zero-padded; rejects dates the pivot cannot express."""
    if not (PIVOT_MIN <= d <= PIVOT_MAX):
        raise DateOutOfPivotRange(
            f"{d.isoformat()} outside the two-digit-year range "
            f"[{PIVOT_MIN.isoformat()}, {PIVOT_MAX.isoformat()}]"
        )
    return f"{d.month:02d}/{d.day:02d}/{d.year % 100:02d}"


def parse_date(text: str) -> dt.date:
    """Parse strict zero-padded MM/DD/YY using the 1970-2069 pivot."""
    if (
        len(text) != 8
        or text[2] != "/"
        or text[5] != "/"
        or not (text[0:2] + text[3:5] + text[6:8]).isdigit()
    ):
        raise MalformedDate(f"expected MM/DD/YY, got {text!r}")
    month, day, yy = int(text[0:2]), int(text[3:5]), int(text[6:8])
    year = 2000 + yy if yy <= 69 else 1900 + yy
    try:
        return dt.date(year, month, day)
    except ValueError:
        raise MalformedDate(f"no such calendar date: {text!r}") from None


def export_filename(subject_id: str, csv_suffix: bool = False) -> str:
    return f"PTC-{subject_id}.{'csv' if csv_suffix else 'txt'}"


def export_csv(p: PathwayRecord) -> str:
    """Serialize the full sorted sequence to the two-row CSV text.

    Line 1: subject id, then node codes of every timeline item in order.
    Line 2: empty field, then each item's date as MM/DD/YY.
    Lines end with LF, including the last.
    """
    violations = validate(p)
    if violations:
        raise InvalidPathway(violations)
    sequence = sorted_sequence(p)
    codes = ",".join([p.subject_id] + [item.code for item in sequence])
    dates = ",".join([""] + [format_date(item.date) for item in sequence])
    return f"{codes}\n{dates}\n"


def _wire_node(code: str) -> NodeType:
    # "Other" on the wire means the community entry; unknown codes get a
    # placeholder so the validator can report them as UNKNOWN_NODE instead
    # of the parser dropping them.
    node = find_node(code)
    if node is not None:
        return node
    return NodeType(NodeCategory.COMMUNITY, code, code)


def parse_csv(text: str) -> PathwayRecord:
    """Parse the two-row CSV text back into a validated record.

    Accepts CRLF line endings and an optional trailing newline. Event ids
    are freshly assigned, same-day order follows column order, and Other
    events get a placeholder custom label; the record version is 1.
    """
    lines = text.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) != 2:
        raise RowCountMismatch(f"expected 2 rows, got {len(lines)}")

    code_fields = lines[0].split(",")
    date_fields = lines[1].split(",")
    if len(code_fields) != len(date_fields):
        raise ColumnCountMismatch(
            f"row lengths differ: {len(code_fields)} vs {len(date_fields)}"
        )
    if len(code_fields) < 4:
        raise MissingAnchors("a pathway has at least onset, consent, admission")

    subject_id = code_fields[0]
    codes = code_fields[1:]
    if codes[0] != ONSET_CODE or codes[-2:] != [CONSENT_CODE, ADMISSION_CODE]:
        raise MissingAnchors(
            "row must start with Onset and end with Consent, Admission"
        )
    if date_fields[0] != "":
        raise MalformedDate("the field under the subject id must be empty")
    dates = [parse_date(field) for field in date_fields[1:]]

    onset, consent, admission = dates[0], dates[-2], dates[-1]
    event_pairs = list(zip(codes[1:-2], dates[1:-2]))

    # Chronology applies to the onset-through-events prefix only; the consent
    # column may legitimately precede late events.
    previous = onset
    for _, date in event_pairs:
        if date < previous:
            raise NonChronological(
                f"event dates must be non-decreasing ({date} after {previous})"
            )
        previous = date

    events = []
    order_by_date: dict[dt.date, int] = {}
    for code, date in event_pairs:
        node = _wire_node(code)
        order = order_by_date.get(date, 0)
        order_by_date[date] = order + 1
        label = UNSPECIFIED_LABEL if node.code == OTHER_CODE else None
        events.append(CareEvent(new_event_id(), node, date, order, label))

    record = PathwayRecord(
        subject_id, onset, consent, admission, tuple(events), version=1
    )
    violations = validate(record)
    if violations:
        raise ParseValidation(violations)
    return record


def record_to_doc(p: PathwayRecord) -> dict[str, Any]:
    """The record as a plain JSON-ready dict (the session 'pathway' object)."""
    return {
        "subject_id": p.subject_id,
        "onset": p.onset.isoformat(),
        "consent": p.consent.isoformat(),
        "admission": p.admission.isoformat(),
        "version": p.version,
        "events": [
            {
                "event_id": e.event_id,
                "category": e.node.category.value,
                "code": e.node.code,
                "custom_label": e.custom_label,
                "date": e.date.isoformat(),
                "order": e.order,
            }
            for e in p.events
        ],
    }


def serialize_session(p: PathwayRecord) -> str:
    """Render the versioned JSON session document for a valid record."""
    violations = validate(p)
    if violations:
        raise InvalidPathway(violations)
    doc = {"schema_version": SCHEMA_VERSION, "pathway": record_to_doc(p)}
    return json.dumps(doc, indent=2) + "\n"


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise MalformedDocument(message)


def _iso_date(value: Any, field: str) -> dt.date:
    _require(isinstance(value, str), f"{field} must be an ISO date string")
    try:
        return dt.date.fromisoformat(value)
    except ValueError:
        raise MalformedDocument(f"{field} is not a valid ISO date: {value!r}") from None


def doc_to_record(doc: Any) -> PathwayRecord:
    """Build a record from a session 'pathway' object, checking structure only."""
    _require(isinstance(doc, dict), "pathway must be an object")
    subject_id = doc.get("subject_id")
    _require(isinstance(subject_id, str), "subject_id must be a string")
    onset = _iso_date(doc.get("onset"), "onset")
    consent = _iso_date(doc.get("consent"), "consent")
    admission = _iso_date(doc.get("admission"), "admission")
    version = doc.get("version")
    _require(
        isinstance(version, int) and not isinstance(version, bool) and version >= 1,
        "version must be a positive integer",
    )
    raw_events = doc.get("events")
    _require(isinstance(raw_events, list), "events must be a list")

    events = []
    seen_ids: set[str] = set()
    for i, raw in enumerate(raw_events):
        _require(isinstance(raw, dict), f"events[{i}] must be an object")
        event_id = raw.get("event_id")
        _require(
            isinstance(event_id, str) and bool(event_id),
            f"events[{i}].event_id must be a non-empty string",
        )
        _require(event_id not in seen_ids, f"duplicate event_id {event_id!r}")
        seen_ids.add(event_id)
        category = raw.get("category")
        _require(
            isinstance(category, str) and category in NodeCategory._value2member_map_,
            f"events[{i}].category must be a known category",
        )
        code = raw.get("code")
        _require(isinstance(code, str) and bool(code), f"events[{i}].code must be a string")
        label = raw.get("custom_label")
        _require(
            label is None or isinstance(label, str),
            f"events[{i}].custom_label must be a string or null",
        )
        date = _iso_date(raw.get("date"), f"events[{i}].date")
        order = raw.get("order")
        _require(
            isinstance(order, int) and not isinstance(order, bool) and order >= 0,
            f"events[{i}].order must be a non-negative integer",
        )
        node = find_node(code, NodeCategory(category))
        if node is None:
            # Keep the event; the validator reports UNKNOWN_NODE.
            node = NodeType(NodeCategory(category), code, code)
        events.append(CareEvent(event_id, node, date, order, label))

    return PathwayRecord(
        subject_id, onset, consent, admission, tuple(events), version=version
    )


def deserialize_session(text: str) -> PathwayRecord:
    """Parse and validate a session document; the inverse of serialize_session."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from None
    _require(isinstance(doc, dict), "document root must be an object")
    schema_version = doc.get("schema_version")
    _require(
        isinstance(schema_version, int) and not isinstance(schema_version, bool),
        "schema_version must be an integer",
    )
    if schema_version != SCHEMA_VERSION:
        raise SchemaVersionUnsupported(
            f"schema_version {schema_version} not supported (expected {SCHEMA_VERSION})"
        )
    record = doc_to_record(doc.get("pathway"))
    violations = validate(record)
    if violations:
        raise ParseValidation(violations)
    return record
