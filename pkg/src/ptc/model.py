"""Pathway data model: node taxonomy, care events, records, and the validator.

A pathway record captures one participant's journey from psychosis onset to
clinic admission as a list of dated care events framed by three anchor dates
(onset, consent, admission). Every operation here is a pure function: inputs
are never mutated, invalid mutations are rejected outright, and a record that
came out of any operation always satisfies the full invariant set.
"""

from __future__ import annotations

import datetime as dt
import uuid
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional


class NodeCategory(str, Enum):
    """Top-level grouping of timeline node kinds."""

    COMMUNITY = "community"
    CLINICAL = "clinical"
    KEY = "key"
    ANCHOR = "anchor"


@dataclass(frozen=True)
class NodeType:
    """One entry of the closed node taxonomy."""

    category: NodeCategory
    code: str
    display_name: str


# Closed catalog. Codes are unique across the catalog except "Other", which
# exists in both the community and clinical groups and is disambiguated by
# category.
NODE_CATALOG: tuple[NodeType, ...] = (
    NodeType(NodeCategory.COMMUNITY, "Self", "Patient Instigates Care-seeking"),
    NodeType(NodeCategory.COMMUNITY, "Family", "Any Family"),
    NodeType(NodeCategory.COMMUNITY, "Police", "Police"),
    NodeType(NodeCategory.COMMUNITY, "Education", "Teacher or Guidance Counselor"),
    NodeType(NodeCategory.COMMUNITY, "Other", "Other"),
    NodeType(NodeCategory.CLINICAL, "ED", "Emergency Department Visit"),
    NodeType(NodeCategory.CLINICAL, "Inpt", "Psychiatric Inpatient Admission"),
    NodeType(NodeCategory.CLINICAL, "IOP", "Intensive Outpatient"),
    NodeType(NodeCategory.CLINICAL, "PCP", "Primary Care Provider"),
    NodeType(NodeCategory.CLINICAL, "Outpt", "Outpatient Mental Health"),
    NodeType(NodeCategory.CLINICAL, "Acute", "Acute Evaluation"),
    NodeType(NodeCategory.CLINICAL, "Mobile", "Mobile Evaluation"),
    NodeType(NodeCategory.CLINICAL, "OtherMH", "Other Mental Health"),
    NodeType(NodeCategory.CLINICAL, "OtherMed", "Other Medical Provider"),
    NodeType(NodeCategory.CLINICAL, "Other", "Other"),
    NodeType(NodeCategory.KEY, "AP", "First antipsychotic (for psychosis)"),
    NodeType(NodeCategory.ANCHOR, "Onset", "Psychosis Onset"),
    NodeType(NodeCategory.ANCHOR, "Consent", "LHS Consent"),
    NodeType(NodeCategory.ANCHOR, "Admission", "Admission"),
)

AP_CODE = "AP"
OTHER_CODE = "Other"
ONSET_CODE = "Onset"
CONSENT_CODE = "Consent"
ADMISSION_CODE = "Admission"

_BY_CATEGORY_CODE = {(n.category, n.code): n for n in NODE_CATALOG}


class RuleCode(str, Enum):
    """Closed set of validation rule codes."""

    EMPTY_SUBJECT = "EMPTY_SUBJECT"
    ILLEGAL_SUBJECT_CHARS = "ILLEGAL_SUBJECT_CHARS"
    ANCHOR_ORDER = "ANCHOR_ORDER"
    EVENT_OUT_OF_RANGE = "EVENT_OUT_OF_RANGE"
    DUPLICATE_AP = "DUPLICATE_AP"
    DUPLICATE_DATE_ORDER = "DUPLICATE_DATE_ORDER"
    MISSING_CUSTOM_LABEL = "MISSING_CUSTOM_LABEL"
    UNKNOWN_NODE = "UNKNOWN_NODE"


@dataclass(frozen=True)
class Violation:
    rule_code: RuleCode
    message: str
    event_id: Optional[str] = None


class PathwayError(Exception):
    """Base class for rejected pathway operations.

    ``rule_code`` links the error to the validator rule it enforces; it is
    None for errors with no validator counterpart (e.g. unknown event id).
    """

    rule_code: Optional[RuleCode] = None

    def as_violation(self, event_id: Optional[str] = None) -> Violation:
        assert self.rule_code is not None
        return Violation(self.rule_code, str(self), event_id)


class EmptySubjectId(PathwayError):
    rule_code = RuleCode.EMPTY_SUBJECT


class IllegalSubjectChars(PathwayError):
    rule_code = RuleCode.ILLEGAL_SUBJECT_CHARS


class AnchorOrderViolation(PathwayError):
    rule_code = RuleCode.ANCHOR_ORDER


class DateOutOfRange(PathwayError):
    rule_code = RuleCode.EVENT_OUT_OF_RANGE


class DuplicateAp(PathwayError):
    rule_code = RuleCode.DUPLICATE_AP


class UnknownNode(PathwayError):
    rule_code = RuleCode.UNKNOWN_NODE


class MissingCustomLabel(PathwayError):
    rule_code = RuleCode.MISSING_CUSTOM_LABEL


class DuplicateDateOrder(PathwayError):
    rule_code = RuleCode.DUPLICATE_DATE_ORDER


class UnknownEventId(PathwayError):
    rule_code = None


@dataclass(frozen=True)
class CareEvent:
    """One dated care interaction on the timeline.

    ``order`` breaks ties between same-day events; (date, order) is unique
    within a pathway. ``custom_label`` is the free text of an "Other" node
    and is None for every other code.
    """

    event_id: str
    node: NodeType
    date: dt.date
    order: int = 0
    custom_label: Optional[str] = None


@dataclass(frozen=True)
class PathwayRecord:
    subject_id: str
    onset: dt.date
    consent: dt.date
    admission: dt.date
    events: tuple[CareEvent, ...] = ()
    version: int = 1


@dataclass(frozen=True)
class TimelineItem:
    """One slot of the rendered sequence: an event, or an anchor (event=None)."""

    node: NodeType
    date: dt.date
    event: Optional[CareEvent] = None

    @property
    def code(self) -> str:
        return self.node.code

    @property
    def is_anchor(self) -> bool:
        return self.event is None


_UNSET = object()


def node_catalog() -> dict[NodeCategory, tuple[NodeType, ...]]:
    """Full taxonomy grouped by category, in canonical order."""
    grouped: dict[NodeCategory, list[NodeType]] = {c: [] for c in NodeCategory}
    for node in NODE_CATALOG:
        grouped[node.category].append(node)
    return {c: tuple(nodes) for c, nodes in grouped.items()}


def find_node(code: str, category: NodeCategory | str | None = None) -> Optional[NodeType]:
    """Look up a catalog entry by code, optionally narrowed by category.

    Without a category, "Other" resolves to the community entry (the only
    reading the wire format supports); every other code is unique.
    """
    if category is not None:
        try:
            category = NodeCategory(category)
        except ValueError:
            return None
        return _BY_CATEGORY_CODE.get((category, code))
    for node in NODE_CATALOG:
        if node.code == code:
            return node
    return None


def new_event_id() -> str:
    return uuid.uuid4().hex[:12]


def create_pathway(
    subject_id: str, onset: dt.date, consent: dt.date, admission: dt.date
) -> PathwayRecord:
    """Create an empty pathway from the baseline fields.

    Raises EmptySubjectId, IllegalSubjectChars, or AnchorOrderViolation; a
    returned record always satisfies every invariant.
    """
    if not subject_id:
        raise EmptySubjectId("subject_id must be non-empty")
    if any(ch in subject_id for ch in ",\n\r"):
        raise IllegalSubjectChars(
            "subject_id must not contain commas or line breaks"
        )
    if not (onset <= consent <= admission):
        raise AnchorOrderViolation(
            f"anchor dates must satisfy onset <= consent <= admission "
            f"(got {onset}, {consent}, {admission})"
        )
    if onset == admission:
        raise AnchorOrderViolation("onset must precede admission")
    return PathwayRecord(subject_id, onset, consent, admission, (), version=1)


def _resolve_event_node(category: NodeCategory | str, code: str) -> NodeType:
    try:
        cat = NodeCategory(category)
    except ValueError:
        raise UnknownNode(f"unknown node category: {category!r}") from None
    if cat is NodeCategory.ANCHOR:
        raise UnknownNode("anchors cannot be added as events")
    node = _BY_CATEGORY_CODE.get((cat, code))
    if node is None:
        raise UnknownNode(f"unknown node: {cat.value}/{code}")
    return node


def _normalize_label(node: NodeType, custom_label: Optional[str]) -> Optional[str]:
    # The free-text label belongs to the "Other" selection only; for any
    # other code it carries no meaning and is dropped.
    if node.code == OTHER_CODE:
        if not custom_label:
            raise MissingCustomLabel("an Other event requires a custom label")
        return custom_label
    return None


def _auto_order(events: tuple[CareEvent, ...], date: dt.date) -> int:
    same_day = [e.order for e in events if e.date == date]
    return max(same_day) + 1 if same_day else 0


def _check_placement(
    p: PathwayRecord,
    others: tuple[CareEvent, ...],
    node: NodeType,
    date: dt.date,
    order: Optional[int],
) -> int:
    """Validate an event's slot against ``others`` and return its order."""
    if not (p.onset <= date <= p.admission):
        raise DateOutOfRange(
            f"event date {date} outside [{p.onset}, {p.admission}]"
        )
    if node.code == AP_CODE and any(e.node.code == AP_CODE for e in others):
        raise DuplicateAp("the first-antipsychotic event is singular")
    if order is None:
        order = _auto_order(others, date)
    elif order < 0:
        raise ValueError("order must be non-negative")
    if any(e.date == date and e.order == order for e in others):
        raise DuplicateDateOrder(f"an event already occupies ({date}, {order})")
    return order


def add_event(
    p: PathwayRecord,
    category: NodeCategory | str,
    code: str,
    date: dt.date,
    *,
    custom_label: Optional[str] = None,
    order: Optional[int] = None,
) -> tuple[PathwayRecord, str]:
    """Append an event; returns the new record and the event's id.

    When ``order`` is omitted it is assigned as one past the highest order
    already used on that date (0 when the date is new).
    """
    node = _resolve_event_node(category, code)
    label = _normalize_label(node, custom_label)
    order = _check_placement(p, p.events, node, date, order)
    event = CareEvent(new_event_id(), node, date, order, label)
    updated = replace(p, events=p.events + (event,), version=p.version + 1)
    return updated, event.event_id


def _find_event(p: PathwayRecord, event_id: str) -> CareEvent:
    for event in p.events:
        if event.event_id == event_id:
            return event
    raise UnknownEventId(f"no event with id {event_id!r}")


def update_event(
    p: PathwayRecord,
    event_id: str,
    *,
    category: object = _UNSET,
    code: object = _UNSET,
    custom_label: object = _UNSET,
    date: object = _UNSET,
    order: object = _UNSET,
) -> PathwayRecord:
    """Patch any subset of an event's fields, re-checking all invariants.

    The patch is applied atomically: on any error the original record is
    returned untouched (by never having been touched). Moving an event to a
    new date without an explicit order re-assigns the order on that date.
    """
    old = _find_event(p, event_id)
    others = tuple(e for e in p.events if e.event_id != event_id)

    if category is not _UNSET or code is not _UNSET:
        new_cat = old.node.category if category is _UNSET else category
        new_code = old.node.code if code is _UNSET else code
        node = _resolve_event_node(new_cat, new_code)  # type: ignore[arg-type]
    else:
        node = old.node

    new_date = old.date if date is _UNSET else date
    if order is not _UNSET:
        new_order: Optional[int] = order  # type: ignore[assignment]
    elif new_date != old.date:
        new_order = None  # re-assign on the new date
    else:
        new_order = old.order

    if custom_label is not _UNSET:
        label = _normalize_label(node, custom_label)  # type: ignore[arg-type]
    elif node.code == OTHER_CODE:
        label = _normalize_label(node, old.custom_label)
    else:
        label = None

    new_order = _check_placement(p, others, node, new_date, new_order)  # type: ignore[arg-type]
    patched = CareEvent(event_id, node, new_date, new_order, label)  # type: ignore[arg-type]
    events = tuple(patched if e.event_id == event_id else e for e in p.events)
    return replace(p, events=events, version=p.version + 1)


def remove_event(p: PathwayRecord, event_id: str) -> PathwayRecord:
    """Remove an event by id; removal cannot break any invariant."""
    _find_event(p, event_id)
    events = tuple(e for e in p.events if e.event_id != event_id)
    return replace(p, events=events, version=p.version + 1)


def sorted_sequence(p: PathwayRecord) -> list[TimelineItem]:
    """The full timeline: Onset, events by (date, order), Consent, Admission.

    Consent sorts before Admission even when same-dated, and events dated on
    the admission day still precede both closing anchors.
    """
    onset = _BY_CATEGORY_CODE[(NodeCategory.ANCHOR, ONSET_CODE)]
    consent = _BY_CATEGORY_CODE[(NodeCategory.ANCHOR, CONSENT_CODE)]
    admission = _BY_CATEGORY_CODE[(NodeCategory.ANCHOR, ADMISSION_CODE)]
    items = [TimelineItem(onset, p.onset)]
    for event in sorted(p.events, key=lambda e: (e.date, e.order)):
        items.append(TimelineItem(event.node, event.date, event))
    items.append(TimelineItem(consent, p.consent))
    items.append(TimelineItem(admission, p.admission))
    return items


def validate(p: PathwayRecord) -> list[Violation]:
    """Check every invariant; an empty list means the record is valid.

    Accepts records of arbitrary provenance (e.g. hand-built or deserialized)
    as long as they are structurally well-typed; all value-level defects are
    reported, not raised.
    """
    violations: list[Violation] = []

    if not p.subject_id:
        violations.append(
            Violation(RuleCode.EMPTY_SUBJECT, "subject_id must be non-empty")
        )
    elif any(ch in p.subject_id for ch in ",\n\r"):
        violations.append(
            Violation(
                RuleCode.ILLEGAL_SUBJECT_CHARS,
                "subject_id must not contain commas or line breaks",
            )
        )

    if not (p.onset <= p.consent <= p.admission) or p.onset == p.admission:
        violations.append(
            Violation(
                RuleCode.ANCHOR_ORDER,
                f"anchor dates must satisfy onset <= consent <= admission and "
                f"onset < admission (got {p.onset}, {p.consent}, {p.admission})",
            )
        )

    seen_ap = False
    seen_slots: set[tuple[dt.date, int]] = set()
    for event in p.events:
        node = event.node
        if (
            node.category is NodeCategory.ANCHOR
            or _BY_CATEGORY_CODE.get((node.category, node.code)) != node
        ):
            violations.append(
                Violation(
                    RuleCode.UNKNOWN_NODE,
                    f"not an event node: {node.category.value}/{node.code}",
                    event.event_id,
                )
            )
        if not (p.onset <= event.date <= p.admission):
            violations.append(
                Violation(
                    RuleCode.EVENT_OUT_OF_RANGE,
                    f"event date {event.date} outside [{p.onset}, {p.admission}]",
                    event.event_id,
                )
            )
        if node.code == AP_CODE:
            if seen_ap:
                violations.append(
                    Violation(
                        RuleCode.DUPLICATE_AP,
                        "more than one first-antipsychotic event",
                        event.event_id,
                    )
                )
            seen_ap = True
        if node.code == OTHER_CODE:
            if not event.custom_label:
                violations.append(
                    Violation(
                        RuleCode.MISSING_CUSTOM_LABEL,
                        "an Other event requires a custom label",
                        event.event_id,
                    )
                )
        elif event.custom_label:
            violations.append(
                Violation(
                    RuleCode.MISSING_CUSTOM_LABEL,
                    "custom labels are only allowed on Other events",
                    event.event_id,
                )
            )
        slot = (event.date, event.order)
        if slot in seen_slots:
            violations.append(
                Violation(
                    RuleCode.DUPLICATE_DATE_ORDER,
                    f"duplicate (date, order) slot ({event.date}, {event.order})",
                    event.event_id,
                )
            )
        seen_slots.add(slot)

    return violations
