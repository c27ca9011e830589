"""Delay and network analytics over validated pathway records.

The unit of analysis is the encounter: every timeline item that is neither
an anchor nor the first-antipsychotic marker. The marker instead splits the
timeline into a demand epoch (encounters strictly before it) and a supply
epoch (everything from it on); a pathway without the marker is all demand.

Each encounter is attributed the whole delay from its own date to the next
encounter's date (or to admission for the last one), so per-pathway the
attribution sums, together with the onset-to-first-encounter gap, exactly
cover the onset-to-admission span.
"""

from __future__ import annotations

import datetime as dt
import json
import statistics
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .model import (
    AP_CODE,
    NodeCategory,
    NodeType,
    PathwayRecord,
    TimelineItem,
    sorted_sequence,
)

SCHEMA_VERSION = 1

ONSET_NODE = "Onset"
TERMINAL_NODE = "STEP"


class AnalyticsError(Exception):
    pass


class DuplicateSubjectId(AnalyticsError):
    pass


class Epoch(str, Enum):
    DEMAND = "demand"
    SUPPLY = "supply"


@dataclass(frozen=True)
class DelayAttribution:
    """Days attributed to one encounter, tagged with its epoch."""

    subject_id: str
    node: NodeType
    epoch: Epoch
    days: int
    from_date: dt.date
    to_date: dt.date


@dataclass(frozen=True)
class NodeStats:
    category: NodeCategory
    code: str
    total_encounters: int
    pct_of_all_encounters: float
    unique_participants: int
    pct_of_participants: float
    demand_count: int
    demand_median_days: Optional[float]
    demand_min_days: Optional[int]
    demand_max_days: Optional[int]
    supply_count: int
    supply_median_days: Optional[float]
    supply_min_days: Optional[int]
    supply_max_days: Optional[int]


@dataclass(frozen=True)
class CategoryTotals:
    encounters: int
    pct_of_all_encounters: float
    demand_count: int
    supply_count: int


@dataclass(frozen=True)
class CohortStats:
    rows: tuple[NodeStats, ...]
    category_totals: dict[NodeCategory, CategoryTotals]
    total_encounters: int
    total_participants: int


@dataclass(frozen=True)
class CohortGraph:
    """Aggregated transition network: code -> count, (from, to) -> count.

    Node counts include the synthetic Onset source and STEP sink, one
    occurrence of each per pathway.
    """

    nodes: dict[str, int]
    edges: dict[tuple[str, str], int]


def percentage(numerator: int, denominator: int) -> float:
    """Percent rounded to one decimal; 0.0 for an empty denominator."""
    if denominator == 0:
        return 0.0
    return round(100 * numerator / denominator, 1)


def encounter_items(p: PathwayRecord) -> list[TimelineItem]:
    """The sorted sequence stripped of anchors and the AP marker."""
    return [
        item
        for item in sorted_sequence(p)
        if not item.is_anchor and item.code != AP_CODE
    ]


def total_pathway_days(p: PathwayRecord) -> int:
    return (p.admission - p.onset).days


def dup_days(p: PathwayRecord) -> Optional[int]:
    """Days from onset to the AP marker; None when the marker is absent."""
    for event in p.events:
        if event.node.code == AP_CODE:
            return (event.date - p.onset).days
    return None


def help_seeking_delay_days(p: PathwayRecord) -> Optional[int]:
    """Days from onset to the first encounter; None for an encounter-free pathway."""
    encounters = encounter_items(p)
    if not encounters:
        return None
    return (encounters[0].date - p.onset).days


def _ap_position(sequence: list[TimelineItem]) -> Optional[int]:
    for i, item in enumerate(sequence):
        if item.code == AP_CODE:
            return i
    return None


def marginal_delays(p: PathwayRecord) -> list[DelayAttribution]:
    """Attribute the full pathway span to encounters, in sequence order.

    Each encounter owns the days until the next encounter (the AP marker and
    consent do not absorb time); the last encounter owns the days until
    admission. Epoch is demand strictly before the AP marker's sequence
    position, supply from it on; with no marker everything is demand.
    """
    sequence = sorted_sequence(p)
    ap_at = _ap_position(sequence)
    encounters = [
        (i, item)
        for i, item in enumerate(sequence)
        if not item.is_anchor and item.code != AP_CODE
    ]
    attributions = []
    for n, (position, item) in enumerate(encounters):
        if n + 1 < len(encounters):
            to_date = encounters[n + 1][1].date
        else:
            to_date = p.admission
        epoch = Epoch.DEMAND if ap_at is None or position < ap_at else Epoch.SUPPLY
        attributions.append(
            DelayAttribution(
                p.subject_id,
                item.node,
                epoch,
                (to_date - item.date).days,
                item.date,
                to_date,
            )
        )
    return attributions


def _check_unique_subjects(cohort: Iterable[PathwayRecord]) -> list[PathwayRecord]:
    records = list(cohort)
    seen: set[str] = set()
    for p in records:
        if p.subject_id in seen:
            raise DuplicateSubjectId(f"subject {p.subject_id!r} appears twice")
        seen.add(p.subject_id)
    return records


_CATEGORY_RANK = {NodeCategory.COMMUNITY: 0, NodeCategory.CLINICAL: 1}


def cohort_stats(cohort: Iterable[PathwayRecord]) -> CohortStats:
    """Aggregate encounter counts and delay distributions per node type.

    Rows cover the node types that actually occur, community before
    clinical, then by descending encounter count, then code. Medians use
    the mean-of-middle-two convention for even counts.
    """
    records = _check_unique_subjects(cohort)
    attributions = [a for p in records for a in marginal_delays(p)]

    by_node: dict[tuple[NodeCategory, str], list[DelayAttribution]] = {}
    for a in attributions:
        by_node.setdefault((a.node.category, a.node.code), []).append(a)

    total = len(attributions)
    participants = len(records)
    rows = []
    for (category, code), group in by_node.items():
        subjects = {a.subject_id for a in group}
        demand = sorted(a.days for a in group if a.epoch is Epoch.DEMAND)
        supply = sorted(a.days for a in group if a.epoch is Epoch.SUPPLY)
        rows.append(
            NodeStats(
                category=category,
                code=code,
                total_encounters=len(group),
                pct_of_all_encounters=percentage(len(group), total),
                unique_participants=len(subjects),
                pct_of_participants=percentage(len(subjects), participants),
                demand_count=len(demand),
                demand_median_days=float(statistics.median(demand)) if demand else None,
                demand_min_days=demand[0] if demand else None,
                demand_max_days=demand[-1] if demand else None,
                supply_count=len(supply),
                supply_median_days=float(statistics.median(supply)) if supply else None,
                supply_min_days=supply[0] if supply else None,
                supply_max_days=supply[-1] if supply else None,
            )
        )
    rows.sort(key=lambda r: (_CATEGORY_RANK[r.category], -r.total_encounters, r.code))

    totals = {}
    for category in (NodeCategory.COMMUNITY, NodeCategory.CLINICAL):
        group = [a for a in attributions if a.node.category is category]
        totals[category] = CategoryTotals(
            encounters=len(group),
            pct_of_all_encounters=percentage(len(group), total),
            demand_count=sum(1 for a in group if a.epoch is Epoch.DEMAND),
            supply_count=sum(1 for a in group if a.epoch is Epoch.SUPPLY),
        )

    return CohortStats(tuple(rows), totals, total, participants)


def build_cohort_graph(cohort: Iterable[PathwayRecord]) -> CohortGraph:
    """Sum each pathway's Onset -> encounters -> STEP walk into one network."""
    records = _check_unique_subjects(cohort)
    nodes: dict[str, int] = {}
    edges: dict[tuple[str, str], int] = {}
    for p in records:
        walk = [ONSET_NODE] + [item.code for item in encounter_items(p)] + [TERMINAL_NODE]
        for code in walk:
            nodes[code] = nodes.get(code, 0) + 1
        for a, b in zip(walk, walk[1:]):
            edges[(a, b)] = edges.get((a, b), 0) + 1
    return CohortGraph(nodes, edges)


_COMMUNITY_CODES = {"Self", "Family", "Police", "Education", "Other"}
_CLINICAL_CODES = {
    "ED",
    "Inpt",
    "IOP",
    "PCP",
    "Outpt",
    "Acute",
    "Mobile",
    "OtherMH",
    "OtherMed",
}


def render_dot(graph: CohortGraph) -> str:
    """Deterministic Graphviz text: clinical cluster above, community below.

    Edge penwidth and node width scale linearly with their counts so that
    visual weight tracks frequency. An empty graph renders the header and
    footer only.
    """
    lines = ["digraph pathways {", "  rankdir=LR;", '  node [shape=circle, fixedsize=false];']

    def node_line(code: str, indent: str) -> str:
        count = graph.nodes[code]
        width = 0.35 * count
        return (
            f'{indent}"{code}" [label="{code}\\n{count}", width={width:.2f}, '
            f"height={width:.2f}];"
        )

    clinical = sorted(c for c in graph.nodes if c in _CLINICAL_CODES)
    community = sorted(c for c in graph.nodes if c in _COMMUNITY_CODES)
    terminal = sorted(
        c for c in graph.nodes if c not in _CLINICAL_CODES and c not in _COMMUNITY_CODES
    )
    if clinical:
        lines.append("  subgraph cluster_clinical {")
        lines.append('    label="Clinical";')
        lines.extend(node_line(code, "    ") for code in clinical)
        lines.append("  }")
    if community:
        lines.append("  subgraph cluster_community {")
        lines.append('    label="Community";')
        lines.extend(node_line(code, "    ") for code in community)
        lines.append("  }")
    lines.extend(node_line(code, "  ") for code in terminal)
    for (a, b) in sorted(graph.edges):
        count = graph.edges[(a, b)]
        lines.append(f'  "{a}" -> "{b}" [label="{count}", penwidth={float(count):.2f}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_graph_json(graph: CohortGraph) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "nodes": {code: graph.nodes[code] for code in sorted(graph.nodes)},
        "edges": [
            {"from": a, "to": b, "count": graph.edges[(a, b)]}
            for (a, b) in sorted(graph.edges)
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


STATS_COLUMNS = [
    "category",
    "node",
    "total_encounters",
    "pct_of_all_encounters",
    "unique_participants",
    "pct_of_participants",
    "demand_count",
    "demand_median_days",
    "demand_min_days",
    "demand_max_days",
    "supply_count",
    "supply_median_days",
    "supply_min_days",
    "supply_max_days",
]


def _number(value: Optional[float]) -> str:
    if value is None:
        return ""
    if float(value).is_integer():
        return str(int(value))
    return str(value)


def render_stats_csv(stats: CohortStats) -> str:
    """Flat per-node table plus one Total row per category."""
    lines = [",".join(STATS_COLUMNS)]
    for r in stats.rows:
        lines.append(
            ",".join(
                [
                    r.category.value,
                    r.code,
                    str(r.total_encounters),
                    f"{r.pct_of_all_encounters:.1f}",
                    str(r.unique_participants),
                    f"{r.pct_of_participants:.1f}",
                    str(r.demand_count),
                    _number(r.demand_median_days),
                    _number(r.demand_min_days),
                    _number(r.demand_max_days),
                    str(r.supply_count),
                    _number(r.supply_median_days),
                    _number(r.supply_min_days),
                    _number(r.supply_max_days),
                ]
            )
        )
    for category in (NodeCategory.COMMUNITY, NodeCategory.CLINICAL):
        t = stats.category_totals[category]
        lines.append(
            ",".join(
                [
                    category.value,
                    "Total",
                    str(t.encounters),
                    f"{t.pct_of_all_encounters:.1f}",
                    "",
                    "",
                    str(t.demand_count),
                    "",
                    "",
                    "",
                    str(t.supply_count),
                    "",
                    "",
                    "",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def render_stats_json(stats: CohortStats) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "total_encounters": stats.total_encounters,
        "total_participants": stats.total_participants,
        "category_totals": {
            category.value: {
                "encounters": t.encounters,
                "pct_of_all_encounters": t.pct_of_all_encounters,
                "demand_count": t.demand_count,
                "supply_count": t.supply_count,
            }
            for category, t in stats.category_totals.items()
        },
        "rows": [
            {
                "category": r.category.value,
                "node": r.code,
                "total_encounters": r.total_encounters,
                "pct_of_all_encounters": r.pct_of_all_encounters,
                "unique_participants": r.unique_participants,
                "pct_of_participants": r.pct_of_participants,
                "demand_count": r.demand_count,
                "demand_median_days": r.demand_median_days,
                "demand_min_days": r.demand_min_days,
                "demand_max_days": r.demand_max_days,
                "supply_count": r.supply_count,
                "supply_median_days": r.supply_median_days,
                "supply_min_days": r.supply_min_days,
                "supply_max_days": r.supply_max_days,
            }
            for r in stats.rows
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
