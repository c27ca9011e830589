"""Independent reference implementations used to cross-check the engine.

Nothing here calls into ptc.analytics. Day counts walk the calendar one day
at a time, the sequence order is built by selection on the defining key, and
the cohort rollups are naive dict-and-loop versions computed from those
primitives. Agreement between these and the production code is what the
equivalence tests assert.
"""

from __future__ import annotations

import datetime as dt

from ptc.model import NodeCategory, PathwayRecord


def day_count(a: dt.date, b: dt.date) -> int:
    """Days from a to b, counted by stepping the calendar (no subtraction)."""
    if b < a:
        return -day_count(b, a)
    n = 0
    current = a
    while current < b:
        current += dt.timedelta(days=1)
        n += 1
    return n


def naive_sequence(p: PathwayRecord) -> list[tuple[str, dt.date, object]]:
    """(code, date, event) triples: onset, events by repeated minimum, anchors."""
    remaining = list(p.events)
    ordered = []
    while remaining:
        best = remaining[0]
        for e in remaining[1:]:
            if (e.date, e.order) < (best.date, best.order):
                best = e
        ordered.append(best)
        remaining.remove(best)
    items: list[tuple[str, dt.date, object]] = [("Onset", p.onset, None)]
    items += [(e.node.code, e.date, e) for e in ordered]
    items += [("Consent", p.consent, None), ("Admission", p.admission, None)]
    return items


def naive_delays(p: PathwayRecord) -> list[tuple[str, str, str, int]]:
    """(subject, code, epoch, days) per encounter, from the written definition."""
    sequence = naive_sequence(p)
    ap_at = None
    for i, (code, _, event) in enumerate(sequence):
        if event is not None and code == "AP":
            ap_at = i
    encounters = [
        (i, code, date, event)
        for i, (code, date, event) in enumerate(sequence)
        if event is not None and code != "AP"
    ]
    out = []
    for n, (position, code, date, _) in enumerate(encounters):
        if n + 1 < len(encounters):
            to_date = encounters[n + 1][2]
        else:
            to_date = p.admission
        epoch = "demand" if ap_at is None or position < ap_at else "supply"
        out.append((p.subject_id, code, epoch, day_count(date, to_date)))
    return out


def naive_help_seeking(p: PathwayRecord) -> int | None:
    sequence = naive_sequence(p)
    for code, date, event in sequence:
        if event is not None and code != "AP":
            return day_count(p.onset, date)
    return None


def naive_dup(p: PathwayRecord) -> int | None:
    for e in p.events:
        if e.node.code == "AP":
            return day_count(p.onset, e.date)
    return None


def naive_total(p: PathwayRecord) -> int:
    return day_count(p.onset, p.admission)


def naive_median(values: list[int]) -> float:
    """Median by definition: middle value, or mean of the middle two."""
    ordered = sorted(values)
    n = len(ordered)
    if n % 2 == 1:
        return float(ordered[n // 2])
    return (ordered[n // 2 - 1] + ordered[n // 2]) / 2


def naive_pct(n: int, d: int) -> float:
    return 0.0 if d == 0 else round(100 * n / d, 1)


def naive_stats(cohort: list[PathwayRecord]) -> dict:
    """Per-(category, code) rollup as plain dicts, plus totals."""
    # pair each delay with its event's category by walking the sequence again
    tagged = []
    for p in cohort:
        sequence = naive_sequence(p)
        delays = naive_delays(p)
        k = 0
        for code, date, event in sequence:
            if event is None or code == "AP":
                continue
            subject, dcode, epoch, days = delays[k]
            assert dcode == code
            tagged.append((subject, event.node.category, code, epoch, days))
            k += 1

    total = len(tagged)
    participants = len(cohort)
    rows: dict[tuple[NodeCategory, str], dict] = {}
    for subject, category, code, epoch, days in tagged:
        row = rows.setdefault(
            (category, code),
            {"count": 0, "subjects": set(), "demand": [], "supply": []},
        )
        row["count"] += 1
        row["subjects"].add(subject)
        row[epoch].append(days)

    result = {}
    for key, row in rows.items():
        result[key] = {
            "total_encounters": row["count"],
            "pct_of_all_encounters": naive_pct(row["count"], total),
            "unique_participants": len(row["subjects"]),
            "pct_of_participants": naive_pct(len(row["subjects"]), participants),
            "demand_count": len(row["demand"]),
            "demand_median": naive_median(row["demand"]) if row["demand"] else None,
            "demand_min": min(row["demand"]) if row["demand"] else None,
            "demand_max": max(row["demand"]) if row["demand"] else None,
            "supply_count": len(row["supply"]),
            "supply_median": naive_median(row["supply"]) if row["supply"] else None,
            "supply_min": min(row["supply"]) if row["supply"] else None,
            "supply_max": max(row["supply"]) if row["supply"] else None,
        }
    totals = {}
    for category in (NodeCategory.COMMUNITY, NodeCategory.CLINICAL):
        group = [t for t in tagged if t[1] is category]
        totals[category] = {
            "encounters": len(group),
            "pct_of_all_encounters": naive_pct(len(group), total),
            "demand_count": sum(1 for t in group if t[3] == "demand"),
            "supply_count": sum(1 for t in group if t[3] == "supply"),
        }
    return {
        "rows": result,
        "totals": totals,
        "total_encounters": total,
        "total_participants": participants,
    }


def assert_stats_match(stats, naive: dict) -> None:
    """Field-by-field equality between engine CohortStats and naive_stats output."""
    assert stats.total_encounters == naive["total_encounters"]
    assert stats.total_participants == naive["total_participants"]
    engine_rows = {(r.category, r.code): r for r in stats.rows}
    assert set(engine_rows) == set(naive["rows"])
    for key, expected in naive["rows"].items():
        row = engine_rows[key]
        assert row.total_encounters == expected["total_encounters"]
        assert row.pct_of_all_encounters == expected["pct_of_all_encounters"]
        assert row.unique_participants == expected["unique_participants"]
        assert row.pct_of_participants == expected["pct_of_participants"]
        assert row.demand_count == expected["demand_count"]
        assert row.demand_median_days == expected["demand_median"]
        assert row.demand_min_days == expected["demand_min"]
        assert row.demand_max_days == expected["demand_max"]
        assert row.supply_count == expected["supply_count"]
        assert row.supply_median_days == expected["supply_median"]
        assert row.supply_min_days == expected["supply_min"]
        assert row.supply_max_days == expected["supply_max"]
    for category, expected in naive["totals"].items():
        totals = stats.category_totals[category]
        assert totals.encounters == expected["encounters"]
        assert totals.pct_of_all_encounters == expected["pct_of_all_encounters"]
        assert totals.demand_count == expected["demand_count"]
        assert totals.supply_count == expected["supply_count"]


def naive_graph(cohort: list[PathwayRecord]) -> tuple[dict, dict]:
    """(node counts, edge counts) from each pathway's Onset..STEP walk."""
    nodes: dict[str, int] = {}
    edges: dict[tuple[str, str], int] = {}
    for p in cohort:
        walk = ["Onset"]
        for code, date, event in naive_sequence(p):
            if event is not None and code != "AP":
                walk.append(code)
        walk.append("STEP")
        for code in walk:
            nodes[code] = nodes.get(code, 0) + 1
        for i in range(len(walk) - 1):
            pair = (walk[i], walk[i + 1])
            edges[pair] = edges.get(pair, 0) + 1
    return nodes, edges
