"""Shared fixtures: the golden interchange sample and its frozen analytics.

The frozen numbers were computed with the enumeration oracle in oracles.py
before the engine existed; tests assert the engine reproduces them.
"""

from __future__ import annotations

import datetime as dt

import pytest

from ptc.codec import parse_csv
from ptc.model import PathwayRecord, add_event, create_pathway

GOLDEN_CSV = (
    "Example123,Onset,Family,Police,ED,Inpt,AP,Family,Acute,Outpt,Self,Consent,Admission\n"
    ",01/01/22,04/14/22,06/20/22,06/20/22,07/17/22,07/27/22,09/13/22,09/13/22,10/02/22,03/06/23,04/05/23,04/05/23\n"
)

# Frozen from the day-walking oracle applied to GOLDEN_CSV.
FIXTURE_TOTAL_DAYS = 459
FIXTURE_DUP_DAYS = 207
FIXTURE_HELP_SEEKING_DAYS = 103
FIXTURE_DELAYS = [
    ("Family", "demand", 67),
    ("Police", "demand", 0),
    ("ED", "demand", 27),
    ("Inpt", "demand", 58),
    ("Family", "supply", 0),
    ("Acute", "supply", 19),
    ("Outpt", "supply", 155),
    ("Self", "supply", 30),
]

FIXTURE_EDGES = {
    ("Onset", "Family"): 1,
    ("Family", "Police"): 1,
    ("Police", "ED"): 1,
    ("ED", "Inpt"): 1,
    ("Inpt", "Family"): 1,
    ("Family", "Acute"): 1,
    ("Acute", "Outpt"): 1,
    ("Outpt", "Self"): 1,
    ("Self", "STEP"): 1,
}


@pytest.fixture
def fixture_record() -> PathwayRecord:
    return parse_csv(GOLDEN_CSV)


@pytest.fixture
def small_record() -> PathwayRecord:
    """Two-event pathway handy for mutation-style unit tests."""
    p = create_pathway(
        "subj-1", dt.date(2021, 3, 1), dt.date(2021, 9, 1), dt.date(2021, 10, 1)
    )
    p, _ = add_event(p, "community", "Family", dt.date(2021, 4, 1))
    p, _ = add_event(p, "clinical", "ED", dt.date(2021, 5, 1))
    return p
