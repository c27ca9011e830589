"""Local-first workbench for pathways-to-care records.

Core model and validation live in :mod:`ptc.model`, wire formats in
:mod:`ptc.codec`, delay/network analytics in :mod:`ptc.analytics`, the
file-backed store in :mod:`ptc.store`, and the HTTP service and CLI in
:mod:`ptc.service` / :mod:`ptc.cli`.
"""

from .model import (
    CareEvent,
    NodeCategory,
    NodeType,
    PathwayRecord,
    RuleCode,
    Violation,
    add_event,
    create_pathway,
    node_catalog,
    remove_event,
    sorted_sequence,
    update_event,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "CareEvent",
    "NodeCategory",
    "NodeType",
    "PathwayRecord",
    "RuleCode",
    "Violation",
    "add_event",
    "create_pathway",
    "node_catalog",
    "remove_event",
    "sorted_sequence",
    "update_event",
    "validate",
    "__version__",
]
