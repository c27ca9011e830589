"""Batch front door: validate, analyze, graph, export, and serve.

Inputs are files or directories; directories contribute their *.csv, *.txt,
and *.session files in sorted order, so every command is deterministic for
a given tree. When one subject appears both as a CSV export and a session
document, the session document wins (it is the richer form).

Exit codes: 0 success, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import analytics
from .codec import (
    CodecError,
    ParseValidation,
    deserialize_session,
    export_csv,
    export_filename,
    parse_csv,
)
from .model import PathwayRecord
from .store import StoreConfig

INPUT_SUFFIXES = (".csv", ".txt", ".session")


class CliError(Exception):
    """Data-level failure; message printed to stderr, exit code 1."""


def collect_input_files(paths: Sequence[str]) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            found = [
                p
                for p in sorted(path.iterdir())
                if p.is_file() and p.suffix in INPUT_SUFFIXES
            ]
            files.extend(found)
        elif path.is_file():
            files.append(path)
        else:
            raise CliError(f"no such file or directory: {path}")
    return files


def load_file(path: Path) -> PathwayRecord:
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".session":
        return deserialize_session(text)
    return parse_csv(text)


def load_cohort(paths: Sequence[str]) -> list[PathwayRecord]:
    """Parse all inputs into one cohort, applying the session-wins rule."""
    chosen: dict[str, tuple[PathwayRecord, bool]] = {}
    for path in collect_input_files(paths):
        try:
            record = load_file(path)
        except CodecError as exc:
            raise CliError(f"{path}: {exc}") from None
        is_session = path.suffix == ".session"
        existing = chosen.get(record.subject_id)
        if existing is None:
            chosen[record.subject_id] = (record, is_session)
        elif is_session and not existing[1]:
            chosen[record.subject_id] = (record, is_session)
        elif is_session == existing[1]:
            raise CliError(
                f"DuplicateSubjectId: subject {record.subject_id!r} appears "
                f"in more than one {'session' if is_session else 'CSV'} file"
            )
        # else: CSV duplicate of an already-loaded session; session wins
    return [record for record, _ in sorted(chosen.values(), key=lambda t: t[0].subject_id)]


def _write_output(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_validate(args: argparse.Namespace) -> int:
    files = collect_input_files(args.paths)
    print(f"{len(files)} files")
    failures = 0
    for path in files:
        try:
            load_file(path)
        except ParseValidation as exc:
            codes = ", ".join(v.rule_code.value for v in exc.violations)
            print(f"{path}: FAIL {codes}")
            failures += 1
        except CodecError as exc:
            print(f"{path}: FAIL {type(exc).__name__}: {exc}")
            failures += 1
        else:
            print(f"{path}: OK")
    return 1 if failures else 0


def cmd_stats(args: argparse.Namespace) -> int:
    cohort = load_cohort(args.paths)
    stats = analytics.cohort_stats(cohort)
    if args.format == "doc":
        text = analytics.render_stats_json(stats)
    else:
        text = analytics.render_stats_csv(stats)
    _write_output(text, args.out)
    return 0


def cmd_graph(args: argparse.Namespace) -> int:
    cohort = load_cohort(args.paths)
    graph = analytics.build_cohort_graph(cohort)
    if args.format == "doc":
        text = analytics.render_graph_json(graph)
    else:
        text = analytics.render_dot(graph)
    _write_output(text, args.out)
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir)
    if not out_dir.is_dir():
        raise CliError(f"output directory does not exist: {out_dir}")
    for record in load_cohort(args.paths):
        name = export_filename(record.subject_id, csv_suffix=args.csv_suffix)
        (out_dir / name).write_text(export_csv(record), encoding="utf-8")
        print(out_dir / name)
    return 0


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


def cmd_serve(args: argparse.Namespace) -> int:
    from . import service
    from .store import StoreError

    data_dir = args.data_dir or os.environ.get("PTC_DATA_DIR")
    if not data_dir:
        print("serve: --data-dir (or PTC_DATA_DIR) is required", file=sys.stderr)
        return 2
    bind = args.bind or os.environ.get("PTC_BIND") or "127.0.0.1:7423"
    read_only = args.read_only or _env_flag("PTC_READ_ONLY")
    token = args.token or os.environ.get("PTC_TOKEN") or None
    config = StoreConfig(Path(data_dir), bind, read_only)
    static_dir = Path(args.static_dir) if args.static_dir else None
    try:
        service.run_server(config, token=token, static_dir=static_dir)
    except ValueError as exc:
        print(f"serve: {exc}", file=sys.stderr)
        return 1
    except StoreError as exc:
        print(f"serve: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptc",
        description="Validate, analyze, and serve pathways-to-care records.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="parse and validate input files")
    p_validate.add_argument("paths", nargs="+")
    p_validate.set_defaults(func=cmd_validate)

    p_stats = sub.add_parser("stats", help="cohort delay statistics")
    p_stats.add_argument("paths", nargs="+")
    p_stats.add_argument("--format", choices=("csv", "doc"), default="csv")
    p_stats.add_argument("--out")
    p_stats.set_defaults(func=cmd_stats)

    p_graph = sub.add_parser("graph", help="aggregate transition network")
    p_graph.add_argument("paths", nargs="+")
    p_graph.add_argument("--format", choices=("dot", "doc"), default="dot")
    p_graph.add_argument("--out")
    p_graph.set_defaults(func=cmd_graph)

    p_export = sub.add_parser("export", help="write interchange CSV per pathway")
    p_export.add_argument("paths", nargs="+")
    p_export.add_argument("--out-dir", required=True)
    p_export.add_argument(
        "--csv-suffix",
        action="store_true",
        help="name outputs PTC-<subject>.csv instead of .txt",
    )
    p_export.set_defaults(func=cmd_export)

    p_serve = sub.add_parser("serve", help="run the local HTTP service")
    p_serve.add_argument("--data-dir")
    p_serve.add_argument("--bind", help="host:port (default 127.0.0.1:7423)")
    p_serve.add_argument("--read-only", action="store_true")
    p_serve.add_argument("--token")
    p_serve.add_argument("--static-dir", help="directory of UI assets to serve at /")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except analytics.AnalyticsError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
