"""Command-line entry point: build, evaluate and serve suggestion indexes.

Exit codes: 0 success, 1 usage error, 2 data error (empty/corrupt inputs),
3 I/O error. Diagnostics go to stderr; reports go to stdout.
"""

import argparse
import hashlib
import json
import os
import sys
from collections import Counter
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterator, Sequence

from . import server as server_mod
from .evaluate import DEFAULT_K, evaluate, render_report
from .index import IndexFormatError, SuggestIndex
from .ingest import (
    IngestError,
    IngestStats,
    SplitSpec,
    apply_denylist,
    apply_threshold,
    ingest_anchors,
    read_denylist,
    read_query_log,
    split_train_test,
)
from .normalize import normalize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

DEFAULT_CUTOFF = "2006-05-08 00:00:00"
DEFAULT_TEST_FRACTION = 0.01
DEFAULT_SEED = 0
DEFAULT_MIN_COUNT = {"anchor": 15, "log": 1}


class DataError(Exception):
    """Input was readable but unusable (empty after filtering, corrupt)."""


@dataclass
class BuildConfig:
    source: str  # "anchor" | "log"
    inputs: list[Path]
    output: Path
    min_count: int
    deny_path: Path | None
    url_filter: bool
    anchor_field: int
    split: SplitSpec | None  # log only
    test_output: Path | None  # log only


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {number}")
    return number


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="anchorsuggest",
        description="Frequency-ranked query autocompletion from anchor texts or query logs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    # "required" flags are validated after the optional config file merges
    # in, so a config can supply them and explicit flags still override

    build = sub.add_parser("build", help="ingest a source and write an index file")
    build.add_argument(
        "--config", metavar="PATH",
        help="JSON file of flag defaults (underscored keys); flags override",
    )
    build.add_argument("--source", choices=("anchor", "log"))
    build.add_argument(
        "--input", nargs="+", metavar="PATH",
        help="input file(s); tab-separated anchors or AOL-style query log",
    )
    build.add_argument("--output", metavar="PATH", help="index file to write")
    build.add_argument(
        "--min-count", type=int, default=None, metavar="N",
        help="drop suggestions occurring fewer than N times (default: 15 anchor, 1 log)",
    )
    build.add_argument("--deny-list", metavar="PATH", help="one phrase per line; # comments")
    build.add_argument(
        "--no-url-filter", action="store_true",
        help="keep suggestions containing URL substrings (http:, www., .com, ...)",
    )
    build.add_argument(
        "--anchor-field", type=int, default=-1, metavar="I",
        help="tab-separated column holding the anchor text (default: last)",
    )
    build.add_argument(
        "--cutoff", default=DEFAULT_CUTOFF, metavar="WHEN",
        help='train/test date boundary, "YYYY-MM-DD[ HH:MM:SS]" (log source)',
    )
    build.add_argument(
        "--test-fraction", type=float, default=DEFAULT_TEST_FRACTION, metavar="F",
        help="fraction of users held out for testing (log source)",
    )
    build.add_argument(
        "--seed", type=int, default=DEFAULT_SEED,
        help="seed for the user-split hash (log source)",
    )
    build.add_argument(
        "--test-output", metavar="PATH",
        help="file for held-out test queries, one per line (required for log source)",
    )

    ev = sub.add_parser("evaluate", help="run the 10-prefix MRR protocol on an index")
    ev.add_argument(
        "--config", metavar="PATH",
        help="JSON file of flag defaults (underscored keys); flags override",
    )
    ev.add_argument("--index", metavar="PATH")
    ev.add_argument("--test-queries", metavar="PATH", help="one query per line")
    ev.add_argument("--k", type=_positive_int, default=DEFAULT_K)
    ev.add_argument("--format", choices=("text", "csv", "json"), default="text")
    ev.add_argument(
        "--exclude-misses", action="store_true",
        help="average MRR over found queries only (sensitivity mode)",
    )

    # serve falls back to ANCHORSUGGEST_* environment variables so the
    # server can be configured without a command line (container use)
    srv = sub.add_parser("serve", help="serve /suggest and /health over HTTP")
    srv.add_argument(
        "--config", metavar="PATH",
        help="JSON file of flag defaults (underscored keys); flags override",
    )
    srv.add_argument("--index", metavar="PATH",
                     default=os.environ.get("ANCHORSUGGEST_INDEX"))
    srv.add_argument("--host", default=os.environ.get("ANCHORSUGGEST_HOST", "127.0.0.1"))
    srv.add_argument("--port", type=int,
                     default=int(os.environ.get("ANCHORSUGGEST_PORT", "8080")))
    srv.add_argument("--default-k", type=_positive_int,
                     default=int(os.environ.get("ANCHORSUGGEST_DEFAULT_K", server_mod.DEFAULT_K)))
    srv.add_argument("--max-k", type=_positive_int,
                     default=int(os.environ.get("ANCHORSUGGEST_MAX_K", server_mod.MAX_K)))
    return parser


def _require(args, parser: argparse.ArgumentParser, *names: str) -> None:
    for name in names:
        if getattr(args, name) in (None, []):
            parser.error(f"--{name.replace('_', '-')} is required")


def _apply_config_file(args, argv, parser: argparse.ArgumentParser) -> None:
    """Fill unset flags from the JSON config; explicit flags keep priority."""
    if not getattr(args, "config", None):
        return
    try:
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read --config {args.config}: {exc}")
    if not isinstance(loaded, dict):
        parser.error(f"--config {args.config} must hold a JSON object")
    bogus = set(loaded) - set(vars(args))
    if bogus:
        parser.error(f"unknown config keys: {', '.join(sorted(bogus))}")
    explicit = {
        token[2:].split("=", 1)[0].replace("-", "_")
        for token in argv
        if token.startswith("--")
    }
    for key, value in loaded.items():
        if key not in explicit:
            setattr(args, key, value)


def _parse_cutoff(value: str) -> datetime:
    for fmt in ("%Y-%m-%d %H:%M:%S", "%Y-%m-%d"):
        try:
            return datetime.strptime(value, fmt)
        except ValueError:
            continue
    raise ValueError(f'cutoff must be "YYYY-MM-DD[ HH:MM:SS]", got {value!r}')


def _build_config(args, parser: argparse.ArgumentParser) -> BuildConfig:
    if args.source not in ("anchor", "log"):
        parser.error(f"--source must be anchor or log, got {args.source!r}")
    # values may come from a JSON config, so coerce numeric flags here
    min_count = int(args.min_count) if args.min_count is not None else None
    if min_count is None:
        min_count = DEFAULT_MIN_COUNT[args.source]
    if min_count < 1:
        parser.error(f"--min-count must be >= 1, got {min_count}")
    split = None
    test_output = None
    if args.source == "log":
        if not args.test_output:
            parser.error("--test-output is required with --source log")
        try:
            cutoff = _parse_cutoff(args.cutoff)
            split = SplitSpec(cutoff, float(args.test_fraction), int(args.seed))
        except ValueError as exc:
            parser.error(str(exc))
        test_output = Path(args.test_output)
    inputs = [Path(p) for p in ([args.input] if isinstance(args.input, str) else args.input)]
    output = Path(args.output)
    deny = Path(args.deny_list) if args.deny_list else None
    used = inputs + [p for p in (deny, test_output) if p is not None]
    if any(p.resolve() == output.resolve() for p in used):
        parser.error("--output must differ from every input path")
    return BuildConfig(
        source=args.source,
        inputs=inputs,
        output=output,
        min_count=min_count,
        deny_path=deny,
        url_filter=not args.no_url_filter,
        anchor_field=int(args.anchor_field),
        split=split,
        test_output=test_output,
    )


def _iter_log_files(paths: Sequence[Path], stats: IngestStats) -> Iterator:
    for path in paths:
        with open(path, encoding="utf-8", errors="replace") as fh:
            yield from read_query_log(fh, stats)


def cmd_build(config: BuildConfig) -> int:
    stats = IngestStats()
    metadata = {
        "source": config.source,
        "min_count": config.min_count,
        "url_filter": config.url_filter,
        "deny_digest": None,
    }
    if config.source == "anchor":
        counted: Counter = Counter()
        for path in config.inputs:
            with open(path, encoding="utf-8", errors="replace") as fh:
                counted.update(
                    ingest_anchors(fh, config.anchor_field, config.url_filter, stats)
                )
        print(f"read {stats.lines} lines ({stats.malformed} malformed, skipped)")
        print(f"counted {stats.kept} fragments ({stats.url_filtered} URL-filtered)")
    else:
        split = config.split
        counted, test_queries = split_train_test(
            _iter_log_files(config.inputs, stats), split
        )
        metadata["cutoff"] = split.cutoff.strftime("%Y-%m-%d %H:%M:%S")
        metadata["test_fraction"] = split.test_user_fraction
        metadata["seed"] = split.seed
        print(f"read {stats.lines} lines ({stats.malformed} malformed, skipped)")
        print(f"training occurrences: {sum(counted.values())}, unique: {len(counted)}")
        with open(config.test_output, "w", encoding="utf-8") as fh:
            fh.writelines(q + "\n" for q in test_queries)
        print(f"held-out test queries: {len(test_queries)} -> {config.test_output}")

    counted = apply_threshold(counted, config.min_count)
    print(f"after min-count >= {config.min_count}: {len(counted)} entries")
    if config.deny_path is not None:
        with open(config.deny_path, encoding="utf-8") as fh:
            deny = read_denylist(fh)
        before = len(counted)
        counted = apply_denylist(counted, deny)
        digest = hashlib.sha256("\n".join(deny).encode("utf-8")).hexdigest()
        metadata["deny_digest"] = digest
        print(f"after deny list ({len(deny)} phrases): {len(counted)} entries "
              f"({before - len(counted)} removed)")
    if not counted:
        raise DataError("empty index: no suggestions survived filtering")

    index = SuggestIndex.build(counted, metadata)
    index.save(config.output)
    print(f"index written: {config.output} ({len(index)} entries)")
    return EXIT_OK


def _load_index(path: str) -> SuggestIndex:
    try:
        return SuggestIndex.load(path)
    except IndexFormatError as exc:
        raise DataError(f"cannot load index {path}: {exc}") from exc


def cmd_evaluate(args) -> int:
    index = _load_index(args.index)
    queries = []
    with open(args.test_queries, encoding="utf-8", errors="replace") as fh:
        for line in fh:
            text = normalize(line.rstrip("\n"))
            if text is not None:
                queries.append(text)
    if not queries:
        raise DataError(f"no usable test queries in {args.test_queries}")
    report = evaluate(index, queries, k=int(args.k), include_misses=not args.exclude_misses)
    sys.stdout.write(render_report(report, args.format))
    return EXIT_OK


def cmd_serve(args) -> int:
    index = _load_index(args.index)
    server_mod.serve(
        index,
        host=args.host,
        port=int(args.port),
        default_k=int(args.default_k),
        max_k=int(args.max_k),
    )
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    given = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(given)
        _apply_config_file(args, given, parser)
        if args.command == "build":
            _require(args, parser, "source", "input", "output")
            return cmd_build(_build_config(args, parser))
        if args.command == "evaluate":
            _require(args, parser, "index", "test_queries")
            return cmd_evaluate(args)
        _require(args, parser, "index")
        return cmd_serve(args)
    except SystemExit as exc:  # argparse --help (0) or usage error (1)
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (TypeError, ValueError) as exc:  # bad values from a config file
        print(f"anchorsuggest: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"anchorsuggest: {exc}", file=sys.stderr)
        return EXIT_DATA
    except IngestError as exc:
        print(f"anchorsuggest: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"anchorsuggest: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
