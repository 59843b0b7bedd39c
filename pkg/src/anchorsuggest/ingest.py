"""Stream anchor files and query logs into frequency-counted suggestion sets.

Both sources end up as a ``Counter`` mapping normalized suggestion text to
its occurrence count; that counter is what the index is built from.
Counter merging is plain addition, so inputs may be sharded and merged in
any order.
"""

import hashlib
from collections import Counter
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Iterator

from .normalize import contains_url_substring, normalize, split_anchor

TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S"


class IngestError(Exception):
    """Fatal error while reading a source stream."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"{message} (line {line_number})"
        super().__init__(message)
        self.line_number = line_number


@dataclass(frozen=True)
class QueryRecord:
    """One row of a query log: who searched what, when."""

    user_id: str
    query: str
    timestamp: datetime


@dataclass(frozen=True)
class SplitSpec:
    """Parameters of the train/test split of a query log.

    Users are assigned to the test pool by a seeded hash, so the split is
    reproducible across runs and machines. ``test_user_fraction`` may be 0
    or 1 for degenerate all-train / all-test splits.
    """

    cutoff: datetime
    test_user_fraction: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.test_user_fraction <= 1.0:
            raise ValueError(
                f"test_user_fraction must be in [0, 1], got {self.test_user_fraction}"
            )


@dataclass
class IngestStats:
    """Counters for what an ingestion pass saw, kept and dropped."""

    lines: int = 0
    malformed: int = 0
    url_filtered: int = 0
    empty: int = 0
    kept: int = 0

    def merge(self, other: "IngestStats") -> None:
        self.lines += other.lines
        self.malformed += other.malformed
        self.url_filtered += other.url_filtered
        self.empty += other.empty
        self.kept += other.kept


def user_in_test_pool(seed: int, user_id: str, fraction: float) -> bool:
    """Deterministic user assignment: hash of (seed, user id) below fraction."""
    digest = hashlib.sha256(f"{seed}:{user_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2**64 < fraction


def ingest_anchors(
    lines: Iterable[str],
    field_index: int = -1,
    url_filter: bool = True,
    stats: IngestStats | None = None,
) -> Counter:
    """Count normalized anchor-text fragments from a tab-separated stream.

    Each line's ``field_index`` column is split at separators, each
    fragment normalized, and every surviving fragment that passes the URL
    filter increments its count. Lines missing the column are counted as
    malformed and skipped; they are not errors.
    """
    if stats is None:
        stats = IngestStats()
    counts: Counter = Counter()
    line_number = 0
    try:
        for line in lines:
            line_number += 1
            stats.lines += 1
            fields = line.rstrip("\n").split("\t")
            if field_index >= len(fields) or field_index < -len(fields):
                stats.malformed += 1
                continue
            for fragment in split_anchor(fields[field_index]):
                text = normalize(fragment)
                if text is None:
                    stats.empty += 1
                elif url_filter and contains_url_substring(text):
                    stats.url_filtered += 1
                else:
                    counts[text] += 1
                    stats.kept += 1
    except (OSError, UnicodeError) as exc:
        raise IngestError(f"anchor stream unreadable: {exc}", line_number + 1) from exc
    return counts


def read_query_log(
    lines: Iterable[str], stats: IngestStats | None = None
) -> Iterator[QueryRecord]:
    """Yield QueryRecords from an AOL-style tab-separated log.

    Expected columns: AnonID, Query, QueryTime ("YYYY-MM-DD HH:MM:SS"),
    ItemRank, ClickURL; the first line is a header. Rows with a missing or
    unparseable timestamp or an empty user id are counted and skipped.
    """
    if stats is None:
        stats = IngestStats()
    line_number = 0
    try:
        for line in lines:
            line_number += 1
            stats.lines += 1
            if line_number == 1:
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) < 3 or not fields[0]:
                stats.malformed += 1
                continue
            try:
                timestamp = datetime.strptime(fields[2], TIMESTAMP_FORMAT)
            except ValueError:
                stats.malformed += 1
                continue
            stats.kept += 1
            yield QueryRecord(user_id=fields[0], query=fields[1], timestamp=timestamp)
    except (OSError, UnicodeError) as exc:
        raise IngestError(f"query log unreadable: {exc}", line_number + 1) from exc


def split_train_test(
    records: Iterable[QueryRecord], spec: SplitSpec
) -> tuple[Counter, list[str]]:
    """Partition a query log into training counts and held-out test queries.

    Train-pool users contribute their strictly-pre-cutoff queries with
    multiplicity; test-pool users contribute their at-or-after-cutoff
    queries, deduplicated (first-seen order). A record on the wrong side
    of the cutoff for its pool is discarded, so test users' pre-cutoff
    queries never leak into training. Queries are normalized and
    URL-filtered on both sides.
    """
    train: Counter = Counter()
    test_seen: dict[str, None] = {}
    for record in records:
        if user_in_test_pool(spec.seed, record.user_id, spec.test_user_fraction):
            if record.timestamp >= spec.cutoff:
                text = normalize(record.query)
                if text is not None and not contains_url_substring(text):
                    test_seen.setdefault(text)
        else:
            if record.timestamp < spec.cutoff:
                text = normalize(record.query)
                if text is not None and not contains_url_substring(text):
                    train[text] += 1
    return train, list(test_seen)


def apply_threshold(counted: Counter, min_count: int) -> Counter:
    """Keep only suggestions occurring at least ``min_count`` times."""
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    if min_count == 1:
        return Counter(counted)
    return Counter({text: n for text, n in counted.items() if n >= min_count})


def apply_denylist(counted: Counter, deny: Iterable[str]) -> Counter:
    """Drop every suggestion containing any deny phrase as a substring."""
    deny = [phrase for phrase in deny if phrase]
    if not deny:
        return Counter(counted)
    return Counter(
        {
            text: n
            for text, n in counted.items()
            if not any(phrase in text for phrase in deny)
        }
    )


def read_denylist(lines: Iterable[str]) -> list[str]:
    """Read a deny-list file: one phrase per line, ``#`` comments ignored.

    Phrases are normalized with the same pipeline as suggestions so that
    matching happens in normalized space.
    """
    phrases = []
    for line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        text = normalize(stripped)
        if text is not None:
            phrases.append(text)
    return phrases
