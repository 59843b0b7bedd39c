"""MRR evaluation of a suggestion index against held-out queries.

Every test query is probed ten ways: its first 1..5 characters and its
first 1..5 words (saturating at the full query when shorter). For each of
the ten conditions we report the mean reciprocal rank of the exact query
among the top-k completions, and the mean number of completions returned.
"""

import csv
import io
import json
from dataclasses import asdict, dataclass
from typing import Sequence

from .index import SuggestIndex, Suggestion

MODES = ("char", "word")
PROBE_LENGTHS = (1, 2, 3, 4, 5)
DEFAULT_K = 10


@dataclass(frozen=True)
class PrefixProbe:
    """One suggester input derived from a test query."""

    mode: str
    length: int
    prefix: str
    target: str


@dataclass(frozen=True)
class EvalRow:
    """One report row: the (mode, length) condition over all test queries."""

    mode: str
    length: int
    mrr: float
    mean_returned: float
    query_count: int


@dataclass(frozen=True)
class EvalReport:
    """Ten-row evaluation report plus the index metadata it was run against."""

    rows: tuple
    k: int
    metadata: dict


def make_probes(target: str) -> list[PrefixProbe]:
    """The ten probes for a normalized test query.

    Char probes count every character including spaces; word probes join
    the first n space-separated words. Both saturate to the full query
    when it is shorter than the probe length.
    """
    if not target:
        raise ValueError("cannot probe an empty query")
    probes = [
        PrefixProbe("char", n, target[: min(n, len(target))], target)
        for n in PROBE_LENGTHS
    ]
    words = target.split(" ")
    probes.extend(
        PrefixProbe("word", n, " ".join(words[: min(n, len(words))]), target)
        for n in PROBE_LENGTHS
    )
    return probes


def reciprocal_rank(results: Sequence[Suggestion], target: str) -> float:
    """1/position of the first result equal to target; 0.0 when absent."""
    for position, suggestion in enumerate(results, start=1):
        if suggestion.text == target:
            return 1.0 / position
    return 0.0


def evaluate(
    index: SuggestIndex,
    test_queries: Sequence[str],
    k: int = DEFAULT_K,
    include_misses: bool = True,
) -> EvalReport:
    """Run the ten probe conditions over the test queries.

    With ``include_misses`` (the standard MRR convention) absent targets
    contribute 0 to the mean over all queries; otherwise the MRR averages
    over found targets only (sensitivity mode) and ``query_count`` records
    how many that was. ``mean_returned`` always averages over all queries.
    """
    if not test_queries:
        raise ValueError("test query set is empty")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    conditions = [(mode, n) for mode in MODES for n in PROBE_LENGTHS]
    rr_sum = {c: 0.0 for c in conditions}
    hit_count = {c: 0 for c in conditions}
    returned_sum = {c: 0 for c in conditions}
    for query in test_queries:
        for probe in make_probes(query):
            results = index.lookup(probe.prefix, k)
            rr = reciprocal_rank(results, probe.target)
            key = (probe.mode, probe.length)
            rr_sum[key] += rr
            returned_sum[key] += len(results)
            if rr > 0.0:
                hit_count[key] += 1
    n = len(test_queries)
    rows = []
    for mode, length in conditions:
        key = (mode, length)
        if include_misses:
            denominator = n
        else:
            denominator = hit_count[key]
        mrr = rr_sum[key] / denominator if denominator else 0.0
        rows.append(
            EvalRow(
                mode=mode,
                length=length,
                mrr=mrr,
                mean_returned=returned_sum[key] / n,
                query_count=denominator,
            )
        )
    return EvalReport(rows=tuple(rows), k=k, metadata=index.metadata)


def render_report(report: EvalReport, format: str = "text") -> str:
    """Render a report as an aligned text table, CSV, or JSON.

    The text table keeps 3 decimals for MRR and 2 for Returned; csv and
    json carry full float precision.
    """
    if format == "text":
        lines = ["Prefix  MRR  Returned"]
        lines.extend(
            f"{row.length} {row.mode}  {row.mrr:.3f}  {row.mean_returned:.2f}"
            for row in report.rows
        )
        return "\n".join(lines) + "\n"
    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["mode", "length", "mrr", "mean_returned", "n"])
        for row in report.rows:
            writer.writerow([row.mode, row.length, row.mrr, row.mean_returned, row.query_count])
        return out.getvalue()
    if format == "json":
        doc = {
            "k": report.k,
            "metadata": report.metadata,
            "rows": [asdict(row) for row in report.rows],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown report format: {format!r}")
