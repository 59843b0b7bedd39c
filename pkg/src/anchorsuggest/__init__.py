"""Frequency-ranked query autocompletion from anchor texts or query logs.

The pipeline: normalize raw text, count suggestion occurrences, build an
immutable prefix-search index, evaluate it with the 10-prefix MRR
protocol, and serve top-k completions over HTTP.
"""

from .evaluate import (
    EvalReport,
    EvalRow,
    PrefixProbe,
    evaluate,
    make_probes,
    reciprocal_rank,
    render_report,
)
from .index import (
    IndexChecksumError,
    IndexFormatError,
    IndexTruncatedError,
    IndexVersionError,
    SuggestIndex,
    Suggestion,
)
from .ingest import (
    IngestError,
    IngestStats,
    QueryRecord,
    SplitSpec,
    apply_denylist,
    apply_threshold,
    ingest_anchors,
    read_denylist,
    read_query_log,
    split_train_test,
)
from .normalize import (
    contains_url_substring,
    normalize,
    normalize_prefix,
    remove_braced,
    split_anchor,
)

__version__ = "0.1.0"

__all__ = [
    "EvalReport",
    "EvalRow",
    "PrefixProbe",
    "evaluate",
    "make_probes",
    "reciprocal_rank",
    "render_report",
    "IndexChecksumError",
    "IndexFormatError",
    "IndexTruncatedError",
    "IndexVersionError",
    "SuggestIndex",
    "Suggestion",
    "IngestError",
    "IngestStats",
    "QueryRecord",
    "SplitSpec",
    "apply_denylist",
    "apply_threshold",
    "ingest_anchors",
    "read_denylist",
    "read_query_log",
    "split_train_test",
    "contains_url_substring",
    "normalize",
    "normalize_prefix",
    "remove_braced",
    "split_anchor",
    "__version__",
]
