"""Immutable prefix-search index returning top-k suggestions by count.

Layout: entry texts are stored UTF-8 encoded in one blob, sorted bytewise
(= code-point order), with an offsets array and a parallel counts array.
A prefix maps to a contiguous row range via binary search. Small ranges
are ranked directly; large ranges are answered by scanning a precomputed
global by-count ordering and keeping the first k rows that fall inside
the range, which bounds worst-case work without a per-node trie.

The index is immutable after build, so concurrent readers need no locks.
"""

import hashlib
import json
import struct
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

MAGIC = b"ASGX"
FORMAT_VERSION = 1
_CHECKSUM_BYTES = 32  # sha256

# Ranges at most this long are ranked by sorting their counts directly;
# longer ranges go through the by-count scan (denser hits, cheaper).
_SMALL_RANGE = 4096
_SCAN_CHUNK_MIN = 2048
_SCAN_CHUNK_MAX = 1 << 18


class IndexFormatError(Exception):
    """The bytes are not a readable index of this format."""


class IndexVersionError(IndexFormatError):
    """The file is an index, but of an unsupported format version."""


class IndexTruncatedError(IndexFormatError):
    """The file ends before the declared content does."""


class IndexChecksumError(IndexFormatError):
    """The file content does not match its checksum."""


@dataclass(frozen=True)
class Suggestion:
    """A completion candidate: normalized text plus its occurrence count."""

    text: str
    count: int


class SuggestIndex:
    """Frequency-ranked prefix-completion index over normalized texts.

    Build once from a text->count mapping, then call :meth:`lookup` from
    any number of threads. Results are ordered by count descending, ties
    by text ascending, and are a pure function of (entries, prefix, k).
    """

    def __init__(self, blob, offsets, counts, metadata):
        self._blob = blob
        self._offsets = offsets
        self._counts = counts
        n = len(counts)
        if n == 0 or (int(counts.max()) < (1 << 31) and n < (1 << 32)):
            # (count desc, row asc) packed into one sortable int64; rows are
            # in text order, so row asc == text asc. Keys are unique, which
            # lets ranking use unstable partition/sort kernels.
            inverse_row = np.arange(n - 1, -1, -1, dtype=np.int64)
            self._rank_key = (counts << np.int64(32)) | inverse_row
            self._by_count = np.argsort(-self._rank_key)
        else:  # counts too large to pack: stable sort keeps text-order ties
            self._rank_key = None
            self._by_count = np.argsort(-counts, kind="stable")
        self._meta = metadata

    @classmethod
    def build(
        cls, counted: Mapping[str, int], metadata: Mapping | None = None
    ) -> "SuggestIndex":
        """Build an index containing exactly the entries of ``counted``.

        Deterministic: the same mapping always produces the same index
        (and the same bytes from :meth:`save`). Raises ValueError for an
        empty mapping, empty texts or non-positive counts.
        """
        if not counted:
            raise ValueError("cannot build an index from zero suggestions")
        items = sorted((text.encode("utf-8"), count) for text, count in counted.items())
        n = len(items)
        lengths = np.fromiter((len(t) for t, _ in items), np.int64, n)
        if n and int(lengths.min()) == 0:
            raise ValueError("suggestion texts must be non-empty")
        counts = np.fromiter((c for _, c in items), np.int64, n)
        if int(counts.min()) < 1:
            raise ValueError("suggestion counts must be >= 1")
        offsets = np.empty(n + 1, np.int64)
        offsets[0] = 0
        np.cumsum(lengths, out=offsets[1:])
        blob = b"".join(t for t, _ in items)
        meta = dict(metadata or {})
        meta["entry_count"] = n
        return cls(blob, offsets, counts, meta)

    def __len__(self) -> int:
        return len(self._counts)

    @property
    def metadata(self) -> dict:
        return dict(self._meta)

    def entries(self) -> Iterator[Suggestion]:
        """All entries in text order."""
        for i in range(len(self._counts)):
            yield Suggestion(self._text_at(i), int(self._counts[i]))

    # -- lookup ---------------------------------------------------------

    def lookup(self, prefix: str, k: int = 10) -> list[Suggestion]:
        """Top-k entries whose text starts with ``prefix``.

        Plain character-prefix match, spaces significant; the empty
        prefix matches everything. The caller is responsible for
        normalizing the prefix the same way the entries were.
        """
        rows = self._top_rows(prefix, k)
        return [Suggestion(self._text_at(i), int(self._counts[i])) for i in rows]

    def lookup_texts(self, prefix: str, k: int = 10) -> list[str]:
        """Like :meth:`lookup` but texts only; the serving hot path."""
        return [self._text_at(i) for i in self._top_rows(prefix, k)]

    def _top_rows(self, prefix: str, k: int) -> list[int]:
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        lo, hi = self._prefix_range(prefix)
        size = hi - lo
        if size <= 0:
            return []
        k = min(k, size)
        if size <= _SMALL_RANGE:
            if self._rank_key is not None:
                negated = -self._rank_key[lo:hi]
                if k < size:
                    top = np.argpartition(negated, k - 1)[:k]
                    order = top[np.argsort(negated[top])]
                else:
                    order = np.argsort(negated)
            else:
                # stable sort on negated counts keeps ties in text order
                order = np.argsort(-self._counts[lo:hi], kind="stable")[:k]
            return [lo + int(j) for j in order]
        return self._scan_by_count(lo, hi, k)

    def _prefix_range(self, prefix: str) -> tuple[int, int]:
        """Rows [lo, hi) whose text starts with prefix, via binary search."""
        n = len(self._counts)
        if not prefix:
            return 0, n
        key = prefix.encode("utf-8")
        lo = self._bisect(key)
        # valid UTF-8 never contains 0xff, so the increment cannot overflow
        upper = key[:-1] + bytes([key[-1] + 1]) if key[-1] != 0xFF else None
        hi = self._bisect(upper) if upper is not None else n
        return lo, hi

    def _bisect(self, key: bytes) -> int:
        """First row whose text compares >= key (bytewise)."""
        blob, offsets = self._blob, self._offsets
        lo, hi = 0, len(self._counts)
        while lo < hi:
            mid = (lo + hi) // 2
            if blob[offsets[mid] : offsets[mid + 1]] < key:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def _scan_by_count(self, lo: int, hi: int, k: int) -> list[int]:
        """First k rows of the global by-count order inside [lo, hi)."""
        by_count = self._by_count
        n = len(by_count)
        rows: list[int] = []
        pos = 0
        # size the first chunk so one pass usually yields k hits
        expected_scan = 2 * k * n // (hi - lo)
        chunk = _SCAN_CHUNK_MIN
        while chunk < expected_scan and chunk < _SCAN_CHUNK_MAX:
            chunk *= 2
        while pos < n and len(rows) < k:
            block = by_count[pos : pos + chunk]
            hits = block[(block >= lo) & (block < hi)]
            if hits.size:
                rows.extend(int(i) for i in hits[: k - len(rows)])
            pos += chunk
            chunk = min(chunk * 2, _SCAN_CHUNK_MAX)
        return rows

    def _text_at(self, i: int) -> str:
        return self._blob[self._offsets[i] : self._offsets[i + 1]].decode("utf-8")

    # -- serialization ----------------------------------------------------
    #
    # magic | u16 version | u32 metadata length | metadata JSON |
    # u64 entry count | entries (u32 text length, text, u64 count) in text
    # order | sha256 of everything before it.

    def save(self, path) -> None:
        """Write the index; ``load`` restores an equivalent one."""
        digest = hashlib.sha256()
        with open(path, "wb") as fh:

            def emit(data: bytes) -> None:
                digest.update(data)
                fh.write(data)

            emit(MAGIC)
            emit(struct.pack("<H", FORMAT_VERSION))
            meta_json = json.dumps(
                self._meta, sort_keys=True, separators=(",", ":")
            ).encode("utf-8")
            emit(struct.pack("<I", len(meta_json)))
            emit(meta_json)
            n = len(self._counts)
            emit(struct.pack("<Q", n))
            blob, offsets, counts = self._blob, self._offsets, self._counts
            for i in range(n):
                text = blob[offsets[i] : offsets[i + 1]]
                emit(struct.pack("<I", len(text)))
                emit(text)
                emit(struct.pack("<Q", counts[i]))
            fh.write(digest.digest())

    @classmethod
    def load(cls, path) -> "SuggestIndex":
        """Read an index written by :meth:`save`.

        Raises IndexVersionError / IndexTruncatedError / IndexChecksumError
        for the respective corruptions, IndexFormatError otherwise.
        """
        with open(path, "rb") as fh:
            data = fh.read()
        if len(data) < len(MAGIC) + 2 + _CHECKSUM_BYTES:
            raise IndexTruncatedError(f"index file too short ({len(data)} bytes)")
        if data[: len(MAGIC)] != MAGIC:
            raise IndexFormatError("not a suggestion index file (bad magic)")
        body, stored = data[:-_CHECKSUM_BYTES], data[-_CHECKSUM_BYTES:]
        view = memoryview(body)
        pos = len(MAGIC)
        (version,) = struct.unpack_from("<H", view, pos)
        pos += 2
        if version != FORMAT_VERSION:
            raise IndexVersionError(
                f"unsupported index format version {version} (expected {FORMAT_VERSION})"
            )

        end = len(body)

        def need(nbytes: int) -> None:
            if pos + nbytes > end:
                raise IndexTruncatedError("index file ends mid-record")

        need(4)
        (meta_len,) = struct.unpack_from("<I", view, pos)
        pos += 4
        need(meta_len)
        try:
            meta = json.loads(bytes(view[pos : pos + meta_len]).decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise IndexFormatError(f"unreadable index metadata: {exc}") from exc
        pos += meta_len
        need(8)
        (n,) = struct.unpack_from("<Q", view, pos)
        pos += 8
        if n * 12 > end - pos:  # every entry takes at least 12 bytes
            raise IndexTruncatedError(
                f"file declares {n} entries but has {end - pos} bytes of data"
            )

        texts = []
        counts = np.empty(n, np.int64)
        offsets = np.empty(n + 1, np.int64)
        offsets[0] = 0
        total = 0
        for i in range(n):
            need(4)
            (text_len,) = struct.unpack_from("<I", view, pos)
            pos += 4
            need(text_len + 8)
            texts.append(bytes(view[pos : pos + text_len]))
            pos += text_len
            (counts[i],) = struct.unpack_from("<Q", view, pos)
            pos += 8
            total += text_len
            offsets[i + 1] = total
        if pos != end:
            raise IndexFormatError(f"{end - pos} trailing bytes after entries")
        if hashlib.sha256(body).digest() != stored:
            raise IndexChecksumError("index file checksum mismatch")
        return cls(b"".join(texts), offsets, counts, meta)
