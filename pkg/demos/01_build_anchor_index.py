#!/usr/bin/env python3
"""Walk through the anchor-text path: clean, count, index, look up.

Anchor texts are the clickable link texts of web pages. Cleaned and
counted, they make surprisingly good query completions, and they carry no
user data at all.
"""

import io

from anchorsuggest import (
    SuggestIndex,
    apply_denylist,
    apply_threshold,
    ingest_anchors,
    normalize,
    remove_braced,
    split_anchor,
)

# --- 1. what the cleaning rules do, one string at a time -----------------

anchor = "Read more. George Floyd (1973-2020) protests"
print("raw anchor:    ", anchor)
print("split:         ", split_anchor(anchor))
print("braces removed:", [remove_braced(f) for f in split_anchor(anchor)])
print("normalized:    ", [normalize(f) for f in split_anchor(anchor)])
print()

# --- 2. a miniature crawl: tab-separated lines, anchor text last ---------

crawl = io.StringIO(
    "p1\tNew York City\n"
    "p2\tnew  york  CITY\n"
    "p3\tNew York City\n"
    "p4\tNews. Sport\n"
    "p5\tNew York Times\n"
    "p6\tNew York Times\n"
    "p7\twww.nyc.gov\n"          # URL fragments are filtered out
    "p8\tTicket scam alert\n"    # deny-listed below
    "p9\tSport\n"
)
counts = ingest_anchors(crawl)
print("counted suggestions:", dict(counts))

# --- 3. threshold and deny list, then build the index --------------------

counts = apply_threshold(counts, 2)          # the full-scale build uses 15
counts = apply_denylist(counts, ["scam"])
index = SuggestIndex.build(counts, {"source": "anchor", "min_count": 2})
print("index entries:", len(index))
print()

# --- 4. ranked prefix lookups ---------------------------------------------

for prefix in ("new", "new york t", "s", ""):
    results = index.lookup(prefix, k=3)
    print(f"lookup({prefix!r:14}) -> {[(s.text, s.count) for s in results]}")
