#!/usr/bin/env python3
"""Train/test a suggester from a (synthetic) query log and score it.

The protocol: split users 99/1, take training queries from before the
cutoff date and test queries from after it, then probe the index with the
first 1..5 characters and 1..5 words of every test query and report MRR
and the mean number of completions returned.
"""

import io
import random
from datetime import datetime, timedelta

from anchorsuggest import (
    SplitSpec,
    SuggestIndex,
    evaluate,
    read_query_log,
    render_report,
    split_train_test,
)

# --- 1. synthesize an AOL-shaped log --------------------------------------

POPULAR = [
    ("new york lottery", 40), ("new york times", 30), ("weather forecast", 25),
    ("cheap flights", 20), ("florida lottery", 15), ("george washington", 12),
    ("home depot", 10), ("miami beach hotels", 8), ("internal revenue service", 6),
    ("george floyd protests", 5),
]
rng = random.Random(2006)
start = datetime(2006, 3, 1)
rows = ["AnonID\tQuery\tQueryTime\tItemRank\tClickURL\n"]
for day in range(90):  # March through May, cutoff on 8 May
    when = start + timedelta(days=day)
    for query, weight in POPULAR:
        for _ in range(rng.randint(0, weight // 3)):
            user = f"u{rng.randint(1, 400)}"
            stamp = when + timedelta(minutes=rng.randint(0, 1439))
            rows.append(f"{user}\t{query}\t{stamp:%Y-%m-%d %H:%M:%S}\t\t\n")
print(f"synthetic log: {len(rows) - 1} rows")

# --- 2. the split: 1% of users held out, cutoff 8 May 2006 ----------------

spec = SplitSpec(cutoff=datetime(2006, 5, 8), test_user_fraction=0.05, seed=7)
train, test_queries = split_train_test(read_query_log(io.StringIO("".join(rows))), spec)
print(f"training occurrences: {sum(train.values())}, unique: {len(train)}")
print(f"held-out test queries: {len(test_queries)}")
print()

# --- 3. index the training side, evaluate on the held-out side ------------

index = SuggestIndex.build(train, {"source": "log"})
report = evaluate(index, test_queries, k=10)
print(render_report(report, "text"))
print("MRR rises with longer prefixes; Returned falls as prefixes bite.")
