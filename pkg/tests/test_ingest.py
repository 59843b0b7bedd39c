"""Ingestion tests: anchor counting, log parsing, splitting, filtering."""

import io
import json
import random
from collections import Counter
from datetime import datetime
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anchorsuggest.ingest import (
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
    user_in_test_pool,
)

FIXTURES = Path(__file__).parent / "fixtures"


class TestIngestAnchors:
    def test_normalization_merges_variants(self):
        lines = ["x\tHome Page\n", "x\thome  page\n", "x\tHome Page\n"]
        assert ingest_anchors(lines) == Counter({"home page": 3})

    def test_split_rule_applies(self):
        assert ingest_anchors(["x\tNews. Sport\n"]) == Counter({"news": 1, "sport": 1})

    def test_twenty_line_fixture_matches_golden(self):
        golden = json.loads((FIXTURES / "anchors_20_expected.json").read_text("utf-8"))
        stats = IngestStats()
        with open(FIXTURES / "anchors_20.tsv", encoding="utf-8") as fh:
            counts = ingest_anchors(fh, field_index=golden["field_index"], stats=stats)
        assert dict(counts) == golden["counts"]
        expected = golden["stats"]
        assert stats.lines == expected["lines"]
        assert stats.malformed == expected["malformed"]
        assert stats.url_filtered == expected["url_filtered"]
        assert stats.empty == expected["empty"]
        assert stats.kept == expected["kept"]

    def test_url_filter_can_be_disabled(self):
        lines = ["a\twww.example.com\n"]
        assert ingest_anchors(lines) == Counter()
        assert ingest_anchors(lines, url_filter=False) == Counter({"www.example.com": 1})

    def test_unreadable_stream_is_fatal_with_line_number(self):
        def boom():
            yield "ok\tfine\n"
            raise OSError("disk gone")

        with pytest.raises(IngestError) as err:
            ingest_anchors(boom())
        assert err.value.line_number == 2

    def test_negative_field_index_out_of_range_is_malformed(self):
        stats = IngestStats()
        counts = ingest_anchors(["a\tb\tc\n"], field_index=-5, stats=stats)
        assert counts == Counter()
        assert stats.malformed == 1


class TestReadQueryLog:
    HEADER = "AnonID\tQuery\tQueryTime\tItemRank\tClickURL\n"

    def test_single_row(self):
        rows = list(read_query_log([self.HEADER, "217\tlottery\t2006-03-01 11:58:51\t\t\n"]))
        assert rows == [QueryRecord("217", "lottery", datetime(2006, 3, 1, 11, 58, 51))]

    def test_header_only(self):
        assert list(read_query_log([self.HEADER])) == []

    def test_fixture_has_nine_records_one_skip(self):
        stats = IngestStats()
        with open(FIXTURES / "aol_10.txt", encoding="utf-8") as fh:
            rows = list(read_query_log(fh, stats))
        assert len(rows) == 9
        assert stats.malformed == 1
        assert stats.lines == 11  # header + 10 rows


class TestSplitTrainTest:
    def _records(self):
        with open(FIXTURES / "aol_10.txt", encoding="utf-8") as fh:
            return list(read_query_log(fh))

    def test_fixture_partition_matches_golden(self):
        golden = json.loads((FIXTURES / "aol_split_expected.json").read_text("utf-8"))
        spec = SplitSpec(
            cutoff=datetime.strptime(golden["cutoff"], "%Y-%m-%d %H:%M:%S"),
            test_user_fraction=golden["test_user_fraction"],
            seed=golden["seed"],
        )
        train, test = split_train_test(self._records(), spec)
        assert dict(train) == golden["train"]
        assert test == golden["test"]

    def test_zero_fraction_sends_everything_to_train(self):
        spec = SplitSpec(datetime(2006, 5, 8), 0.0, seed=1)
        train, test = split_train_test(self._records(), spec)
        assert test == []
        assert sum(train.values()) == 4  # pre-cutoff, non-URL, from both users

    def test_test_side_deduplicates(self):
        records = [
            QueryRecord("u", "florida  Lottery", datetime(2006, 6, 1)),
            QueryRecord("u", "florida lottery", datetime(2006, 6, 2)),
        ]
        spec = SplitSpec(datetime(2006, 5, 8), 1.0, seed=0)
        train, test = split_train_test(records, spec)
        assert train == Counter()
        assert test == ["florida lottery"]

    def test_deterministic_given_seed(self):
        spec = SplitSpec(datetime(2006, 5, 8), 0.5, seed=123)
        assert split_train_test(self._records(), spec) == split_train_test(
            self._records(), spec
        )

    def test_each_record_contributes_to_at_most_one_side(self):
        records = self._records()
        for seed in range(20):
            spec = SplitSpec(datetime(2006, 5, 8), 0.5, seed=seed)
            train, test = split_train_test(records, spec)
            assert sum(train.values()) + len(test) <= len(records)

    def test_fraction_validated(self):
        with pytest.raises(ValueError):
            SplitSpec(datetime(2006, 5, 8), 1.5, seed=0)

    def test_pool_assignment_is_stable(self):
        # regression pin: the hash must not drift across runs or platforms
        assert user_in_test_pool(3, "202", 0.5) is True
        assert user_in_test_pool(3, "101", 0.5) is False


class TestApplyThreshold:
    def test_paper_threshold_of_15(self):
        assert apply_threshold(Counter({"a": 20, "b": 14}), 15) == Counter({"a": 20})

    def test_min_one_is_identity(self):
        counted = Counter({"a": 1, "b": 7})
        assert apply_threshold(counted, 1) == counted

    def test_random_map_matches_bruteforce_filter(self):
        rng = random.Random(7)
        counted = Counter({f"s{i}": rng.randint(1, 40) for i in range(1000)})
        expected = {t: c for t, c in counted.items() if c >= 15}
        assert dict(apply_threshold(counted, 15)) == expected

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            apply_threshold(Counter({"a": 1}), 0)

    @given(
        st.dictionaries(st.text(min_size=1, max_size=6), st.integers(1, 60), max_size=40),
        st.integers(1, 30),
    )
    def test_monotone_in_min_count(self, entries, min_count):
        counted = Counter(entries)
        lower = apply_threshold(counted, min_count)
        higher = apply_threshold(counted, min_count + 1)
        assert set(higher) <= set(lower)
        assert all(lower[t] == counted[t] for t in lower)


class TestApplyDenylist:
    def test_substring_hit_removes(self):
        assert apply_denylist(Counter({"x scam": 9}), ["scam"]) == Counter()

    def test_empty_denylist_is_identity(self):
        counted = Counter({"a": 1, "b": 2})
        assert apply_denylist(counted, []) == counted

    def test_fifty_entry_fixture_matches_nested_loop_oracle(self):
        rng = random.Random(11)
        words = ["alpha", "beta", "scam", "gamma", "fraud", "delta", "hoax"]
        counted = Counter(
            {
                " ".join(rng.choice(words) for _ in range(rng.randint(1, 3))) + f" {i}": i + 1
                for i in range(50)
            }
        )
        deny = ["scam", "fraud", "hoax"]
        expected = {}
        for text, count in counted.items():
            hit = False
            for phrase in deny:
                if phrase in text:
                    hit = True
            if not hit:
                expected[text] = count
        assert dict(apply_denylist(counted, deny)) == expected

    @given(
        st.dictionaries(st.text(min_size=1, max_size=8), st.integers(1, 60), max_size=30),
        st.lists(st.text(min_size=1, max_size=4), max_size=4),
        st.integers(1, 20),
    )
    def test_threshold_and_denylist_commute(self, entries, deny, min_count):
        counted = Counter(entries)
        one = apply_denylist(apply_threshold(counted, min_count), deny)
        other = apply_threshold(apply_denylist(counted, deny), min_count)
        assert one == other


class TestReadDenylist:
    def test_comments_blanks_and_normalization(self):
        lines = ["# comment\n", "\n", "Fake News\n", "scam\n", "( )\n"]
        assert read_denylist(lines) == ["fake news", "scam"]

    def test_fixture(self):
        with open(FIXTURES / "denylist.txt", encoding="utf-8") as fh:
            assert read_denylist(fh) == ["scam", "fake news"]
