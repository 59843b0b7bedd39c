"""Seeded random-instance generators shared by property and acceptance tests."""

import random
import string

ALPHABET = string.ascii_lowercase + " "


def random_entries(rng: random.Random, n: int, max_len: int = 14, max_count: int = 50) -> dict:
    """n unique suggestion texts with counts drawn to force plenty of ties."""
    entries = {}
    while len(entries) < n:
        length = rng.randint(1, max_len)
        text = "".join(rng.choice(ALPHABET) for _ in range(length)).strip()
        if text:
            entries[text] = rng.randint(1, max_count)
    return entries


def random_prefixes(rng: random.Random, entries: dict, m: int) -> list:
    """Mix of prefixes of real entries (hits) and random strings (mostly misses)."""
    texts = sorted(entries)
    prefixes = []
    for _ in range(m):
        if rng.random() < 0.7:
            text = rng.choice(texts)
            prefixes.append(text[: rng.randint(1, len(text))])
        else:
            prefixes.append(
                "".join(rng.choice(ALPHABET) for _ in range(rng.randint(1, 6)))
            )
    return prefixes
