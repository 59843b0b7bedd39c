#!/usr/bin/env python3
"""Serve live typeahead completions and query them over HTTP.

Starts the suggest server on an ephemeral port, issues a few requests the
way a search box would, prints the OpenSearch-style responses, and shuts
down. The web page under frontend/ talks to exactly this endpoint.
"""

import asyncio
import json
import urllib.request

from anchorsuggest import SuggestIndex
from anchorsuggest.server import SuggestService, start_server

ENTRIES = {
    "george washington": 11, "george floyd": 10, "georgia": 9,
    "new york": 50, "new york city": 40, "new york times": 30,
    "florida lottery": 15, "home depot": 8, "miami beach": 7, "news": 20,
}


async def main():
    index = SuggestIndex.build(ENTRIES, {"source": "anchor", "min_count": 1})
    server, _ = await start_server(SuggestService(index), "127.0.0.1", 0)
    port = server.sockets[0].getsockname()[1]
    print(f"serving on http://127.0.0.1:{port}\n")

    def get(path):
        with urllib.request.urlopen(f"http://127.0.0.1:{port}{path}") as resp:
            return json.loads(resp.read())

    loop = asyncio.get_running_loop()
    for q in ("geor", "new%20york", "x"):
        body = await loop.run_in_executor(None, get, f"/suggest?q={q}&k=5")
        print(f"GET /suggest?q={q}&k=5")
        print("   ", json.dumps(body, ensure_ascii=False))
    health = await loop.run_in_executor(None, get, "/health")
    print("GET /health")
    print("   ", json.dumps(health, ensure_ascii=False))

    server.close()
    await server.wait_closed()


if __name__ == "__main__":
    asyncio.run(main())
