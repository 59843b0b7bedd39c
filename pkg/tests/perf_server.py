#!/usr/bin/env python3
"""Standalone helper: serve the synthetic perf corpus; used by the
acceptance throughput measurement. Prints READY <port> once bound."""

import asyncio
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from perf_utils import synthetic_index  # noqa: E402

from anchorsuggest.server import SuggestService, start_server  # noqa: E402


async def main(port: int) -> None:
    index = synthetic_index()
    service = SuggestService(index)
    server, _ = await start_server(service, "127.0.0.1", port)
    bound = server.sockets[0].getsockname()[1]
    print(f"READY {bound}", flush=True)
    await asyncio.Event().wait()


if __name__ == "__main__":
    asyncio.run(main(int(sys.argv[1]) if len(sys.argv) > 1 else 0))
