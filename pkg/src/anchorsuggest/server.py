"""HTTP typeahead service: top-k completions in OpenSearch-suggestions shape.

``GET /suggest?q=<prefix>&k=<int>`` returns ``["<q>", ["<s1>", ...]]``;
``GET /health`` returns index metadata. The server is read-only over one
immutable index shared by all connections and deliberately stores nothing
about the queries it answers.

The HTTP layer is a thin asyncio protocol on top of the httptools C
parser rather than a full framework: the suggest endpoint has a hard
throughput contract and measured framework overhead on small responses
was the difference between meeting it and not.
"""

import asyncio
import json
import signal
import sys
from functools import lru_cache
from urllib.parse import unquote_plus

import httptools

from .index import FORMAT_VERSION, SuggestIndex
from .normalize import normalize_prefix

DEFAULT_K = 10
MAX_K = 25
# the index is immutable, so memoized completions can never go stale;
# real keystroke traffic concentrates heavily on short prefixes, which
# makes this the steady-state hot path
LOOKUP_CACHE_SIZE = 65536

_JSON_HEADERS = (
    b"content-type: application/json; charset=utf-8\r\n"
    b"access-control-allow-origin: *\r\n"
)
_STATUS_LINES = {
    200: b"HTTP/1.1 200 OK\r\n",
    400: b"HTTP/1.1 400 Bad Request\r\n",
    404: b"HTTP/1.1 404 Not Found\r\n",
    405: b"HTTP/1.1 405 Method Not Allowed\r\n",
    503: b"HTTP/1.1 503 Service Unavailable\r\n",
}


def parse_query_params(query: str) -> dict[str, str]:
    """First-wins form decoding of a URL query string, blanks kept.

    Narrowed replacement for ``urllib.parse.parse_qs`` (which builds value
    lists and always percent-decodes): the suggest endpoint sees two known
    scalar params on a hot path.
    """
    params: dict[str, str] = {}
    for pair in query.split("&"):
        if not pair:
            continue
        name, _, value = pair.partition("=")
        if "%" in name or "+" in name:
            name = unquote_plus(name)
        if name in params:
            continue
        if "%" in value or "+" in value:
            value = unquote_plus(value)
        params[name] = value
    return params


class SuggestService:
    """Request handling, separated from the HTTP transport for testability."""

    def __init__(
        self,
        index: SuggestIndex | None,
        default_k: int = DEFAULT_K,
        max_k: int = MAX_K,
    ):
        self.index = index
        self.default_k = default_k
        self.max_k = max_k
        if index is not None:
            self._completions = lru_cache(maxsize=LOOKUP_CACHE_SIZE)(
                lambda text, k: tuple(index.lookup_texts(text, k))
            )

    def suggest(self, params: dict[str, str]) -> tuple[int, object]:
        """OpenSearch-shaped completion lookup: ``(status, json payload)``.

        The query prefix is normalized like index entries (lowercase,
        whitespace collapse; no brace removal or splitting, those are
        corpus-cleaning rules); the echoed prefix is the original.
        """
        if self.index is None:
            return 503, {"error": "index not loaded"}
        q = params.get("q")
        if q is None:
            return 400, {"error": "missing required parameter: q"}
        k = self.default_k
        k_param = params.get("k")
        if k_param is not None:
            try:
                k = int(k_param)
            except ValueError:
                return 400, {"error": f"k must be an integer, got {k_param!r}"}
            if not 1 <= k <= self.max_k:
                return 400, {"error": f"k must be in 1..{self.max_k}, got {k}"}
        return 200, [q, self._completions(normalize_prefix(q), k)]

    def health(self) -> tuple[int, object]:
        """Index metadata: source label, entry count, build parameters."""
        if self.index is None:
            return 503, {"error": "index not loaded"}
        meta = self.index.metadata
        return 200, {
            "status": "ok",
            "source": meta.pop("source", None),
            "entry_count": meta.pop("entry_count", len(self.index)),
            "format_version": FORMAT_VERSION,
            "build_params": meta,
        }


class _HttpProtocol(asyncio.Protocol):
    """Minimal HTTP/1.1 (GET-only) connection: parse, dispatch, respond."""

    def __init__(self, service: SuggestService, connections: set):
        self.service = service
        self.connections = connections
        self.transport = None
        self.parser = None
        self.url = b""

    def connection_made(self, transport):
        self.transport = transport
        self.parser = httptools.HttpRequestParser(self)
        self.connections.add(transport)

    def connection_lost(self, exc):
        self.connections.discard(self.transport)

    def data_received(self, data):
        try:
            self.parser.feed_data(data)
        except httptools.HttpParserError:
            self._respond(400, {"error": "malformed request"}, keep_alive=False)
            self.transport.close()

    # httptools callbacks
    def on_url(self, url: bytes):
        self.url += url

    def on_message_complete(self):
        url, self.url = self.url, b""
        keep_alive = self.parser.should_keep_alive()
        if self.parser.get_method() != b"GET":
            self._respond(405, {"error": "only GET is supported"}, keep_alive)
            return
        path, _, query = url.partition(b"?")
        if path == b"/suggest":
            status, payload = self.service.suggest(
                parse_query_params(query.decode("utf-8", "replace"))
            )
        elif path == b"/health":
            status, payload = self.service.health()
        else:
            status, payload = 404, {"error": "not found"}
        self._respond(status, payload, keep_alive)

    def _respond(self, status: int, payload: object, keep_alive: bool):
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        head = (
            _STATUS_LINES[status]
            + _JSON_HEADERS
            + b"content-length: %d\r\n" % len(body)
            + (b"" if keep_alive else b"connection: close\r\n")
            + b"\r\n"
        )
        self.transport.write(head + body)
        if not keep_alive:
            self.transport.close()


async def start_server(
    service: SuggestService, host: str = "127.0.0.1", port: int = 8080
) -> tuple[asyncio.AbstractServer, set]:
    """Bind and start serving; returns the server and its connection set.

    Binding errors propagate. Use ``port=0`` to bind an ephemeral port
    (``server.sockets[0].getsockname()`` tells which).
    """
    loop = asyncio.get_running_loop()
    connections: set = set()
    server = await loop.create_server(
        lambda: _HttpProtocol(service, connections), host, port
    )
    return server, connections


def serve(
    index: SuggestIndex,
    host: str = "127.0.0.1",
    port: int = 8080,
    default_k: int = DEFAULT_K,
    max_k: int = MAX_K,
) -> None:
    """Run the suggest server until SIGINT/SIGTERM; then drain and exit."""
    service = SuggestService(index, default_k=default_k, max_k=max_k)

    async def main():
        server, connections = await start_server(service, host, port)
        bound = server.sockets[0].getsockname()
        meta = index.metadata
        print(
            f"serving {meta.get('entry_count', len(index))} suggestions "
            f"(source={meta.get('source', 'unknown')}) on http://{bound[0]}:{bound[1]}",
            file=sys.stderr,
            flush=True,
        )
        stop = asyncio.Event()
        loop = asyncio.get_running_loop()
        for sig in (signal.SIGINT, signal.SIGTERM):
            loop.add_signal_handler(sig, stop.set)
        await stop.wait()
        server.close()
        await server.wait_closed()
        # responses are written synchronously per request, so closing idle
        # connections here never cuts off an in-flight reply
        for transport in list(connections):
            transport.close()

    asyncio.run(main())
