from __future__ import annotations

import threading
import time
from collections import deque
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from mova.ingest import load_csv

DATA_DIR = Path(__file__).parent / "data"
SAMPLE_CSV = DATA_DIR / "sample_daily.csv"

# First four Close values of the sample file, used by golden assertions.
SAMPLE_CLOSE_PREFIX = (22.65, 22.1, 22.9, 22.0)


@pytest.fixture(scope="session")
def sample_csv_bytes() -> bytes:
    return SAMPLE_CSV.read_bytes()


@pytest.fixture()
def sample_frame(sample_csv_bytes):
    return load_csv(sample_csv_bytes, source_label="sample_daily.csv")


class StubServer:
    """Local HTTP server with scripted responses, recording every request.

    ``responses`` is a queue of (status, body) pairs consumed one per
    request; once empty, ``default`` is served. ``delay`` stalls each
    response to exercise client timeouts.
    """

    def __init__(self):
        self.requests: list[str] = []
        self.responses: deque[tuple[int, bytes]] = deque()
        self.default: tuple[int, bytes] = (200, b"")
        self.delay: float = 0.0
        self._server: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    def start(self):
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def do_GET(self):
                stub.requests.append(self.path)
                if stub.delay:
                    time.sleep(stub.delay)
                status, body = stub.responses.popleft() if stub.responses else stub.default
                try:
                    self.send_response(status)
                    self.send_header("Content-Type", "text/csv; charset=utf-8")
                    self.send_header("Content-Length", str(len(body)))
                    self.end_headers()
                    self.wfile.write(body)
                except (BrokenPipeError, ConnectionResetError):
                    pass  # client gave up (timeout tests)

            def log_message(self, *args):
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self):
        if self._server:
            self._server.shutdown()
            self._server.server_close()

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    @property
    def url_template(self) -> str:
        return f"http://127.0.0.1:{self.port}/quotes/{{symbol}}"

    @property
    def request_count(self) -> int:
        return len(self.requests)


@pytest.fixture()
def stub_server():
    server = StubServer().start()
    yield server
    server.stop()
