"""Acceptance suite: one test per release criterion, at pinned tolerances.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line
per criterion. Random inputs are seeded, so results are reproducible.
"""

from __future__ import annotations

import contextlib
import datetime as dt
import subprocess
import sys
import threading
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

import mova.service as service_module
from mova.indicators import (
    EmaState,
    SmaState,
    WmaState,
    ema,
    ema_weights,
    sma,
    wma,
    wma_weights,
)
from mova.ingest import dump_csv, load_csv, normalize_columns
from mova.model import OHLC_COLUMNS, parse_symbol
from mova.remote import QuoteCache, RemoteEndpointConfig
from mova.service import create_app

from conftest import SAMPLE_CSV
from oracles import sma_oracle, wma_oracle


@contextlib.contextmanager
def criterion(name: str):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name} ({time.monotonic() - start:.2f}s)")
        raise
    print(f"[PASS] {name} ({time.monotonic() - start:.2f}s)")


def test_golden_sample_values():
    with criterion("golden sample: SMA/WMA/EMA over the bundled 29-row fixture"):
        start = time.monotonic()
        frame = load_csv(SAMPLE_CSV.read_bytes())
        assert frame.row_count == 29
        close = frame.column("Close")
        sma3, wma3, ema3 = sma(close, 3), wma(close, 3), ema(close, 3)
        assert sma3[2] == pytest.approx(22.55, abs=1e-9)
        assert wma3[2] == pytest.approx(22.59167, abs=1e-5)
        assert ema3[2] == pytest.approx(22.55, abs=1e-9)
        assert ema3[3] == pytest.approx(22.275, abs=1e-9)
        assert time.monotonic() - start < 1.0


def test_oracle_and_streaming_equivalence():
    with criterion("oracle equivalence + streaming/batch equality, 1000 random series"):
        start = time.monotonic()
        rng = np.random.default_rng(20210204)
        for case in range(1000):
            length = int(rng.integers(0, 501))
            n = int(rng.integers(1, 51))
            values = rng.uniform(-1e6, 1e6, size=length)
            if case % 5 == 0 and length:
                gaps = rng.integers(0, length, size=max(1, length // 20))
                values[gaps] = np.nan
            batch_sma = sma(values, n)
            batch_wma = wma(values, n)
            batch_ema = ema(values, n)
            values_list = values.tolist()
            np.testing.assert_allclose(
                batch_sma, sma_oracle(values_list, n), rtol=1e-9, atol=1e-9, equal_nan=True
            )
            np.testing.assert_allclose(
                batch_wma, wma_oracle(values_list, n), rtol=1e-9, atol=1e-9, equal_nan=True
            )
            states = (SmaState(n), WmaState(n), EmaState(n))
            streams = [np.empty(length) for _ in states]
            for i, x in enumerate(values):
                for out, state in zip(streams, states):
                    out[i] = state.push(x)
            # push contract: windows are re-summed, so equality is bitwise
            assert np.array_equal(streams[0], batch_sma, equal_nan=True)
            assert np.array_equal(streams[1], batch_wma, equal_nan=True)
            assert np.array_equal(streams[2], batch_ema, equal_nan=True)
        assert time.monotonic() - start < 30.0


def test_weight_normalization():
    with criterion("weight normalization: sums within 1e-12 for n in 1..10000"):
        start = time.monotonic()
        for n in range(1, 10_001):
            assert abs(float(np.sum(wma_weights(n))) - 1.0) < 1e-12
            assert abs(float(np.sum(ema_weights(n))) - 1.0) < 1e-12
        assert time.monotonic() - start < 5.0


def test_algebraic_properties():
    with criterion("algebraic properties: constancy, identity, shift, scale, bounds"):
        rng = np.random.default_rng(19700101)
        ops = (sma, wma, ema)

        for _ in range(500):  # constancy
            value = float(rng.uniform(-1e6, 1e6))
            n = int(rng.integers(1, 30))
            length = int(rng.integers(n, n + 80))
            for op in ops:
                out = op([value] * length, n)
                defined = out[~np.isnan(out)]
                assert len(defined) == length - n + 1
                np.testing.assert_allclose(defined, value, rtol=1e-12, atol=1e-9)

        for _ in range(500):  # n = 1 identity
            values = rng.uniform(-1e6, 1e6, size=int(rng.integers(0, 60)))
            for op in ops:
                assert np.allclose(op(values, 1), values, rtol=0, atol=0)

        for _ in range(500):  # shift equivariance, exact up to final rounding
            n = int(rng.integers(1, 30))
            values = rng.uniform(-1e6, 1e6, size=int(rng.integers(n, 150)))
            c = float(rng.uniform(-1e6, 1e6))
            tol = 8 * n * np.finfo(float).eps * (np.max(np.abs(values)) + abs(c))
            for op in ops:
                diff = np.abs(op(values + c, n) - (op(values, n) + c))
                assert np.all((diff <= tol) | np.isnan(diff))

        for _ in range(500):  # scale equivariance within 1e-12 relative
            n = int(rng.integers(1, 30))
            values = rng.uniform(-1e6, 1e6, size=int(rng.integers(n, 150)))
            k = float(rng.uniform(-1e3, 1e3)) or 1.0
            scale = float(np.max(np.abs(values * k))) or 1.0
            for op in ops:
                np.testing.assert_allclose(
                    op(values * k, n), op(values, n) * k,
                    rtol=1e-12, atol=1e-12 * scale, equal_nan=True,
                )

        for _ in range(500):  # window min/max bounds
            n = int(rng.integers(1, 30))
            values = rng.uniform(-1e6, 1e6, size=int(rng.integers(n, 150)))
            slack = 64 * np.finfo(float).eps * (np.max(np.abs(values)) + 1.0)
            sma_out, wma_out, ema_out = (op(values, n) for op in ops)
            for i in range(n - 1, len(values)):
                window = values[i - n + 1 : i + 1]
                lo, hi = window.min() - slack, window.max() + slack
                assert lo <= sma_out[i] <= hi
                assert lo <= wma_out[i] <= hi
                # EMA is bounded by everything seen since the seed window
                assert values[: i + 1].min() - slack <= ema_out[i] <= values[: i + 1].max() + slack


def _random_csv(rng: np.random.Generator) -> bytes:
    layout = rng.integers(0, 3)
    if layout == 0:
        names = ["Open", "High", "Low", "Close", "Volume"]
    elif layout == 1:
        names = ["Reading"]
    else:
        names = ["AltA", "AltB"]
    n_rows = int(rng.integers(0, 40))
    base = dt.date(2021, 2, 4)
    offsets = rng.choice(3650, size=n_rows, replace=False) if n_rows else []
    dates = [base + dt.timedelta(days=int(o)) for o in offsets]
    dotted = bool(rng.integers(0, 2))
    lines = ["Date," + ",".join(names)]
    for date in dates:
        stamp = date.strftime("%d.%m.%Y") if dotted else date.isoformat()
        cells = []
        for _ in names:
            if rng.random() < 0.1:
                cells.append("")
            else:
                cells.append(repr(float(np.round(rng.uniform(-1e4, 1e4), 6))))
        lines.append(stamp + "," + ",".join(cells))
    return ("\n".join(lines) + "\n").encode()


def test_ingest_round_trip():
    with criterion("ingest round-trip identity on 100 randomized CSVs + duplication rule"):
        rng = np.random.default_rng(13)
        for _ in range(100):
            text = _random_csv(rng)
            frame = load_csv(text)
            assert load_csv(dump_csv(frame).encode()) == frame
            assert normalize_columns(frame) == frame  # idempotence

        fixture = load_csv(b"Date,X\n04.02.2021,1.5\n05.02.2021,-2.0\n")
        assert fixture.column_names == ("X", "Open", "High", "Low", "Close")
        for name in OHLC_COLUMNS:
            assert np.array_equal(fixture.column(name), fixture.column("X"))


def test_remote_client_against_stub():
    from conftest import StubServer

    with criterion("remote client: cache hit, single-flight coalescing, stale-on-error"):
        stub = StubServer().start()
        try:
            payload = SAMPLE_CSV.read_bytes()
            stub.default = (200, payload)
            assert stub.url_template.startswith("http://127.0.0.1:")  # no real endpoint
            config = RemoteEndpointConfig(
                base_url_template=stub.url_template, timeout=2.0, max_retries=0
            )
            symbol = parse_symbol("EBAY.US")
            now = [0.0]
            cache = QuoteCache(ttl=900, clock=lambda: now[0])

            cache.get_or_fetch(symbol, config)
            cache.get_or_fetch(symbol, config)
            assert stub.request_count == 1  # cache hit issues zero requests

            cold = QuoteCache(ttl=900)
            stub.requests.clear()
            stub.delay = 0.2
            barrier = threading.Barrier(6)
            results, errors = [], []

            def worker():
                barrier.wait()
                try:
                    results.append(cold.get_or_fetch(symbol, config))
                except Exception as exc:
                    errors.append(exc)

            threads = [threading.Thread(target=worker) for _ in range(6)]
            for t in threads:
                t.start()
            for t in threads:
                t.join(timeout=10)
            assert not errors and len(results) == 6
            assert stub.request_count == 1  # coalesced to a single request

            stub.delay = 0.0
            now[0] = 10_000.0  # expire the first cache's entry
            stub.default = (500, b"")
            degraded = cache.get_or_fetch(symbol, config)
            assert degraded.stale
            assert degraded.frame.row_count == 29
        finally:
            stub.stop()


def test_service_contract_suite(monkeypatch):
    from conftest import StubServer

    with criterion("service contract: documented status codes and alignment"):
        stub = StubServer().start()
        try:
            remote = RemoteEndpointConfig(
                base_url_template=stub.url_template, timeout=2.0, max_retries=0
            )
            app = create_app(remote_config=remote)
            payload = SAMPLE_CSV.read_bytes()
            with TestClient(app) as client:
                def upload(body, name="demo"):
                    return client.post(
                        "/api/frames",
                        data={"name": name},
                        files={"file": ("f.csv", body, "text/csv")},
                    )

                assert upload(payload).status_code == 201
                assert upload(b"Date,Close\n", "empty").json()["row_count"] == 0
                assert upload(b"Date,Close\n05.02.2021,1\n05.02.2021,2\n").status_code == 400

                monkeypatch.setattr(service_module, "MAX_UPLOAD_BYTES", 16)
                assert upload(payload).status_code == 413
                monkeypatch.undo()
                assert upload(payload).status_code == 201

                assert client.get("/api/frames/demo").json()["row_count"] == 29
                params = {"from": "2021-02-04", "to": "2021-02-08"}
                assert client.get("/api/frames/demo", params=params).json()["row_count"] == 3
                assert client.get("/api/frames/none").status_code == 404
                assert client.get("/api/frames/demo", params={"from": "x"}).status_code == 400
                bad = {"from": "2021-03-01", "to": "2021-02-01"}
                assert client.get("/api/frames/demo", params=bad).status_code == 400

                for period in (1, 2, 3, 5, 10):
                    body = client.get(
                        "/api/frames/demo/indicators",
                        params={"spec": f"sma:{period},wma:{period},ema:{period}"},
                    ).json()
                    for item in body["indicators"]:
                        values = item["values"]
                        assert len(values) == 29  # aligned with the frame
                        assert values[: period - 1] == [None] * (period - 1)
                        assert values[period - 1] is not None

                api = "/api/frames/demo/indicators"
                assert client.get(api, params={"spec": "rsi:14"}).status_code == 400
                assert client.get(api, params={"spec": "sma:0"}).status_code == 400
                assert client.get(api, params={"spec": "sma:x"}).status_code == 400
                assert client.get(api, params={"spec": "sma:3:Gone"}).status_code == 404

                stub.default = (200, payload)
                assert client.get("/api/quotes/EBAY.US").status_code == 200
                assert client.get("/api/frames/EBAY.US").status_code == 200
                assert client.get("/api/quotes/EBAY").status_code == 400
                stub.default = (200, b"")
                assert client.get("/api/quotes/XX.ZZ").status_code == 404
                stub.default = (500, b"")
                assert client.get("/api/quotes/YY.ZZ").status_code == 502

                assert client.get("/api/config").json() == {"default_period": 20}
                assert client.put("/api/config", json={"default_period": 7}).json() == {
                    "default_period": 7
                }
                assert client.get("/api/config").json() == {"default_period": 7}
                assert client.put("/api/config", json={"default_period": 0}).status_code == 400

                for response in (
                    client.get("/api/frames/none"),
                    client.get(api, params={"spec": "rsi:14"}),
                    client.get("/api/quotes/EBAY"),
                ):
                    body = response.json()
                    assert "code" in body and "message" in body
        finally:
            stub.stop()


def test_cli_determinism(tmp_path):
    with criterion("CLI determinism: byte-identical SVGs, bit-identical reload"):
        source = tmp_path / "input.csv"
        source.write_bytes(SAMPLE_CSV.read_bytes())

        svgs = []
        for name in ("one.svg", "two.svg"):
            out = tmp_path / name
            subprocess.run(
                [sys.executable, "-m", "mova", "plot", "--input", str(source),
                 "--spec", "sma:3,wma:3,ema:3", "--type", "candle", "--output", str(out)],
                check=True, capture_output=True,
            )
            svgs.append(out.read_bytes())
        assert svgs[0] == svgs[1]

        computed = tmp_path / "indicators.csv"
        subprocess.run(
            [sys.executable, "-m", "mova", "compute", "--input", str(source),
             "--spec", "sma:3,wma:7,ema:5", "--output", str(computed)],
            check=True, capture_output=True,
        )
        reloaded = load_csv(computed.read_bytes())
        frame = load_csv(SAMPLE_CSV.read_bytes())
        close = frame.column("Close")
        for label, expected in (
            ("SMA(3)", sma(close, 3)),
            ("WMA(7)", wma(close, 7)),
            ("EMA(5)", ema(close, 5)),
        ):
            assert np.array_equal(reloaded.column(label), expected, equal_nan=True)
