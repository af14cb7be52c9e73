import json

import numpy as np
import pytest

from stairfec.cli import main
from stairfec.sim import build_codec


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_params_json(capsys):
    code, out = run_cli(capsys, [
        "params", "--family", "ff", "--m", "8", "--t", "3", "--s", "63",
    ])
    assert code == 0
    d = json.loads(out)
    assert d["M"] == 72 and d["R"] == "3/4"


def test_params_invalid_exits_3(capsys):
    code = main(["params", "--family", "pff", "--m", "4", "--t", "2",
                 "--s", "0"])
    assert code == 3


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["params", "--family", "ff", "--m", "8"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["bogus-verb"])
    assert exc.value.code == 2


def test_encode_decode_round_trip(tmp_path, capsys):
    codec = build_codec("sc", 4, 1, 1, length=4, window=4, l_max=4)
    rng = np.random.default_rng(3)
    payload = rng.integers(0, 2, codec.payload_bits, dtype=np.uint8)
    payload_file = tmp_path / "payload.bin"
    payload_file.write_bytes(np.packbits(payload).tobytes())
    stream_file = tmp_path / "frame.sfc"
    out_file = tmp_path / "decoded.bin"

    code = main([
        "encode", "--family", "sc", "--m", "4", "--t", "1", "--s", "1",
        "--length", "4", "--window", "4", "--l-max", "4",
        "--in", str(payload_file), "--out", str(stream_file),
    ])
    assert code == 0
    capsys.readouterr()

    code, out = run_cli(capsys, [
        "decode", "--in", str(stream_file), "--out", str(out_file),
        "--window", "4", "--l-max", "4",
    ])
    assert code == 0
    assert json.loads(out)["payload_bits"] == codec.payload_bits
    got = np.unpackbits(
        np.frombuffer(out_file.read_bytes(), dtype=np.uint8),
        count=codec.payload_bits,
    )
    assert (got == payload).all()


def test_encode_short_payload_exits_4(tmp_path, capsys):
    payload_file = tmp_path / "short.bin"
    payload_file.write_bytes(b"\x00")
    code = main([
        "encode", "--family", "sc", "--m", "4", "--t", "1", "--s", "1",
        "--length", "4", "--in", str(payload_file),
        "--out", str(tmp_path / "x.sfc"),
    ])
    assert code == 4


def test_decode_garbage_exits_4(tmp_path):
    bad = tmp_path / "bad.sfc"
    bad.write_bytes(b"garbage stream")
    code = main(["decode", "--in", str(bad),
                 "--out", str(tmp_path / "y.bin")])
    assert code == 4


def test_construct_writes_cache(tmp_path, capsys):
    out = tmp_path / "cons.npz"
    code, text = run_cli(capsys, [
        "construct", "--family", "ff", "--m", "6", "--t", "1", "--s", "1",
        "--out", str(out),
    ])
    assert code == 0
    assert out.exists()
    assert json.loads(text)["M"] == 25


def test_construct_sc_rejected(tmp_path):
    code = main(["construct", "--family", "sc", "--m", "4", "--t", "1",
                 "--s", "1", "--out", str(tmp_path / "n.npz")])
    assert code == 3


def test_inject_reports_certificate(capsys):
    code, out = run_cli(capsys, [
        "inject", "--family", "sc", "--m", "5", "--t", "2", "--s", "1",
        "--length", "6", "--window", "4", "--l-max", "6",
        "--pattern-seed", "1",
    ])
    assert code == 0
    d = json.loads(out)
    assert d["weight"] == 9
    assert d["fixed_point"] and d["single_deletions_corrected"]


def test_simulate_csv(capsys):
    code, out = run_cli(capsys, [
        "simulate", "--family", "sc", "--m", "4", "--t", "1", "--s", "1",
        "--length", "4", "--window", "4", "--l-max", "4",
        "--p", "0.0,0.01", "--min-bit-errors", "5", "--max-frames", "20",
        "--csv",
    ])
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3
    header = lines[0].split(",")
    assert "p" in header and "ber" in header


def test_floor_and_ncg(capsys):
    code, out = run_cli(capsys, [
        "floor", "--family", "ff", "--m", "8", "--t", "3", "--s", "63",
        "--p", "1e-3",
    ])
    assert code == 0
    rows = json.loads(out)
    assert rows[0]["weight"] == 8

    code, out = run_cli(capsys, ["ncg", "--rate", "3/4", "--p15", "1.82e-2"])
    assert code == 0
    assert json.loads(out)["gap_db"] == pytest.approx(1.64, abs=0.02)
