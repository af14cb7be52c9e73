"""
Command-line front end.

Verbs: params, construct, encode, decode, inject, simulate, floor, ncg.
Exit codes: 0 success, 2 usage errors (argparse), 3 construction failure,
4 stream/payload format errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from functools import partial

import numpy as np

from . import gf2
from .floors import certify_stall, ff_floor, gen_stall, ncg_gap, pff_floor, sc_floor
from .framing import StreamFormatError, read_stream, save_construction, write_stream
from .parameters import FAMILIES, family_params
from .sim import build_codec, run_monte_carlo

EXIT_CONSTRUCTION = 3
EXIT_FORMAT = 4


def _add_code_args(p, family_required=True):
    p.add_argument("--family", choices=FAMILIES, required=family_required)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--s", type=int, required=True)


def _add_codec_args(p):
    _add_code_args(p)
    p.add_argument("--L", type=int, default=2,
                   help="period length parameter (pff only)")
    p.add_argument("--length", type=int, default=8,
                   help="blocks per frame (sc/ff) or periods (pff)")
    p.add_argument("--window", type=int, default=7)
    p.add_argument("--l-max", type=int, default=8)
    p.add_argument("--seed", type=int, default=0,
                   help="construction search seed")


def _make_codec(args):
    try:
        return build_codec(
            args.family, args.m, args.t, args.s, L=args.L,
            length=args.length, window=args.window, l_max=args.l_max,
            seed=args.seed,
        )
    except (ValueError, gf2.SingularMatrixError) as err:
        print(f"construction failed: {err}", file=sys.stderr)
        raise SystemExit(EXIT_CONSTRUCTION)


def cmd_params(args):
    try:
        params = family_params(args.family, args.m, args.t, args.s)
    except ValueError as err:
        print(f"invalid parameters: {err}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    print(json.dumps(params.as_dict(), indent=2))
    return 0


def cmd_construct(args):
    from .ff import search_construction
    from .pff import search_pff_construction

    try:
        if args.family == "ff":
            cons = search_construction(args.m, args.t, args.s, seed=args.seed)
        elif args.family == "pff":
            cons = search_pff_construction(args.m, args.t, args.s,
                                           seed=args.seed)
        else:
            print("sc needs no precomputed construction", file=sys.stderr)
            return EXIT_CONSTRUCTION
    except (ValueError, gf2.SingularMatrixError) as err:
        print(f"construction failed: {err}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    save_construction(cons, args.out)
    print(json.dumps({"family": args.family, "mode": cons.mode,
                      "M": cons.m_side, "r": cons.r, "out": args.out}))
    return 0


def _read_payload(path, n_bits):
    with open(path, "rb") as fh:
        raw = np.frombuffer(fh.read(), dtype=np.uint8)
    if raw.size * 8 < n_bits:
        raise StreamFormatError(
            f"payload file has {raw.size * 8} bits, codec needs {n_bits}"
        )
    return np.unpackbits(raw, count=n_bits)


def cmd_encode(args):
    codec = _make_codec(args)
    try:
        payload = _read_payload(args.infile, codec.payload_bits)
    except (OSError, StreamFormatError) as err:
        print(f"cannot read payload: {err}", file=sys.stderr)
        return EXIT_FORMAT
    frame = codec.encode_payload(payload)
    data = write_stream(codec, frame, seed=args.seed)
    with open(args.out, "wb") as fh:
        fh.write(data)
    print(json.dumps({"config": codec.describe(), "bytes": len(data)}))
    return 0


def cmd_decode(args):
    try:
        with open(args.infile, "rb") as fh:
            data = fh.read()
        codec, frame = read_stream(data, window=args.window, l_max=args.l_max)
    except (OSError, StreamFormatError) as err:
        print(f"cannot read stream: {err}", file=sys.stderr)
        return EXIT_FORMAT
    codec.decode_frame(frame)
    payload = codec.extract_payload(frame)
    with open(args.out, "wb") as fh:
        fh.write(np.packbits(payload).tobytes())
    print(json.dumps({"config": codec.describe(),
                      "payload_bits": int(payload.size)}))
    return 0


def cmd_inject(args):
    codec = _make_codec(args)
    try:
        pattern = gen_stall(codec, seed=args.pattern_seed)
    except RuntimeError as err:
        print(f"stall generation failed: {err}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    fixed, minimal = certify_stall(codec, pattern)
    print(json.dumps({
        "config": codec.describe(),
        "weight": pattern.weight,
        "entries": [list(e) for e in pattern.entries],
        "fixed_point": bool(fixed),
        "single_deletions_corrected": bool(minimal),
    }, indent=2))
    return 0


def cmd_simulate(args):
    codec_factory = partial(
        build_codec, args.family, args.m, args.t, args.s, L=args.L,
        length=args.length, window=args.window, l_max=args.l_max,
        seed=args.seed,
    )
    # fail fast on bad parameters before spawning workers
    _make_codec(args)
    rows = []
    for p in args.p:
        report = run_monte_carlo(
            codec_factory, p, master_seed=args.master_seed,
            min_bit_errors=args.min_bit_errors, max_frames=args.max_frames,
            batch_frames=args.batch_frames, workers=args.workers,
        )
        rows.append(report.as_dict())
    if args.csv:
        cols = list(rows[0].keys())
        print(",".join(cols))
        for row in rows:
            print(",".join(str(row[c]) for c in cols))
    else:
        print(json.dumps(rows, indent=2))
    return 0


def cmd_floor(args):
    try:
        params = family_params(args.family, args.m, args.t, args.s)
    except ValueError as err:
        print(f"invalid parameters: {err}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    rows = []
    for p in args.p:
        if args.family == "ff":
            est = ff_floor(params.M, params.r, args.t, p)
        elif args.family == "sc":
            est = sc_floor(params.M, args.t, p)
        else:
            est = pff_floor(params.M, args.t, p)
        rows.append({"family": est.family, "p": est.p, "bker": est.bker,
                     "ber": est.ber, "weight": est.weight})
    print(json.dumps(rows, indent=2))
    return 0


def cmd_ncg(args):
    rate = Fraction(args.rate)
    gap = ncg_gap(rate, args.p15)
    print(json.dumps({"rate": str(rate), "p15": args.p15,
                      "gap_db": round(gap, 4)}))
    return 0


def _float_list(text):
    return [float(x) for x in text.split(",") if x]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stairfec",
        description="staircase / feed-forward staircase FEC toolkit",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("params", help="derived code parameters")
    _add_code_args(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("construct", help="search and cache a construction")
    _add_code_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("encode", help="encode a payload file to a stream")
    _add_codec_args(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a stream file to a payload")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=int, default=7)
    p.add_argument("--l-max", type=int, default=8)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("inject", help="generate and certify a stall pattern")
    _add_codec_args(p)
    p.add_argument("--pattern-seed", type=int, default=0)
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("simulate", help="Monte Carlo BSC simulation")
    _add_codec_args(p)
    p.add_argument("--p", type=_float_list, required=True,
                   help="comma-separated crossover probabilities")
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--min-bit-errors", type=int, default=100)
    p.add_argument("--max-frames", type=int, default=10000)
    p.add_argument("--batch-frames", type=int, default=16)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("floor", help="analytic error-floor estimate")
    _add_code_args(p)
    p.add_argument("--p", type=_float_list, required=True)
    p.set_defaults(func=cmd_floor)

    p = sub.add_parser("ncg", help="coding-gain gap to capacity")
    p.add_argument("--rate", required=True, help="code rate as a fraction")
    p.add_argument("--p15", type=float, required=True,
                   help="crossover giving output BER 1e-15")
    p.set_defaults(func=cmd_ncg)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
