"""
Monte Carlo BSC simulation harness.

Frames are numbered globally; frame i draws its payload and channel noise
from numpy's SeedSequence(master_seed, spawn_key=(i,)), so results depend
only on (master_seed, frame count), never on how frames were batched over
workers.  The run proceeds in fixed-size rounds and stops at a round
boundary once enough information-bit errors have accumulated (or the frame
budget runs out), which keeps worker counts out of the stopping decision.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from .ff import FFCode, search_construction
from .pff import PFFCode, search_pff_construction
from .staircase import StaircaseCode
from .bch import ComponentCode

__all__ = [
    "build_codec",
    "bsc_corrupt",
    "run_frames",
    "SimReport",
    "run_monte_carlo",
]


def build_codec(family, m, t, s, *, L=2, length=8, window=7, l_max=8, seed=0,
                primitive_poly=None):
    """Construct a frame codec; ``length`` counts blocks (sc/ff) or
    periods (pff)."""
    if family == "sc":
        code = ComponentCode(m, t, s, primitive_poly=primitive_poly)
        return StaircaseCode(code, length, window=window, l_max=l_max)
    if family == "ff":
        cons = search_construction(m, t, s, seed=seed,
                                   primitive_poly=primitive_poly)
        return FFCode(cons, length, window=window, l_max=l_max)
    if family == "pff":
        cons = search_pff_construction(m, t, s, seed=seed,
                                       primitive_poly=primitive_poly)
        return PFFCode(cons, L, length, window=window, l_max=l_max)
    raise ValueError(f"unknown family {family!r}")


def bsc_corrupt(codec, frame, p, rng):
    """Flip each transmitted bit independently with probability p."""
    flipped = 0
    for arr in codec.channel_arrays(frame):
        noise = (rng.random(arr.shape) < p).astype(np.uint8)
        arr ^= noise
        flipped += int(noise.sum())
    return flipped


def _frame_rng(master_seed, index):
    return np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=(index,))
    )


def run_frames(codec, p, master_seed, indices):
    """Simulate the given frame indices; returns raw error counters."""
    bits = bit_errors = blocks = block_errors = 0
    for i in indices:
        rng = _frame_rng(master_seed, int(i))
        payload = rng.integers(0, 2, codec.payload_bits, dtype=np.uint8)
        frame = codec.encode_payload(payload)
        bsc_corrupt(codec, frame, p, rng)
        codec.decode_frame(frame)
        offset = 0
        for view in codec.info_block_views(frame):
            flat = view.reshape(-1)
            errs = int((flat != payload[offset : offset + flat.size]).sum())
            offset += flat.size
            bits += flat.size
            bit_errors += errs
            blocks += 1
            block_errors += errs > 0
    return len(indices), bits, bit_errors, blocks, block_errors


_WORKER_CODEC = None


def _init_worker(codec_factory):
    global _WORKER_CODEC
    _WORKER_CODEC = codec_factory()


def _worker_task(p, master_seed, indices):
    return run_frames(_WORKER_CODEC, p, master_seed, indices)


def _ci95(errors, total):
    if total == 0:
        return 0.0
    phat = errors / total
    return 1.96 * math.sqrt(max(phat * (1 - phat), 0.0) / total)


@dataclass
class SimReport:
    family: str
    p: float
    master_seed: int
    frames: int
    info_bits: int
    bit_errors: int
    blocks: int
    block_errors: int
    workers: int
    elapsed_s: float

    @property
    def ber(self):
        return self.bit_errors / self.info_bits if self.info_bits else 0.0

    @property
    def bker(self):
        return self.block_errors / self.blocks if self.blocks else 0.0

    @property
    def ber_ci95(self):
        return _ci95(self.bit_errors, self.info_bits)

    @property
    def bker_ci95(self):
        return _ci95(self.block_errors, self.blocks)

    def as_dict(self):
        return {
            "family": self.family,
            "p": self.p,
            "master_seed": self.master_seed,
            "frames": self.frames,
            "info_bits": self.info_bits,
            "bit_errors": self.bit_errors,
            "blocks": self.blocks,
            "block_errors": self.block_errors,
            "ber": self.ber,
            "ber_ci95": self.ber_ci95,
            "bker": self.bker,
            "bker_ci95": self.bker_ci95,
            "workers": self.workers,
            "elapsed_s": round(self.elapsed_s, 3),
        }


def run_monte_carlo(codec_factory, p, *, master_seed=0, min_bit_errors=100,
                    max_frames=10000, batch_frames=16, workers=1):
    """Fixed-round Monte Carlo over a BSC with crossover p.

    ``codec_factory`` must be a picklable zero-argument callable (for
    example functools.partial over :func:`build_codec`) when workers > 1.
    The counters after any round are identical for every worker count.
    """
    start = time.monotonic()
    totals = [0, 0, 0, 0, 0]
    next_index = 0

    def accumulate(res):
        for i in range(5):
            totals[i] += res[i]

    if workers <= 1:
        codec = codec_factory() if callable(codec_factory) else codec_factory
        family = codec.family
        while totals[2] < min_bit_errors and totals[0] < max_frames:
            count = min(batch_frames, max_frames - totals[0])
            accumulate(run_frames(
                codec, p, master_seed, range(next_index, next_index + count)
            ))
            next_index += count
    else:
        family = codec_factory().family
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(codec_factory,),
        ) as pool:
            while totals[2] < min_bit_errors and totals[0] < max_frames:
                count = min(batch_frames, max_frames - totals[0])
                indices = list(range(next_index, next_index + count))
                next_index += count
                chunks = [indices[w::workers] for w in range(workers)]
                futures = [
                    pool.submit(_worker_task, p, master_seed, chunk)
                    for chunk in chunks if chunk
                ]
                for fut in futures:
                    accumulate(fut.result())

    return SimReport(
        family=family,
        p=p,
        master_seed=master_seed,
        frames=totals[0],
        info_bits=totals[1],
        bit_errors=totals[2],
        blocks=totals[3],
        block_errors=totals[4],
        workers=workers,
        elapsed_s=time.monotonic() - start,
    )
