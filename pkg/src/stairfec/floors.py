"""
Error-floor estimates, coding-gain gap, and minimal stall patterns.

The floor estimates count the dominant stall patterns: error sets where
every affected component word holds exactly t+1 errors, so bounded-distance
decoding never starts.  For conventional and partial feed-forward codes the
dominant pattern has (t+1)^2 errors split across a block and its
predecessor; for feed-forward codes the mirror spreading cuts it down to
t_r(t+1) errors, t_r = ceil((t+1)/2), using the transmitted column
redundancy.

The generators build one such pattern for a concrete code and certify it
against the real decoder: applied in full it must be a decoding fixed
point, and dropping any single error must make it fully correctable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcinv

__all__ = [
    "binary_entropy",
    "entropy_inv",
    "ncg_gap",
    "FloorEstimate",
    "ff_floor",
    "sc_floor",
    "pff_floor",
    "valid_column_set",
    "StallPattern",
    "apply_stall",
    "certify_stall",
    "gen_stall",
]


# -- capacity gap -----------------------------------------------------------


def binary_entropy(p):
    if not 0 < p < 1:
        raise ValueError("entropy argument must be in (0, 1)")
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def entropy_inv(y):
    """The p in (0, 1/2] with h(p) = y, by bisection."""
    if not 0 < y <= 1:
        raise ValueError("entropy value must be in (0, 1]")
    lo, hi = 1e-15, 0.5
    for _ in range(200):
        mid = (lo + hi) / 2
        if binary_entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _gain_db(p):
    return 20 * math.log10(float(erfcinv(2 * p)))


def ncg_gap(rate, p15):
    """Gap (dB) between the achieved and capacity net coding gain.

    Both gains reference BPSK over AWGN at output BER 1e-15; the capacity
    side uses the BSC crossover h^-1(1 - R) as its threshold.
    """
    p_th = entropy_inv(1 - float(rate))
    return abs(_gain_db(p_th) - _gain_db(p15))


# -- floor estimates --------------------------------------------------------


@dataclass(frozen=True)
class FloorEstimate:
    family: str
    p: float
    bker: float
    ber: float
    weight: int


def ff_floor(m_side, r, t, p):
    """Dominant-stall floor for FF codes (pattern weight t_r(t+1))."""
    t_i = (t + 1) // 2
    t_r = t + 1 - t_i
    bker = math.comb(m_side, t_r) * math.comb(2 * r, t_r) * p ** (t_r * (t + 1))
    ber = bker * t_i * t_r / m_side**2
    return FloorEstimate("ff", p, bker, ber, t_r * (t + 1))


def _square_floor(family, m_side, t, p):
    total = sum(
        math.comb(m_side, k) * math.comb(m_side, t + 1 - k) for k in range(t + 1)
    )
    bker = math.comb(m_side, t + 1) * total * p ** ((t + 1) ** 2)
    ber = bker * (t + 1) ** 2 / m_side**2
    return FloorEstimate(family, p, bker, ber, (t + 1) ** 2)


def sc_floor(m_side, t, p):
    return _square_floor("sc", m_side, t, p)


def pff_floor(m_side, t, p):
    return _square_floor("pff", m_side, t, p)


def valid_column_set(row, m_side, r):
    """Column words reachable from channel row ``row`` under the canonical
    low-floor permutations: the 2r columns row+1 .. row+2r mod M."""
    return {(row + 1 + j) % m_side for j in range(2 * r)}


# -- stall patterns ---------------------------------------------------------


@dataclass
class StallPattern:
    """A set of channel-bit positions; kinds are 'block' (blocks[idx]),
    'y' and 'pc' (FF redundancy of pair idx)."""

    family: str
    entries: tuple

    @property
    def weight(self):
        return len(self.entries)


def _pattern_targets(codec, frame, pattern):
    out = []
    for kind, idx, row, col in pattern.entries:
        if kind == "block":
            out.append((frame.blocks[idx], row, col))
        elif kind == "y":
            out.append((frame.pairs[idx].y, row, col))
        elif kind == "pc":
            out.append((frame.pairs[idx].pc, row, col))
        else:
            raise ValueError(f"unknown entry kind {kind!r}")
    return out


def apply_stall(codec, frame, pattern):
    for arr, row, col in _pattern_targets(codec, frame, pattern):
        arr[row, col] ^= 1
    return frame


def _snapshot(codec, frame):
    return [a.copy() for a in codec.channel_arrays(frame)]


def _frames_equal(codec, frame, snapshot):
    return all(
        (a == b).all() for a, b in zip(codec.channel_arrays(frame), snapshot)
    )


def certify_stall(codec, pattern, payload=None):
    """(is_fixed_point, every_single_deletion_corrected) for a pattern."""
    if payload is None:
        payload = np.zeros(codec.payload_bits, dtype=np.uint8)
    clean = _snapshot(codec, codec.encode_payload(payload))
    frame = codec.encode_payload(payload)
    apply_stall(codec, frame, pattern)
    corrupted = _snapshot(codec, frame)
    codec.decode_frame(frame)
    fixed = _frames_equal(codec, frame, corrupted)
    deletions_ok = True
    for drop in range(pattern.weight):
        sub = StallPattern(
            pattern.family,
            tuple(e for i, e in enumerate(pattern.entries) if i != drop),
        )
        frame = codec.encode_payload(payload)
        apply_stall(codec, frame, sub)
        codec.decode_frame(frame)
        if not _frames_equal(codec, frame, clean):
            deletions_ok = False
            break
    return fixed, deletions_ok


def _gen_square_candidate(rng, t, m_side, info_cols, idx_cur, idx_prev):
    """(t+1)^2 errors: rows x cols split between a block and its
    predecessor, all in information positions."""
    rows = rng.choice(info_cols, size=t + 1, replace=False)
    split = int(rng.integers(0, t + 2))
    cols_cur = rng.choice(info_cols, size=split, replace=False)
    cols_prev = rng.choice(m_side, size=t + 1 - split, replace=False)
    entries = []
    for a in rows:
        for c in cols_cur:
            entries.append(("block", idx_cur, int(a), int(c)))
        for c in cols_prev:
            entries.append(("block", idx_prev, int(c), int(a)))
    return StallPattern("sc", tuple(entries))


def _gen_sc_candidate(codec, rng):
    i = max(2, codec.n_blocks // 2)
    if i + 1 > codec.n_blocks:
        raise ValueError("frame too short for a split stall pattern")
    return _gen_square_candidate(
        rng, codec.code.t, codec.M, codec.M - codec.r, i, i - 1
    )


def _gen_pff_candidate(codec, rng):
    """All (t+1)^2 errors inside a non-final all-information block."""
    if codec.n_periods < 2:
        raise ValueError("need at least two periods")
    q = (codec.n_periods - 1) // 2
    idx = q * (codec.L + 1) + codec.L + 1
    t = codec.cons.code_row.t
    m_side = codec.M
    rows = rng.choice(m_side, size=t + 1, replace=False)
    cols = rng.choice(m_side, size=t + 1, replace=False)
    entries = tuple(
        ("block", idx, int(a), int(c)) for a in rows for c in cols
    )
    return StallPattern("pff", entries)


def _gen_ff_candidate(codec, rng):
    """t_r(t+1) errors: info bits on a t_r x t_r row/column grid plus the
    Y mirrors that extend each affected row word."""
    cons = codec.cons
    t = cons.code_row.t
    t_i = (t + 1) // 2
    t_r = t + 1 - t_i
    m_side, r = codec.M, codec.r
    j = codec.n_pairs // 2
    block_idx = 2 * j + 1
    for _ in range(50):
        rows = sorted(int(v) for v in rng.choice(m_side, size=t_r, replace=False))
        # columns every chosen row can mirror into
        col_sets = []
        for a in rows:
            col_sets.append(
                {cons.mirror_of_x_entry(a, u)[1]: u for u in range(r)}
            )
        common = set(col_sets[0])
        for cs in col_sets[1:]:
            common &= set(cs)
        common -= set(rows)
        if len(common) < t_r:
            continue
        cols = sorted(rng.choice(sorted(common), size=t_r, replace=False))
        entries = []
        for i, a in enumerate(rows):
            for l in range(t_i):
                c = cols[(i + l) % t_r]
                entries.append(("block", block_idx, a, int(c)))
            for c in cols:
                u = col_sets[i][c]
                yr, yc = cons.mirror_of_x_entry(a, u)
                entries.append(("y", j, yr, yc))
        return StallPattern("ff", tuple(entries))
    return None


def gen_stall(codec, seed=0, max_tries=100):
    """A certified minimal stall pattern for the given codec.

    Candidates are drawn by family-specific geometry and re-drawn whenever
    a miscorrection breaks the fixed-point or minimality certificate.
    """
    rng = np.random.default_rng(seed)
    gens = {"sc": _gen_sc_candidate, "ff": _gen_ff_candidate,
            "pff": _gen_pff_candidate}
    gen = gens[codec.family]
    for _ in range(max_tries):
        pattern = gen(codec, rng)
        if pattern is None:
            continue
        fixed, minimal = certify_stall(codec, pattern)
        if fixed and minimal:
            return pattern
    raise RuntimeError(
        f"no certified stall pattern found in {max_tries} tries"
    )
