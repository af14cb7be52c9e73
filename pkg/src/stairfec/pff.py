"""
Partial feed-forward staircase codes.

A period of L+1 blocks repeats: L-1 standard staircase blocks, one
self-protection block S, and one all-information block D.  All blocks are
M x M with M = (k - r)/2, so the component code sees 2r structurally-zero
pad bits on standard and column words and the frame rate is exactly
1 - r/M.

The self-protection block packs two staged redundancy pairs into its
bottom 2r rows:

    S = [ M11  M12 ]        bottom = [ [Y1; Pc1~]  [Y2; Pc2~] ]
        [   bottom  ]

Stage 1 (an r x r system, A = G_r^T + F_r^T) fixes Y1 against the left
M - 2r columns; stage 2 (a 2r^2 x 2r^2 system B) fixes Y2 against the
right 2r columns, where a 2r x 2r permutation Pi scrambles how row words
read those columns.  All mirror permutations are trivial transposes:
X1 = Y1^T, Pr1~ = Pc1~^T and likewise for stage 2, so the punctured row
extensions are read straight out of S's columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .bch import ComponentCode
from .staircase import correct_word, decode_pair

__all__ = [
    "build_b_matrix",
    "PFFConstruction",
    "build_pff_construction",
    "search_pff_construction",
    "PFFFrame",
    "PFFCode",
]


def scatter_columns(a, spacing):
    """S(A): column i of a lands in column spacing*i, zeros elsewhere."""
    rows, cols = a.shape
    out = gf2.zeros(rows, spacing * cols)
    out[:, spacing * np.arange(cols)] = a
    return out


def build_b_matrix(r, a_small, g_b_t, f_r):
    """The 2r^2 x 2r^2 stage-2 system matrix.

    Stacks cyclic right-shifts of the scattered stage-1 matrix (the
    Y2^T A^T contribution) on top of kron blocks carrying G_B~ (the
    [I; F_r^T] Y2 G_B~ contribution); acts on the row-wise vec of Y2.
    """
    sa = scatter_columns(a_small, 2 * r)
    first = np.vstack([np.roll(sa, j, axis=1) for j in range(2 * r)])
    second = gf2.kron(np.vstack([gf2.identity(r), f_r.T]), g_b_t.T)
    return first ^ second


@dataclass
class PFFConstruction:
    """Design-time data for one PFF code."""

    code_row: ComponentCode
    code_col: ComponentCode
    m_side: int
    r: int
    pi: np.ndarray          # 2r row-permutation indices: G_B~ = G_B[pi]
    a_small: np.ndarray     # r x r stage-1 system
    a_inv: np.ndarray
    b_inv: np.ndarray
    g_i: np.ndarray
    g_r: np.ndarray
    f_i: np.ndarray
    f_r: np.ndarray
    gp_std: np.ndarray      # row-code G_p without its leading 2r pad rows
    mode: str

    def __post_init__(self):
        two_r = 2 * self.r
        self.colidx = gf2.invert_indices(np.asarray(self.pi))
        m2 = self.m_side - two_r
        self.g_a = self.g_i[:m2]
        self.g_b = self.g_i[m2 : self.m_side]
        self.g_c = self.g_i[self.m_side :]
        self.g_b_t = self.g_b[np.asarray(self.pi)]
        self.g_i_mod = np.vstack([self.g_a, self.g_b_t, self.g_c])

    def unknown_map(self, y2):
        """U(Y2) = Y2^T A^T + [I; F_r^T] Y2 G_B~, the stage-2 unknown side."""
        stacked = np.vstack([y2, gf2.mat_mul(self.f_r.T, y2)])
        return gf2.mat_mul(y2.T, self.a_small.T) ^ gf2.mat_mul(stacked, self.g_b_t)


def build_pff_construction(code_row, code_col, pi, mode="custom"):
    if code_row.k <= code_row.r or (code_row.k - code_row.r) % 2:
        raise ValueError("PFF needs k > r with k - r even")
    m_side = (code_row.k - code_row.r) // 2
    r = code_row.r
    if m_side <= 2 * r:
        raise ValueError("PFF needs M > 2r")
    part_row = code_row.parity_partition()
    part_col = code_col.parity_partition()
    a_small = part_row.g_r.T ^ part_col.g_r.T
    a_inv = gf2.invert(a_small)
    m2 = m_side - 2 * r
    g_b_t = part_row.g_i[m2:m_side][np.asarray(pi)]
    b = build_b_matrix(r, a_small, g_b_t, part_col.g_r)
    b_inv = gf2.invert(b)
    return PFFConstruction(
        code_row=code_row,
        code_col=code_col,
        m_side=m_side,
        r=r,
        pi=np.asarray(pi),
        a_small=a_small,
        a_inv=a_inv,
        b_inv=b_inv,
        g_i=part_row.g_i,
        g_r=part_row.g_r,
        f_i=part_col.g_i,
        f_r=part_col.g_r,
        gp_std=code_row.g_p[2 * r :],
        mode=mode,
    )


def search_pff_construction(m, t, s, *, seed=0, max_tries=200,
                            primitive_poly=None):
    """Find a Pi making both staged systems invertible; identity first."""
    code_row = ComponentCode(m, t, s, role="row", primitive_poly=primitive_poly)
    code_col = ComponentCode(m, t, s, role="col", reciprocal=True,
                             field=code_row.field)
    r = code_row.r
    rng = np.random.default_rng(seed)
    candidates = [("identity", np.arange(2 * r))]
    for _ in range(max_tries):
        candidates.append(("random", rng.permutation(2 * r)))
    last_err = None
    for mode, pi in candidates:
        try:
            return build_pff_construction(code_row, code_col, pi, mode=mode)
        except gf2.SingularMatrixError as err:
            last_err = err
    raise gf2.SingularMatrixError(
        f"no usable Pi found for (m={m}, t={t}, s={s}): {last_err}"
    )


@dataclass
class PFFFrame:
    blocks: list
    L: int

    @property
    def n_blocks(self):
        return len(self.blocks) - 1


class PFFCode:
    """Encoder/decoder for a fixed-length partial feed-forward frame."""

    family = "pff"

    def __init__(self, construction, L, n_periods, *, window=7, l_max=8):
        if L < 1:
            raise ValueError("L must be at least 1")
        if n_periods < 1:
            raise ValueError("need at least one period")
        self.cons = construction
        self.M = construction.m_side
        self.r = construction.r
        self.L = L
        self.n_periods = n_periods
        self.window = window
        self.l_max = l_max

    # -- payload geometry -----------------------------------------------------

    @property
    def bits_per_period(self):
        m_side, r = self.M, self.r
        std = (self.L - 1) * m_side * (m_side - r)
        return std + (m_side - 2 * r) * m_side + m_side * m_side

    @property
    def payload_bits(self):
        return self.n_periods * self.bits_per_period

    def _period_base(self, q):
        return q * (self.L + 1)

    # -- encoding -------------------------------------------------------------

    def encode_standard(self, prev, info):
        parity = gf2.mat_mul(np.hstack([prev.T, info]), self.cons.gp_std)
        return np.hstack([info, parity])

    def encode_sp_pair(self, prev, s_top, d_block):
        """The S block's bottom 2r rows from its own top and neighbours."""
        c = self.cons
        m_side, r = self.M, self.r
        m2 = m_side - 2 * r
        m11, m12 = s_top[:, :m2], s_top[:, m2:]
        m01, m02 = prev[:, :m2], prev[:, m2:]
        m21, m22 = d_block[:m2], d_block[m2:]
        # stage 1: left M-2r columns
        p_r1 = gf2.mat_mul(np.hstack([m11, m12[:, c.colidx], m21]), c.g_i)
        p_c1 = gf2.mat_mul(
            c.f_i.T, np.vstack([gf2.zeros(2 * r, m2), m01, m11])
        )
        y1 = gf2.mat_mul(c.a_inv, p_c1 ^ p_r1.T)
        pc1 = p_c1 ^ gf2.mat_mul(c.f_r.T, y1)
        # stage 2: right 2r columns
        p_c2 = gf2.mat_mul(
            c.f_i.T, np.vstack([gf2.zeros(2 * r, 2 * r), m02, m12])
        )
        w1 = np.vstack([y1, pc1])
        known = gf2.mat_mul(
            np.hstack([w1, np.vstack([gf2.zeros(r, 2 * r), p_c2]), m22]),
            c.g_i_mod,
        ) ^ gf2.mat_mul(
            np.hstack([gf2.zeros(2 * r, 2 * r), m02.T, m12.T]), c.f_i
        )
        y2 = gf2.unvec(
            gf2.mat_mul(c.b_inv, gf2.vec(known, order="row")),
            r, 2 * r, order="row",
        )
        pc2 = p_c2 ^ gf2.mat_mul(c.f_r.T, y2)
        bottom = np.hstack([np.vstack([y1, pc1]), np.vstack([y2, pc2])])
        return np.vstack([s_top, bottom])

    def encode_payload(self, bits):
        bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
        if bits.size != self.payload_bits:
            raise ValueError(
                f"payload must have {self.payload_bits} bits, got {bits.size}"
            )
        m_side, r = self.M, self.r
        blocks = [np.zeros((m_side, m_side), dtype=np.uint8)]
        pos = 0

        def take(count):
            nonlocal pos
            out = bits[pos : pos + count]
            pos += count
            return out

        for _ in range(self.n_periods):
            for _ in range(self.L - 1):
                info = take(m_side * (m_side - r)).reshape(m_side, m_side - r)
                blocks.append(self.encode_standard(blocks[-1], info))
            s_top = take((m_side - 2 * r) * m_side).reshape(m_side - 2 * r, m_side)
            d_block = take(m_side * m_side).reshape(m_side, m_side).copy()
            blocks.append(self.encode_sp_pair(blocks[-1], s_top, d_block))
            blocks.append(d_block)
        return PFFFrame(blocks=blocks, L=self.L)

    # -- decoding -------------------------------------------------------------

    def _decode_cols(self, frame, q):
        """Column words of period q: columns of [M0; S] with 2r pad."""
        c = self.cons
        m_side, r = self.M, self.r
        base = self._period_base(q)
        m0 = frame.blocks[base + self.L - 1]
        s_blk = frame.blocks[base + self.L]
        freeze_m0 = base + self.L - 1 == 0
        words = np.vstack([m0, s_blk]).T
        mask = c.code_col.words_with_errors(words, pad=2 * r)
        changed = False
        for col in np.nonzero(mask)[0]:
            flips = correct_word(c.code_col, words[col], 2 * r)
            if flips is None:
                continue
            if freeze_m0 and any(f < m_side for f in flips):
                continue
            for f in flips:
                if f < m_side:
                    m0[f, col] ^= 1
                else:
                    s_blk[f - m_side, col] ^= 1
            changed = True
        return changed

    def _row_words(self, s_blk, d_blk):
        c = self.cons
        m_side, r = self.M, self.r
        m2 = m_side - 2 * r
        return np.hstack([
            s_blk[:, :m2],
            s_blk[:, m2 + c.colidx],
            d_blk,
            s_blk[m2 : m2 + r, :].T,
            s_blk[m2 + r :, :].T,
        ])

    def _decode_rows(self, frame, q):
        """Row words of period q, one per S row, full length n (no pad)."""
        c = self.cons
        m_side, r = self.M, self.r
        m2 = m_side - 2 * r
        base = self._period_base(q)
        s_blk = frame.blocks[base + self.L]
        d_blk = frame.blocks[base + self.L + 1]
        words = self._row_words(s_blk, d_blk)
        mask = c.code_row.words_with_errors(words)
        changed = False
        for row in np.nonzero(mask)[0]:
            flips = correct_word(c.code_row, words[row])
            if flips is None:
                continue
            for f in flips:
                if f < m2:
                    s_blk[row, f] ^= 1
                elif f < m_side:
                    s_blk[row, m2 + c.colidx[f - m2]] ^= 1
                elif f < 2 * m_side:
                    d_blk[row, f - m_side] ^= 1
                elif f < 2 * m_side + r:
                    s_blk[m2 + (f - 2 * m_side), row] ^= 1
                else:
                    s_blk[m2 + r + (f - 2 * m_side - r), row] ^= 1
            changed = True
        return changed

    def _decode_standard(self, frame, q):
        changed = False
        base = self._period_base(q)
        for i in range(1, self.L):
            changed |= decode_pair(
                self.cons.code_row,
                frame.blocks[base + i - 1],
                frame.blocks[base + i],
                freeze_prev=(base + i - 1 == 0),
                pad=2 * self.r,
            )
        # the pair coupling this period's D is handled by period q+1's
        # standard chain (L > 1) or its column words (L == 1)
        return changed

    def _decode_period(self, frame, q):
        changed = self._decode_standard(frame, q)
        changed |= self._decode_cols(frame, q)
        changed |= self._decode_rows(frame, q)
        return changed

    def decode_frame(self, frame):
        wper = min(max(2, round(self.window / (self.L + 1))), self.n_periods)
        for p in range(0, self.n_periods - wper + 1):
            for _ in range(self.l_max):
                changed = False
                for q in range(p, p + wper):
                    changed |= self._decode_period(frame, q)
                if not changed:
                    break
        return frame

    # -- payload/channel views --------------------------------------------------

    def extract_payload(self, frame):
        m_side, r = self.M, self.r
        out = []
        for q in range(self.n_periods):
            base = self._period_base(q)
            for i in range(1, self.L):
                out.append(frame.blocks[base + i][:, : m_side - r].reshape(-1))
            out.append(frame.blocks[base + self.L][: m_side - 2 * r].reshape(-1))
            out.append(frame.blocks[base + self.L + 1].reshape(-1))
        return np.concatenate(out)

    def channel_arrays(self, frame):
        return frame.blocks[1:]

    def info_block_views(self, frame):
        m_side, r = self.M, self.r
        views = []
        for q in range(self.n_periods):
            base = self._period_base(q)
            for i in range(1, self.L):
                views.append(frame.blocks[base + i][:, : m_side - r])
            views.append(frame.blocks[base + self.L][: m_side - 2 * r])
            views.append(frame.blocks[base + self.L + 1])
        return views

    def describe(self):
        return {
            "family": self.family,
            "L": self.L,
            "n_periods": self.n_periods,
            "M": self.M,
            "window": self.window,
            "l_max": self.l_max,
            "mode": self.cons.mode,
            "code": self.cons.code_row.descriptor(),
        }
