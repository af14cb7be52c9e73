"""
Feed-forward staircase codes.

Blocks are all-information M x M matrices with M = (k - r)/2.  Each pair of
new blocks (B_1, B_2) behind the running block B_0 gets a redundancy pair:
row parities P_r = [B_0 B_1] G_i and column parities P_c = F_i^T [B_1; B_2],
closed into a self-consistent loop by the constraints

    Y = (pi_1(X))^T        Pc~ = (pi_2(Pr~))^T

where X (M x r) extends the row codewords and Y (r x M) the column
codewords.  Only Y and Pc~ are transmitted; X and Pr~ are their mirror
images under the permutations.  Solving the loop reduces to one Mr x Mr
linear system whose matrix A is built here and inverted once per
construction.

The shifted-block-diagonal permutation family keeps the mirror images of
any codeword spread over distinct words, which is what pushes the error
floor down; when 2r >= M that family cannot exist and the search falls
back to random permutations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import gf2
from .bch import ComponentCode
from .staircase import correct_word

__all__ = [
    "transpose_indices",
    "shifted_block_indices",
    "low_ef_indices",
    "build_a_matrix",
    "FFConstruction",
    "build_construction",
    "search_construction",
    "ff_rate_finite",
    "FFPair",
    "FFFrame",
    "FFCode",
]


def transpose_indices(rows, cols):
    """Index array T with vec(Y.T) = vec(Y)[T] for a rows x cols matrix Y."""
    q = np.arange(rows * cols)
    return (q % cols) * rows + q // cols


def shifted_block_indices(shifts, m):
    """Block diagonal of cyclic shifts E_m^(s_j), as an index array.

    Acts on the column-wise vec of an m x len(shifts) matrix; block j shifts
    column j up cyclically by s_j.
    """
    shifts = np.asarray(shifts, dtype=np.int64)
    i = np.arange(m)
    return (np.arange(shifts.size)[:, None] * m + (i[None, :] + shifts[:, None]) % m).reshape(-1)


def low_ef_indices(m_side, r):
    """The low-error-floor permutation pair (pi_1, pi_2); needs 2r < M.

    pi_1 uses shifts M-1..M-r and pi_2 shifts M-r-1..M-2r, so the mirror of
    row i of a channel block lands in columns i+1..i+2r mod M, all distinct.
    """
    if 2 * r >= m_side:
        raise ValueError("low-error-floor permutations need 2r < M")
    s1 = m_side - 1 - np.arange(r)
    s2 = m_side - r - 1 - np.arange(r)
    return shifted_block_indices(s1, m_side), shifted_block_indices(s2, m_side)


def build_a_matrix(m_side, r, g_r, f_r, pi1, pi2):
    """The Mr x Mr system matrix tying Y to its own parity contributions.

    Implements A = I_M (x) F_r^T + T pi_2 T (I_M (x) G_r^T) T pi_1^{-1} T
    where T alternates between the two vec-transposition permutations; the
    permutation legs are composed as index arrays so only the kron blocks
    are materialized.
    """
    t_rm = transpose_indices(r, m_side)   # vec(Y) -> vec(Y^T), Y r x M
    t_mr = transpose_indices(m_side, r)   # vec(X) -> vec(X^T), X M x r
    inv1 = gf2.invert_indices(pi1)
    # vec(Y) -> vec(X^T): transpose, un-permute, transpose again.
    idx_pre = t_rm[inv1][t_mr]
    # G_r^T acts column-wise on X^T (r x M): vec result -> pi_2 -> transpose.
    idx_post = t_rm[pi2][t_mr]
    k_g = gf2.kron(gf2.identity(m_side), g_r.T)
    term2 = np.empty_like(k_g)
    term2[:, idx_pre] = k_g[idx_post, :]
    return gf2.kron(gf2.identity(m_side), f_r.T) ^ term2


@dataclass
class FFConstruction:
    """Everything fixed at design time for one FF code."""

    code_row: ComponentCode
    code_col: ComponentCode
    m_side: int
    r: int
    pi1: np.ndarray
    pi2: np.ndarray
    a_inv: np.ndarray
    g_i: np.ndarray
    g_r: np.ndarray
    f_i: np.ndarray
    f_r: np.ndarray
    mode: str
    # mirror maps, derived in __post_init__
    idx_y_to_x: np.ndarray = field(init=False)
    idx_x_to_y: np.ndarray = field(init=False)
    idx_pc_to_pr: np.ndarray = field(init=False)
    idx_pr_to_pc: np.ndarray = field(init=False)
    idx_pr_enc: np.ndarray = field(init=False)

    def __post_init__(self):
        m_side, r = self.m_side, self.r
        t_rm = transpose_indices(r, m_side)
        t_mr = transpose_indices(m_side, r)
        self.idx_y_to_x = t_rm[gf2.invert_indices(self.pi1)]
        self.idx_x_to_y = gf2.invert_indices(self.idx_y_to_x)
        self.idx_pc_to_pr = t_rm[gf2.invert_indices(self.pi2)]
        self.idx_pr_to_pc = gf2.invert_indices(self.idx_pc_to_pr)
        # vec(P_r) -> vec((pi_2(P_r))^T), used on the encoder side
        self.idx_pr_enc = self.pi2[t_mr]

    # -- mirror views --------------------------------------------------------

    def x_from_y(self, y):
        return gf2.unvec(gf2.vec(y)[self.idx_y_to_x], self.m_side, self.r)

    def y_from_x(self, x):
        return gf2.unvec(gf2.vec(x)[self.idx_x_to_y], self.r, self.m_side)

    def pr_from_pc(self, pc):
        return gf2.unvec(gf2.vec(pc)[self.idx_pc_to_pr], self.m_side, self.r)

    def pc_from_pr(self, pr):
        return gf2.unvec(gf2.vec(pr)[self.idx_pr_to_pc], self.r, self.m_side)

    def mirror_of_x_entry(self, row, col):
        """(row, col) of the Y entry holding X[row, col].

        vec(X) = vec(Y)[idx_y_to_x], so entry p of X reads Y at index
        idx_y_to_x[p].
        """
        q = int(self.idx_y_to_x[col * self.m_side + row])
        return q % self.r, q // self.r

    def mirror_of_pr_entry(self, row, col):
        """(row, col) of the Pc~ entry holding Pr~[row, col]."""
        q = int(self.idx_pc_to_pr[col * self.m_side + row])
        return q % self.r, q // self.r

    def mirror_columns(self, row):
        """Column-word indices reached by the mirrors of channel row ``row``."""
        cols = set()
        for u in range(self.r):
            cols.add(self.mirror_of_x_entry(row, u)[1])
            cols.add(self.mirror_of_pr_entry(row, u)[1])
        return sorted(cols)


def build_construction(code_row, code_col, pi1, pi2, mode="custom"):
    """Assemble and invert the A matrix; SingularMatrixError if unusable."""
    if code_row.k <= code_row.r or (code_row.k - code_row.r) % 2:
        raise ValueError("FF needs k > r with k - r even")
    m_side = (code_row.k - code_row.r) // 2
    r = code_row.r
    part_row = code_row.parity_partition()
    part_col = code_col.parity_partition()
    a = build_a_matrix(m_side, r, part_row.g_r, part_col.g_r, pi1, pi2)
    a_inv = gf2.invert(a)
    return FFConstruction(
        code_row=code_row,
        code_col=code_col,
        m_side=m_side,
        r=r,
        pi1=np.asarray(pi1),
        pi2=np.asarray(pi2),
        a_inv=a_inv,
        g_i=part_row.g_i,
        g_r=part_row.g_r,
        f_i=part_col.g_i,
        f_r=part_col.g_r,
        mode=mode,
    )


def search_construction(m, t, s, *, seed=0, max_tries=200, primitive_poly=None):
    """Find an invertible construction for the given component parameters.

    Order of preference: the low-error-floor shifted pair, then random
    shifted-block-diagonal pairs, then unstructured random permutations.
    """
    code_row = ComponentCode(m, t, s, role="row", primitive_poly=primitive_poly)
    code_col = ComponentCode(m, t, s, role="col", reciprocal=True,
                             field=code_row.field)
    m_side = (code_row.k - code_row.r) // 2
    r = code_row.r
    rng = np.random.default_rng(seed)
    candidates = []
    if 2 * r < m_side:
        candidates.append(("low_ef", low_ef_indices(m_side, r)))
        # Any pair with 2r pairwise-distinct shifts spreads every row's
        # mirrors over distinct column words, same as the canonical pair.
        for _ in range(max_tries):
            sh = rng.choice(m_side, size=2 * r, replace=False)
            candidates.append(
                ("block_shift_spread",
                 (shifted_block_indices(sh[:r], m_side),
                  shifted_block_indices(sh[r:], m_side)))
            )
    for _ in range(max_tries):
        s1 = rng.integers(0, m_side, size=r)
        s2 = rng.integers(0, m_side, size=r)
        candidates.append(
            ("block_shift",
             (shifted_block_indices(s1, m_side), shifted_block_indices(s2, m_side)))
        )
    for _ in range(max_tries):
        candidates.append(
            ("random", (rng.permutation(m_side * r), rng.permutation(m_side * r)))
        )
    last_err = None
    for mode, (pi1, pi2) in candidates:
        try:
            return build_construction(code_row, code_col, pi1, pi2, mode=mode)
        except gf2.SingularMatrixError as err:
            last_err = err
    raise gf2.SingularMatrixError(
        f"no invertible permutation pair found for (m={m}, t={t}, s={s}): {last_err}"
    )


def ff_rate_finite(n_blocks, n, k):
    """Frame rate for a chain of n_blocks information blocks."""
    if n_blocks < 1:
        raise ValueError("need at least one block")
    num = 2 * k - n
    pairs = (n_blocks + 1) // 2
    return Fraction(num, num + Fraction(4 * pairs * (n - k), n_blocks))


@dataclass
class FFPair:
    """Transmitted redundancy of one block pair: Y (r x M) and Pc~ (r x M)."""

    y: np.ndarray
    pc: np.ndarray


@dataclass
class FFFrame:
    blocks: list
    pairs: list

    @property
    def n_blocks(self):
        return len(self.blocks) - 1


class FFCode:
    """Encoder/decoder for a fixed-length feed-forward staircase frame."""

    family = "ff"

    def __init__(self, construction, n_blocks, *, window=7, l_max=8):
        if n_blocks < 2 or n_blocks % 2:
            raise ValueError("FF frames need an even, positive block count")
        self.cons = construction
        self.M = construction.m_side
        self.r = construction.r
        self.n_blocks = n_blocks
        self.n_pairs = n_blocks // 2
        self.window = window
        self.l_max = l_max

    @property
    def payload_bits(self):
        return self.n_blocks * self.M * self.M

    # -- encoding -------------------------------------------------------------

    def encode_pair(self, b0, b1, b2):
        """Redundancy pair (Y, Pc~) for blocks (b0, b1, b2)."""
        c = self.cons
        p_r = gf2.mat_mul(np.hstack([b0, b1]), c.g_i)
        p_c = gf2.mat_mul(c.f_i.T, np.vstack([b1, b2]))
        rhs = gf2.vec(p_c) ^ gf2.vec(p_r)[c.idx_pr_enc]
        y = gf2.unvec(gf2.mat_mul(c.a_inv, rhs), self.r, self.M)
        pc = p_c ^ gf2.mat_mul(c.f_r.T, y)
        return FFPair(y=y, pc=pc)

    def encode_payload(self, bits):
        bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
        if bits.size != self.payload_bits:
            raise ValueError(
                f"payload must have {self.payload_bits} bits, got {bits.size}"
            )
        per = self.M * self.M
        blocks = [np.zeros((self.M, self.M), dtype=np.uint8)]
        for i in range(self.n_blocks):
            blocks.append(
                bits[i * per : (i + 1) * per].reshape(self.M, self.M).copy()
            )
        pairs = [
            self.encode_pair(blocks[2 * j], blocks[2 * j + 1], blocks[2 * j + 2])
            for j in range(self.n_pairs)
        ]
        return FFFrame(blocks=blocks, pairs=pairs)

    # -- decoding -------------------------------------------------------------

    def _decode_pair_cols(self, frame, j):
        c = self.cons
        b1 = frame.blocks[2 * j + 1]
        b2 = frame.blocks[2 * j + 2]
        pair = frame.pairs[j]
        m_side, r = self.M, self.r
        words = np.vstack([b1, b2, pair.y, pair.pc]).T
        mask = c.code_col.words_with_errors(words)
        changed = False
        for col in np.nonzero(mask)[0]:
            flips = correct_word(c.code_col, words[col])
            if flips is None:
                continue
            for f in flips:
                if f < m_side:
                    b1[f, col] ^= 1
                elif f < 2 * m_side:
                    b2[f - m_side, col] ^= 1
                elif f < 2 * m_side + r:
                    pair.y[f - 2 * m_side, col] ^= 1
                else:
                    pair.pc[f - 2 * m_side - r, col] ^= 1
            changed = True
        return changed

    def _decode_pair_rows(self, frame, j):
        c = self.cons
        b0 = frame.blocks[2 * j]
        b1 = frame.blocks[2 * j + 1]
        pair = frame.pairs[j]
        m_side, r = self.M, self.r
        freeze_b0 = j == 0
        x = c.x_from_y(pair.y)
        pr = c.pr_from_pc(pair.pc)
        words = np.hstack([b0, b1, x, pr])
        mask = c.code_row.words_with_errors(words)
        changed = False
        for row in np.nonzero(mask)[0]:
            flips = correct_word(c.code_row, words[row])
            if flips is None:
                continue
            if freeze_b0 and any(f < m_side for f in flips):
                continue
            for f in flips:
                if f < m_side:
                    b0[row, f] ^= 1
                elif f < 2 * m_side:
                    b1[row, f - m_side] ^= 1
                elif f < 2 * m_side + r:
                    yr, yc = c.mirror_of_x_entry(row, f - 2 * m_side)
                    pair.y[yr, yc] ^= 1
                else:
                    pr_, pc_ = c.mirror_of_pr_entry(row, f - 2 * m_side - r)
                    pair.pc[pr_, pc_] ^= 1
            changed = True
        return changed

    def decode_frame(self, frame):
        """Sliding-window decode over pairs, columns then rows, in place."""
        wp = min(max(1, self.window // 2), self.n_pairs)
        for p in range(0, self.n_pairs - wp + 1):
            for _ in range(self.l_max):
                changed = False
                for j in range(p, p + wp):
                    changed |= self._decode_pair_cols(frame, j)
                    changed |= self._decode_pair_rows(frame, j)
                if not changed:
                    break
        return frame

    # -- payload/channel views --------------------------------------------------

    def extract_payload(self, frame):
        return np.concatenate([b.reshape(-1) for b in frame.blocks[1:]])

    def channel_arrays(self, frame):
        arrays = list(frame.blocks[1:])
        for pair in frame.pairs:
            arrays.append(pair.y)
            arrays.append(pair.pc)
        return arrays

    def info_block_views(self, frame):
        return list(frame.blocks[1:])

    def describe(self):
        return {
            "family": self.family,
            "n_blocks": self.n_blocks,
            "M": self.M,
            "window": self.window,
            "l_max": self.l_max,
            "mode": self.cons.mode,
            "code": self.cons.code_row.descriptor(),
        }
