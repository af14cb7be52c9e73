import numpy as np
import pytest

from stairfec.bch import ComponentCode
from stairfec.staircase import SCFrame, StaircaseCode, correct_word, decode_pair


@pytest.fixture(scope="module")
def toy():
    code = ComponentCode(4, 1, 1)   # n=14, M=7, r=4
    return StaircaseCode(code, 6, window=4, l_max=4)


def test_geometry(toy):
    assert toy.M == 7
    assert toy.info_cols == 3
    assert toy.payload_bits == 6 * 7 * 3


def test_odd_n_rejected():
    code = ComponentCode(4, 1, 0)   # n=15
    with pytest.raises(ValueError):
        StaircaseCode(code, 4)


def test_encode_rows_are_codewords(toy):
    rng = np.random.default_rng(0)
    payload = rng.integers(0, 2, toy.payload_bits, dtype=np.uint8)
    frame = toy.encode_payload(payload)
    assert (frame.blocks[0] == 0).all()
    for i in range(1, len(frame.blocks)):
        words = np.hstack([frame.blocks[i - 1].T, frame.blocks[i]])
        for row in words:
            assert not any(toy.code.syndromes(row))


def test_noiseless_round_trip(toy):
    rng = np.random.default_rng(1)
    payload = rng.integers(0, 2, toy.payload_bits, dtype=np.uint8)
    frame = toy.encode_payload(payload)
    toy.decode_frame(frame)
    assert (toy.extract_payload(frame) == payload).all()


def test_corrects_scattered_errors(toy):
    rng = np.random.default_rng(2)
    for trial in range(10):
        payload = rng.integers(0, 2, toy.payload_bits, dtype=np.uint8)
        frame = toy.encode_payload(payload)
        # one error per block: always within the per-word budget
        for b in frame.blocks[1:]:
            b[rng.integers(0, toy.M), rng.integers(0, toy.M)] ^= 1
        toy.decode_frame(frame)
        assert (toy.extract_payload(frame) == payload).all()


def test_correct_word_pad_freeze():
    code = ComponentCode(5, 1, 2)   # n=29
    msg = np.zeros(code.k, dtype=np.uint8)
    msg[10] = 1
    word = code.systematic_encode(msg)
    pad = 4
    assert (word[:pad] == 0).all()
    stripped = word[pad:].copy()
    stripped[3] ^= 1
    flips = correct_word(code, stripped, pad)
    assert flips == (3,)
    # an error pattern whose correction lands in the pad is refused
    bad = word[pad:].copy()
    full = word.copy()
    full[0] ^= 1   # error in the pad region of the full word
    res = code.decode(full)
    assert res.ok and res.flips == (0,)
    assert correct_word(code, bad, pad) == ()  # clean word: no flips


def test_decode_pair_freeze_prev():
    code = ComponentCode(4, 1, 1)
    sc = StaircaseCode(code, 2, window=2, l_max=2)
    payload = np.zeros(sc.payload_bits, dtype=np.uint8)
    frame = sc.encode_payload(payload)
    zero = frame.blocks[0]
    # an error in B_1 is corrected without touching the frozen zero block
    frame.blocks[1][2, 3] ^= 1
    decode_pair(code, frame.blocks[0], frame.blocks[1], freeze_prev=True)
    assert (zero == 0).all()
    assert (frame.blocks[1] == sc.encode_payload(payload).blocks[1]).all()


def test_payload_size_validated(toy):
    with pytest.raises(ValueError):
        toy.encode_payload(np.zeros(5, dtype=np.uint8))


def test_channel_and_info_views(toy):
    payload = np.zeros(toy.payload_bits, dtype=np.uint8)
    frame = toy.encode_payload(payload)
    arrays = toy.channel_arrays(frame)
    assert len(arrays) == toy.n_blocks
    views = toy.info_block_views(frame)
    assert all(v.shape == (toy.M, toy.info_cols) for v in views)
    # views alias frame storage
    arrays[0][0, 0] ^= 1
    assert frame.blocks[1][0, 0] == 1


def test_frame_container():
    frame = SCFrame([np.zeros((2, 2), dtype=np.uint8)] * 3)
    assert frame.n_blocks == 2
