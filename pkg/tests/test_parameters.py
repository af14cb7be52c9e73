from fractions import Fraction

import pytest

from stairfec.parameters import family_params

# (rate, m, t, s, M) for the feed-forward constructions
FF_TABLE = [
    (Fraction(3, 4), 8, 3, 63, 72),
    (Fraction(4, 5), 8, 3, 15, 96),
    (Fraction(5, 6), 9, 3, 187, 135),
    (Fraction(13, 14), 10, 3, 183, 390),
]

# (rate, m, t, s, M) for the partial feed-forward constructions
PFF_TABLE = [
    (Fraction(3, 4), 8, 3, 15, 96),
    (Fraction(4, 5), 9, 3, 187, 135),
    (Fraction(5, 6), 9, 3, 133, 162),
    (Fraction(13, 14), 10, 3, 123, 420),
]


@pytest.mark.parametrize("rate,m,t,s,m_side", FF_TABLE)
def test_ff_table(rate, m, t, s, m_side):
    p = family_params("ff", m, t, s)
    assert p.n == (1 << m) - 1 - s
    assert p.r == m * t
    assert p.k == p.n - p.r
    assert p.M == m_side
    assert p.rate == rate
    assert abs(p.overhead_pct - float((1 / rate - 1) * 100)) < 1e-9


@pytest.mark.parametrize("rate,m,t,s,m_side", PFF_TABLE)
def test_pff_table(rate, m, t, s, m_side):
    p = family_params("pff", m, t, s)
    assert p.M == m_side
    assert p.rate == rate
    assert p.rate == 1 - Fraction(p.r, p.M)


def test_sc_params():
    p = family_params("sc", 8, 3, 63)
    assert p.n == 192 and p.M == 96
    assert p.rate == Fraction(2 * 168, 192) - 1


def test_sc_odd_n_rejected():
    with pytest.raises(ValueError):
        family_params("sc", 8, 3, 62)


def test_ff_parity_mismatch_rejected():
    # k - r odd
    with pytest.raises(ValueError):
        family_params("ff", 8, 3, 62)


def test_ff_tight_m_rejected():
    # m=4, t=1, s=1 gives M=3 < 2r=8: valid code but no low-floor perms
    with pytest.raises(ValueError):
        family_params("ff", 4, 1, 1)


def test_pff_small_m_infeasible():
    # no shortening makes a length-15 t=2 code satisfy M > 2r
    for s in range(0, 7):
        with pytest.raises(ValueError):
            family_params("pff", 4, 2, s)


def test_unknown_family():
    with pytest.raises(ValueError):
        family_params("bogus", 4, 1, 1)


def test_as_dict():
    d = family_params("pff", 8, 3, 15).as_dict()
    assert d["R"] == "3/4"
    assert d["OH_pct"] == pytest.approx(33.3333, abs=1e-3)
