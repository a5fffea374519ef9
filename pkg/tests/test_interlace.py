import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hodnet.galois import parse_poly
from hodnet.interlace import deinterlace_int, interlace_int, interlace_net, interlace_point, mu_weight
from hodnet.pointset import PointSet, PolyLattice, generate_points


def test_point_examples():
    assert interlace_point(2, [2, 1], 2) == 0b1001  # (0.5, 0.25) -> 0.5625
    assert interlace_point(2, [3, 2], 2) == 0b1110  # (0.75, 0.5) -> 0.875
    assert interlace_point(3, [0, 0, 0], 4) == 0


def test_net_identity_and_single_point():
    pts = PointSet(2, 3, np.array([[5, 3, 1, 7]]))
    assert interlace_net(1, pts) is pts
    net = interlace_net(2, pts)
    assert net.m == 6 and net.dim == 2
    assert net.digits[0, 0] == interlace_point(2, [5, 3], 3)
    assert net.digits[0, 1] == interlace_point(2, [1, 7], 3)


def test_lattice_net_composition():
    lat = PolyLattice(2, 2, parse_poly("x^2+x+1", 2), (parse_poly("1", 2), parse_poly("x", 2)))
    ys = generate_points(lat)
    net = interlace_net(2, ys)
    y1, y2 = ys.digits[1]
    assert y1 == 1  # 1/4
    assert net.digits[1, 0] == interlace_point(2, [y1, y2], 2)


def test_integer_examples():
    assert interlace_int(2, [0, 0]) == 0
    assert interlace_int(2, [1, 1]) == 3
    assert interlace_int(2, [2, 3]) == 14
    assert deinterlace_int(2, 0) == (0, 0)
    assert deinterlace_int(3, 0) == (0, 0, 0)
    assert deinterlace_int(2, 14) == (2, 3)


def test_mu_examples():
    for a in (1, 2, 3, 5):
        assert mu_weight(a, 0) == 0
    assert mu_weight(1, 6) == 3
    assert mu_weight(2, 5) == 4
    assert mu_weight(3, 5) == 4  # only two nonzero digits
    assert mu_weight(2, 8, 3) == 2 + 1  # 8 = 22_3


@given(st.integers(1, 5), st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]))
def test_deinterlace_round_trip(d, k, b):
    assert interlace_int(d, deinterlace_int(d, k, b), b) == k


@given(st.integers(1, 4), st.sampled_from([2, 3]), st.data())
def test_point_interlace_matches_digit_rule(d, b, data):
    m = data.draw(st.integers(1, 5))
    ys = [data.draw(st.integers(0, b**m - 1)) for _ in range(d)]
    x = interlace_point(d, ys, m, b)
    # digit a of y_r lands at position r + (a-1) d
    for r in range(1, d + 1):
        for a in range(1, m + 1):
            ya = (ys[r - 1] // b ** (m - a)) % b
            pos = r + (a - 1) * d
            assert (x // b ** (d * m - pos)) % b == ya


@given(st.integers(1, 4), st.sampled_from([2, 3]), st.data())
def test_mu_alpha_brute_force(alpha, b, data):
    k = data.draw(st.integers(0, b**12))
    digits = []
    v = k
    while v:
        v, r = divmod(v, b)
        digits.append(r)
    positions = [i + 1 for i, t in enumerate(digits) if t]
    expect = sum(sorted(positions, reverse=True)[:alpha])
    assert mu_weight(alpha, k, b) == expect


def test_interlace_net_rejects_bad_dimension():
    with pytest.raises(ValueError):
        interlace_net(2, PointSet(2, 2, np.zeros((4, 3), dtype=np.int64)))
