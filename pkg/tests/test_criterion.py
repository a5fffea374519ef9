import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from hodnet.cbc import cbc_construct_fast
from hodnet.criterion import (
    BoundParams,
    CriterionParams,
    Weights,
    base_case_value,
    chi,
    chi_table,
    criterion_B,
    criterion_B_dual_oracle,
    criterion_B_partial,
    kernel_1d,
    kernel_wce_squared,
    leading_position,
    r_weight,
    r_weight_sum,
    shifted_mean_square_wce,
    walsh_decay_constant,
)
from hodnet.galois import smallest_irreducible
from hodnet.pointset import PointSet, PolyLattice, generate_points
from hodnet.randomize import DigitalShift


def random_lattice(rng, b, m, dim):
    p = smallest_irreducible(b, m)
    q = [int(rng.integers(1, b**m)) for _ in range(dim)]
    return PolyLattice.from_ints(b, m, p.value, q)


# ---------------------------------------------------------------------------
# constants


def test_walsh_decay_constants():
    # hand-evaluated maxima over nu of the digit-decay bound
    assert walsh_decay_constant(2, 2) == pytest.approx(59 / 144, rel=1e-15)
    assert walsh_decay_constant(2, 3) == pytest.approx(361 / 648, rel=1e-15)
    assert CriterionParams(2, 2, 2).Dtilde == pytest.approx(3776 / 144, rel=1e-15)


def test_params_validation():
    with pytest.raises(ValueError):
        CriterionParams(4, 2, 2)
    with pytest.raises(ValueError):
        CriterionParams(2, 1, 2)
    with pytest.raises(ValueError):
        CriterionParams(2, 2, 0)


def test_r_weight_examples():
    P = CriterionParams(2, 2, 2)
    assert r_weight(P, 0) == 1.0
    assert r_weight(P, 1) == 2.0**-6
    assert r_weight(P, 2) == 2.0**-10
    assert r_weight(P, 3) == 2.0**-10
    with pytest.raises(ValueError):
        r_weight(P, -1)


def test_chi_examples():
    P = CriterionParams(2, 2, 2)
    assert chi(P, 0, 1) == pytest.approx(1 / 56, rel=1e-15)
    assert chi(P, 1, 1) == pytest.approx(-1 / 64, rel=1e-15)
    T = chi_table(P, 4)
    assert T[0] == chi(P, 0, 4)
    assert T[1] == chi(P, 8, 4) == chi(P, 15, 4)
    assert T[4] == chi(P, 1, 4)
    with pytest.raises(ValueError):
        chi(P, 16, 4)


def test_leading_position_object_matches_int64():
    vals = np.arange(0, 3**6)
    a = leading_position(vals, 3, 6)
    b = leading_position(vals.astype(object), 3, 6)
    assert np.array_equal(a, b)
    assert a[0] == 0 and a[1] == 6 and a[3**5] == 1


def _walsh_series(b, alpha, d, ys, m, L):
    """Truncated sum over 1 <= l < b^L of r(l) wal_l(y), and the exact remainder."""
    P = CriterionParams(b, alpha, d)
    mu = P.min_ad
    ls = np.arange(1, b**L)
    kap = np.stack([(ls // b**i) % b for i in range(m)], axis=1)  # kappa_0..kappa_{m-1}
    eta = np.stack([(ys // b ** (m - 1 - i)) % b for i in range(m)], axis=1)  # eta_1..eta_m
    E = (kap @ eta.T) % b
    ndig = np.floor(np.log(ls) / np.log(b) + 1e-12).astype(int) + 1
    r = np.array([float(b) ** (-2 * mu * int(a) - alpha) for a in ndig])
    W = np.exp(2j * np.pi * E / b)
    series = r @ W
    tail = sum((b - 1) * b ** (a - 1) * float(b) ** (-2 * mu * a - alpha) for a in range(L + 1, L + 200))
    return series, tail


@pytest.mark.parametrize("b,L,m", [(2, 14, 10), (3, 9, 6), (5, 6, 4)])
@pytest.mark.parametrize("alpha", [2, 3])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_chi_equals_walsh_series(b, L, m, alpha, d):
    rng = np.random.default_rng(1000 * b + 10 * alpha + d)
    ys = rng.integers(0, b**m, size=1000)
    ys[:3] = [0, 1, b**m - 1]
    series, tail = _walsh_series(b, alpha, d, ys, m, L)
    P = CriterionParams(b, alpha, d)
    got = chi_table(P, m)[leading_position(ys, b, m)]
    assert np.max(np.abs(series.imag)) < 1e-14
    # the float series itself carries ~1e-14 absolute rounding over ~2e4 terms
    assert np.max(np.abs(got - series.real)) <= tail + 1e-13


# ---------------------------------------------------------------------------
# B


def test_all_zero_point():
    pts = PointSet(2, 4, np.zeros((1, 4), dtype=np.int64))
    P = CriterionParams(2, 2, 2)
    B = criterion_B(pts, Weights.from_product([1, 1]), P)
    # each block contributes Dtilde * ((1 + chi0)^2 - 1); two blocks multiply
    a = P.Dtilde * ((1 + 1 / 56) ** 2 - 1)
    assert B == pytest.approx((1 + a) ** 2 - 1, rel=1e-12)
    one = criterion_B(PointSet(2, 4, np.zeros((1, 2), dtype=np.int64)), Weights.from_product([1]), P)
    assert one == pytest.approx(a, rel=1e-12)
    assert one == pytest.approx(0.9455, rel=1e-3)


def test_zero_weights_give_zero():
    rng = np.random.default_rng(3)
    pts = generate_points(random_lattice(rng, 2, 5, 4))
    assert criterion_B(pts, Weights.from_product([0, 0]), CriterionParams(2, 2, 2)) == 0.0


def test_partial_at_full_dimension_equals_B():
    rng = np.random.default_rng(4)
    pts = generate_points(random_lattice(rng, 3, 3, 6))
    P = CriterionParams(3, 2, 3)
    W = Weights.from_product([0.7, 0.2])
    assert criterion_B_partial(pts, W, P) == criterion_B(pts, W, P)


def test_dimension_checks():
    pts = PointSet(2, 3, np.zeros((8, 3), dtype=np.int64))
    P = CriterionParams(2, 2, 2)
    with pytest.raises(ValueError):
        criterion_B(pts, Weights.from_product([1, 1]), P)
    pts4 = PointSet(2, 3, np.zeros((8, 4), dtype=np.int64))
    with pytest.raises(ValueError):
        criterion_B(pts4, Weights.from_product([1, 1, 1]), P)


@pytest.mark.parametrize("b", [2, 3, 5])
@pytest.mark.parametrize("alpha", [2, 3])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_base_case_closed_form(b, alpha, d):
    P = CriterionParams(b, alpha, d)
    mu = P.min_ad
    for m in range(1, 5 if b == 5 else 7):
        for g in (1.0, 0.3):
            lat = PolyLattice.from_ints(b, m, smallest_irreducible(b, m).value, [1])
            got = criterion_B_partial(generate_points(lat), Weights.from_product([g]), P)
            exact = g * P.Dtilde * (b - 1) / (b ** (2 * mu * m + alpha) * (b ** (2 * mu) - b))
            assert got == pytest.approx(exact, rel=1e-12)
            assert base_case_value(P, m, g) == pytest.approx(exact, rel=1e-14)


@pytest.mark.parametrize("b,m,alpha,d", [(2, 6, 2, 2), (3, 4, 3, 2), (5, 4, 3, 3)])
def test_float_path_agrees_with_exact_path(b, m, alpha, d, monkeypatch):
    import hodnet.criterion as crit

    P = CriterionParams(b, alpha, d)
    W = Weights.parse("j^-2", 2)
    pts = generate_points(random_lattice(np.random.default_rng(b * m), b, m, 2 * d))
    exact = criterion_B(pts, W, P)
    monkeypatch.setattr(crit, "EXACT_PATTERN_LIMIT", 0)
    approx = criterion_B(pts, W, P)
    # per-point terms are of size gamma Dtilde chi; their mean cancels to the result
    scale = (1 + P.Dtilde * ((1 + np.max(np.abs(chi_table(P, m)))) ** d - 1)) ** 2 - 1
    assert abs(approx - exact) <= 4e-15 * scale + 1e-12 * exact


def test_exact_path_resolves_cancellation():
    # at b=5, alpha=d=3, m=4 the float mean loses about eight digits
    P = CriterionParams(5, 3, 3)
    lat = PolyLattice.from_ints(5, 4, smallest_irreducible(5, 4).value, [1])
    exact = P.Dtilde * 4 / (5 ** (24 + 3) * (5**6 - 5))
    assert criterion_B_partial(generate_points(lat), Weights.from_product([1.0]), P) == pytest.approx(exact, rel=1e-13)


def test_base_case_example():
    assert base_case_value(CriterionParams(2, 2, 2), 4, 1.0) == pytest.approx(7.15e-6, rel=2e-3)


def test_single_dimension_construction_value():
    res = cbc_construct_fast(2, 4, 1, 2, 2, Weights.from_product([1.0]))
    assert res.B_final == pytest.approx(2.11e-5, rel=5e-3)


@pytest.mark.parametrize("lam", [0.6, 0.8, 1.0])
@pytest.mark.parametrize("b,alpha,d", [(2, 2, 1), (2, 2, 2), (2, 3, 3), (3, 2, 2), (5, 3, 1)])
def test_r_weight_sums_closed_form(lam, b, alpha, d):
    P = CriterionParams(b, alpha, d)
    mu = P.min_ad
    K = {2: 10, 3: 6, 5: 4}[b]
    with mpmath.workdps(40):
        group = lambda a: (b - 1) * mpmath.mpf(b) ** (a - 1) * mpmath.mpf(b) ** (-lam * (2 * mu * a + alpha))
        tail = mpmath.nsum(group, [K + 1, mpmath.inf])
        head = math.fsum(r_weight(P, l) ** lam for l in range(1, b**K))
        total = float(head + tail)
    assert r_weight_sum(P, lam) == pytest.approx(total, rel=1e-10)
    for m in (1, 2, 3):
        # multiples t b^m: mu_1 grows by m; enumerate t brute force plus the group remainder
        with mpmath.workdps(40):
            head = math.fsum(r_weight(P, t * b**m) ** lam for t in range(1, b**K))
            tail = mpmath.nsum(lambda a: group(a + m) / mpmath.mpf(b) ** m, [K + 1, mpmath.inf])
            total = float(head + tail)
        assert r_weight_sum(P, lam, m) == pytest.approx(total, rel=1e-10)


def test_r_weight_sum_divergence():
    with pytest.raises(ValueError):
        r_weight_sum(CriterionParams(2, 2, 1), 0.5)


@pytest.mark.parametrize(
    "b,m,alpha,d,s,weights",
    [
        (2, 3, 2, 1, 3, "1"),
        (2, 3, 3, 1, 3, "j^-2"),
        (2, 2, 2, 2, 1, "1"),
        (2, 3, 3, 3, 1, "1"),
        (3, 2, 2, 1, 2, "j^-2"),
        (3, 2, 2, 2, 1, "0.5"),
    ],
)
def test_dual_oracle_agrees(b, m, alpha, d, s, weights):
    rng = np.random.default_rng(b * 100 + m * 10 + d)
    P = CriterionParams(b, alpha, d)
    W = Weights.parse(weights, s)
    for _ in range(3):
        lat = random_lattice(rng, b, m, d * s)
        B = criterion_B(generate_points(lat), W, P)
        val, tail = criterion_B_dual_oracle(lat, W, P)
        # largest possible per-point term; B is its mean and inherits its rounding
        cmax = np.max(np.abs(chi_table(P, m)))
        scale = math.prod(1 + g * P.Dtilde * ((1 + cmax) ** d - 1) for g in W.product) - 1
        slack = 1e-15 * scale + 1e-14 * B
        assert -slack <= B - val <= tail + slack


def test_dual_oracle_size_guard():
    lat = random_lattice(np.random.default_rng(0), 2, 10, 4)
    with pytest.raises(ValueError):
        criterion_B_dual_oracle(lat, Weights.from_product([1, 1]), CriterionParams(2, 2, 2))


# ---------------------------------------------------------------------------
# general weights and properties


def product_as_general(gammas):
    s = len(gammas)
    mapping = {}
    for k in range(1, s + 1):
        for u in itertools.combinations(range(1, s + 1), k):
            mapping[frozenset(u)] = math.prod(gammas[j - 1] for j in u)
    return Weights.from_general(mapping)


@given(
    st.integers(0, 2**32 - 1),
    st.lists(st.floats(0.0, 2.0), min_size=1, max_size=3),
    st.sampled_from([1, 2, 3]),
)
def test_product_weights_match_general(seed, gammas, d):
    rng = np.random.default_rng(seed)
    pts = generate_points(random_lattice(rng, 2, 4, d * len(gammas)))
    P = CriterionParams(2, 2, d)
    a = criterion_B(pts, Weights.from_product(gammas), P)
    b = criterion_B(pts, product_as_general(gammas), P)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-18)


@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]), st.sampled_from([1, 2, 3]))
def test_B_nonnegative_and_permutation_invariant(seed, b, d):
    rng = np.random.default_rng(seed)
    m = 4 if b == 2 else 3
    pts = generate_points(random_lattice(rng, b, m, 2 * d))
    P = CriterionParams(b, 2, d)
    W = Weights.from_product([1.0, 0.5])
    B = criterion_B(pts, W, P)
    assert B >= 0
    perm = rng.permutation(pts.n_points)
    assert criterion_B(PointSet(b, m, pts.digits[perm]), W, P) == B


@given(st.integers(0, 2**32 - 1), st.floats(0.01, 1.0), st.floats(1.0, 3.0))
def test_B_monotone_in_weights(seed, g, factor):
    rng = np.random.default_rng(seed)
    pts = generate_points(random_lattice(rng, 2, 4, 4))
    P = CriterionParams(2, 2, 2)
    lo = criterion_B(pts, Weights.from_product([g, g]), P)
    hi = criterion_B(pts, Weights.from_product([g * factor, g]), P)
    assert hi >= lo * (1 - 1e-12)


def test_weights_parse():
    assert Weights.parse("1", 3).product == (1.0, 1.0, 1.0)
    assert Weights.parse("j^-2", 3).product == (1.0, 0.25, 1 / 9)
    assert Weights.parse("list:0.5,0.25,0.1", 2).product == (0.5, 0.25)
    with pytest.raises(ValueError):
        Weights.parse("list:1", 2)
    with pytest.raises(ValueError):
        Weights.parse("bogus", 2)
    with pytest.raises(ValueError):
        Weights.from_product([-1.0])


def test_general_weights_file(tmp_path):
    f = tmp_path / "w.txt"
    f.write_text("# subsets\n1:0.5\n1,2:0.25\n:1\n")
    W = Weights.parse(f"general:@{f}", 2)
    assert not W.is_product
    assert W.gamma([1, 2]) == 0.25 and W.gamma([2]) == 0.0 and W.gamma_empty() == 1.0
    with pytest.raises(ValueError):
        Weights.parse(f"general:@{f}", 1)


# ---------------------------------------------------------------------------
# bound constants


def test_bound_constants():
    P = CriterionParams(2, 2, 2)
    bp = BoundParams(1.0, P)
    assert bp.C == pytest.approx(1 / 56, rel=1e-15)
    for a in (1, 2):
        assert bp.G(a) == pytest.approx(P.Dtilde * ((1 + 1 / 56) ** a - 1), rel=1e-14)
    with mpmath.workdps(30):
        lam = mpmath.mpf("0.7")
        b, mu, al = 2, 2, 2
        C = mpmath.mpf(b) ** (-al * lam) * max(
            (mpmath.mpf(b - 1) / (b ** (2 * mu) - b)) ** lam, (b - 1) / (mpmath.mpf(b) ** (2 * lam * mu) - b)
        )
    assert BoundParams(0.7, P).C == pytest.approx(float(C), rel=1e-14)
    with pytest.raises(ValueError):
        BoundParams(0.2, P)
    with pytest.raises(ValueError):
        BoundParams(1.5, P)


# ---------------------------------------------------------------------------
# kernel oracles


def test_kernel_at_origin():
    assert kernel_1d(0.0, 0.0, 2) == pytest.approx(1 / 4 + 1 / 144 + 1 / 720, rel=1e-15)
    pts = PointSet(2, 3, np.zeros((1, 1), dtype=np.int64))
    assert kernel_wce_squared(pts, Weights.from_product([1.0]), 2) == pytest.approx(1 / 4 + 1 / 144 + 1 / 720, rel=1e-14)
    assert kernel_wce_squared(pts, Weights.from_general({}), 2) == 0.0


@pytest.mark.parametrize("alpha", [2, 3])
@pytest.mark.parametrize("x", [0.0, 0.13, 0.5, 0.91])
def test_kernel_integrates_to_zero(alpha, x):
    val, _ = integrate.quad(lambda y: float(kernel_1d(x, y, alpha)), 0, 1, points=[x], epsabs=1e-13)
    assert abs(val) < 1e-12


@pytest.mark.parametrize("alpha", [2, 3])
def test_kernel_wce_matches_pairwise_sum(alpha):
    rng = np.random.default_rng(alpha)
    pts = PointSet(2, 10, rng.integers(0, 2**10, size=(40, 3)))
    gam = [1.0, 0.5, 0.2]
    x = pts.as_float()
    total = np.ones((40, 40))
    for j in range(3):
        total = total * (1 + gam[j] * kernel_1d(x[:, j, None], x[None, :, j], alpha))
    expect = total.mean() - 1
    assert kernel_wce_squared(pts, Weights.from_product(gam), alpha) == pytest.approx(expect, rel=1e-10)
    assert kernel_wce_squared(pts, product_as_general(gam), alpha) == pytest.approx(expect, rel=1e-10)


def test_shifted_wce_zero_shift_is_unshifted():
    rng = np.random.default_rng(5)
    pts = generate_points(random_lattice(rng, 2, 5, 2))
    W = Weights.from_product([1.0, 0.5])
    zero = DigitalShift.zero(2, 2, 30)
    got = shifted_mean_square_wce(pts, W, 2, shifts=[zero])
    assert got == pytest.approx(kernel_wce_squared(pts, W, 2), rel=1e-12)


def test_shifted_wce_random_near_exhaustive():
    rng = np.random.default_rng(6)
    pts = generate_points(random_lattice(rng, 2, 4, 2))
    W = Weights.from_product([1.0, 1.0])
    exact = shifted_mean_square_wce(pts, W, 2, exhaustive=True)
    vals = [shifted_mean_square_wce(pts, W, 2, n_shifts=1, seed=i) for i in range(64)]
    mean = float(np.mean(vals))
    sd = float(np.std(vals, ddof=1)) / math.sqrt(len(vals))
    assert abs(mean - exact) <= 3 * sd + 1e-15


def test_shifted_wce_bounded_by_B_for_order_one():
    # with d = 1 the digitally shifted kernel error is dominated by B
    rng = np.random.default_rng(7)
    for _ in range(3):
        lat = random_lattice(rng, 2, 3, 1)
        pts = generate_points(lat)
        exact = shifted_mean_square_wce(pts, Weights.from_product([1.0]), 2, exhaustive=True)
        B = criterion_B(pts, Weights.from_product([1.0]), CriterionParams(2, 2, 1))
        assert exact <= B * (1 + 1e-12)
