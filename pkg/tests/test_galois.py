import itertools

import pytest
from hypothesis import given, strategies as st

from hodnet import galois
from hodnet.galois import GFPoly, parse_poly, poly_add, poly_mulmod


def P(text, b=2):
    return parse_poly(text, b)


# --- independent oracles ---------------------------------------------------


def schoolbook_mul(u, v, b):
    out = [0] * (len(u) + len(v) - 1) if u and v else []
    for i, a in enumerate(u):
        for j, c in enumerate(v):
            out[i + j] = (out[i + j] + a * c) % b
    while out and out[-1] == 0:
        out.pop()
    return out


def long_div_rem(u, v, b):
    u = list(u)
    inv = pow(v[-1], b - 2, b)
    while len(u) >= len(v):
        f = (u[-1] * inv) % b
        shift = len(u) - len(v)
        for i, c in enumerate(v):
            u[shift + i] = (u[shift + i] - f * c) % b
        while u and u[-1] == 0:
            u.pop()
    return u


def roots_or_small_factor(coeffs, b):
    """Trial division by every monic polynomial of degree <= deg/2."""
    n = len(coeffs) - 1
    for deg in range(1, n // 2 + 1):
        for tail in itertools.product(range(b), repeat=deg):
            div = list(tail) + [1]
            if not long_div_rem(coeffs, div, b):
                return True
    return False


def laurent_long_division(q, p, m, b):
    """Digits of q/p at x^-1..x^-m by formal long division."""
    rem = long_div_rem(q, p, b) if q else []
    digits = []
    inv = pow(p[-1], b - 2, b)
    for _ in range(m):
        rem = [0] + rem  # multiply by x
        if len(rem) >= len(p):
            t = (rem[len(p) - 1] * inv) % b
            for i, c in enumerate(p):
                rem[i] = (rem[i] - t * c) % b
            while rem and rem[-1] == 0:
                rem.pop()
        else:
            t = 0
        digits.append(t)
    return tuple(digits)


# --- examples --------------------------------------------------------------


def test_addition_examples():
    assert poly_add(P("x+1"), P("x+1")).is_zero()
    assert poly_add(P("x^2+1"), P("x")) == P("x^2+x+1")
    assert poly_add(P("2x+1", 3), P("x+2", 3)).is_zero()


def test_mulmod_examples():
    p = P("x^2+x+1")
    assert poly_mulmod(P("x"), P("x"), p) == P("x+1")
    assert poly_mulmod(P("x"), P("x+1"), p) == P("1")
    q = P("x^3+x")
    assert poly_mulmod(P("1"), q, p) == GFPoly.from_int(2, galois.mod(q.value, p.value, 2))


def test_irreducibility_examples():
    assert galois.is_irreducible(P("x^2+x+1"))
    assert not galois.is_irreducible(P("x^2+1"))
    assert galois.is_irreducible(P("x^3+x+1"))


def test_smallest_irreducible_examples():
    assert galois.smallest_irreducible(2, 2) == P("x^2+x+1")
    assert galois.smallest_irreducible(2, 3) == P("x^3+x+1")
    assert galois.smallest_irreducible(2, 1) == P("x")


def test_primitive_element_examples():
    assert galois.primitive_element(P("x^2+x+1")) == P("x")
    assert galois.primitive_element(P("x")) == P("1")
    assert galois.primitive_element(P("x^3+x+1")) == P("x")


def test_laurent_digit_examples():
    assert galois.laurent_digits(P("0"), P("x^3+x+1"), 3) == (0, 0, 0)
    assert galois.laurent_digits(P("1"), P("x^3+x+1"), 3) == (0, 0, 1)
    assert galois.laurent_digits(P("1"), P("x^2+x+1"), 2) == (0, 1)


def test_zero_degree_is_distinct_from_constants():
    assert GFPoly.from_int(2, 0).degree == galois.ZERO_DEGREE
    assert GFPoly.from_int(2, 1).degree == 0
    assert galois.ZERO_DEGREE < 0 and galois.ZERO_DEGREE != -1


def test_parse_and_print_round_trip():
    for text, b in [("x^4+x+1", 2), ("2x^2+x+2", 3), ("1", 5), ("x", 3)]:
        p = parse_poly(text, b)
        assert parse_poly(str(p), b) == p
    assert parse_poly("19", 2) == P("x^4+x+1")
    with pytest.raises(ValueError):
        parse_poly("x^2+", 2)
    with pytest.raises(ValueError):
        GFPoly(2, (1, 2))


def test_primitive_element_rejects_reducible_modulus():
    with pytest.raises(ValueError):
        galois.primitive_element(P("x^2+1"))


# --- oracle comparisons ----------------------------------------------------


@pytest.mark.parametrize("b,m", [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (5, 2)])
def test_irreducibility_matches_trial_division(b, m):
    for v in range(b**m, 2 * b**m):  # monic of degree m
        coeffs = galois.to_coeffs(v, b)
        assert galois.is_irreducible(GFPoly.from_int(b, v)) == (not roots_or_small_factor(coeffs, b))


@pytest.mark.parametrize("b,m", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2)])
def test_smallest_irreducible_by_enumeration(b, m):
    first = next(v for v in range(b**m, 2 * b**m) if not roots_or_small_factor(galois.to_coeffs(v, b), b))
    assert galois.smallest_irreducible(b, m).value == first


@pytest.mark.parametrize("b,m", [(2, 3), (2, 4), (2, 5), (2, 7), (3, 2), (3, 3), (5, 2)])
def test_primitive_element_has_full_order(b, m):
    p = galois.smallest_irreducible(b, m)
    g = galois.primitive_element(p).value
    seen = set()
    x = 1
    for _ in range(b**m - 1):
        x = galois.mulmod(x, g, p.value, b)
        seen.add(x)
    assert len(seen) == b**m - 1
    # no smaller element generates the group
    for h in range(1, g):
        y, order = h, 1
        while y != 1:
            y = galois.mulmod(y, h, p.value, b)
            order += 1
        assert order < b**m - 1


@given(st.sampled_from([2, 3, 5]), st.data())
def test_mulmod_matches_schoolbook(b, data):
    m = data.draw(st.integers(1, 6))
    p = galois.smallest_irreducible(b, m)
    u = data.draw(st.integers(0, b ** (m + 2) - 1))
    v = data.draw(st.integers(0, b ** (m + 2) - 1))
    expect = long_div_rem(schoolbook_mul(galois.to_coeffs(u, b), galois.to_coeffs(v, b), b), galois.to_coeffs(p.value, b), b)
    assert galois.mulmod(u, v, p.value, b) == galois.from_coeffs(expect, b)


@given(st.sampled_from([2, 3, 5]), st.data())
def test_laurent_digits_match_long_division(b, data):
    m = data.draw(st.integers(1, 7))
    p = galois.smallest_irreducible(b, m)
    q = data.draw(st.integers(0, b**m - 1))
    got = galois.laurent_digits(GFPoly.from_int(b, q), p, m)
    assert got == laurent_long_division(galois.to_coeffs(q, b), galois.to_coeffs(p.value, b), m, b)


@given(st.sampled_from([2, 3, 5, 7]), st.data())
def test_field_axioms(b, data):
    m = data.draw(st.integers(1, 5))
    p = galois.smallest_irreducible(b, m).value
    elems = st.integers(0, b**m - 1)
    u, v, w = data.draw(elems), data.draw(elems), data.draw(elems)
    mm = lambda a, c: galois.mulmod(a, c, p, b)  # noqa: E731
    assert mm(u, v) == mm(v, u)
    assert mm(u, galois.add(v, w, b)) == galois.add(mm(u, v), mm(u, w), b)
    assert galois.add(u, galois.sub(0, u, b), b) == 0
    if u:
        assert galois.powmod(u, b**m - 1, p, b) == 1
