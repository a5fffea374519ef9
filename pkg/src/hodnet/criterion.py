"""The mean-square worst-case-error bound B and independent oracles for it.

``B`` is evaluated per point from the values ``chi(y)`` of each lattice
coordinate.  Products of the form ``prod(1 + x_i) - 1`` are accumulated with
the recurrence ``e <- e + x (1 + e)`` rather than formed and then reduced by
one: criterion values go down to ~1e-16 while the individual factors are of
order one, so the literal ``-1 + mean(prod)`` would cancel away every
significant digit.  Point sums use :func:`math.fsum`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping

import mpmath
import numpy as np

from . import galois
from ._kernels import kernel_pair_sum
from .interlace import mu_weight
from .pointset import PointSet, PolyLattice, _INT64_SAFE

__all__ = [
    "CriterionParams",
    "Weights",
    "BoundParams",
    "walsh_decay_constant",
    "r_weight",
    "chi",
    "chi_table",
    "chi_matrix",
    "leading_position",
    "criterion_B",
    "criterion_B_partial",
    "criterion_B_lattice",
    "base_case_value",
    "criterion_B_dual_oracle",
    "r_weight_sum",
    "bernoulli_poly",
    "kernel_1d",
    "kernel_wce_squared",
    "shifted_kernel_table",
    "shifted_mean_square_wce",
]

_MP_DPS = 50


# ---------------------------------------------------------------------------
# constants


@lru_cache(maxsize=None)
def _walsh_decay_mp(alpha: int, b: int) -> mpmath.mpf:
    with mpmath.workdps(_MP_DPS):
        two_sin = 2 * mpmath.sin(mpmath.pi / b)
        ratio = 1 + mpmath.mpf(1) / b + mpmath.mpf(1) / (b * (b + 1))

        def C(tau):
            if tau == 1:
                return 1 / two_sin
            return ratio ** (tau - 2) / two_sin**tau

        c_tilde = 2 * ratio ** (2 * alpha - 2) / two_sin ** (2 * alpha)
        best = None
        for nu in range(1, alpha + 1):
            c_prime = mpmath.fsum(C(t) ** 2 * mpmath.mpf(b) ** (-2 * (t - nu)) for t in range(nu, alpha + 1))
            val = c_prime + c_tilde * mpmath.mpf(b) ** (-2 * (alpha - nu))
            best = val if best is None or val > best else best
        return +best


def walsh_decay_constant(alpha: int, b: int) -> float:
    """``D_{alpha,b}``: bound on the Walsh coefficients of the one-dimensional kernel."""
    if alpha < 2:
        raise ValueError("alpha must be >= 2")
    if not galois.is_prime(b):
        raise ValueError("b must be prime")
    return float(_walsh_decay_mp(alpha, b))


@dataclass(frozen=True)
class CriterionParams:
    """Base, smoothness and interlacing factor with their derived constants."""

    b: int
    alpha: int
    d: int

    def __post_init__(self):
        if not galois.is_prime(self.b):
            raise ValueError(f"b must be prime, got {self.b}")
        if self.alpha < 2:
            raise ValueError("alpha must be >= 2")
        if self.d < 1:
            raise ValueError("d must be >= 1")

    @property
    def min_ad(self) -> int:
        return min(self.alpha, self.d)

    @cached_property
    def D_const(self) -> float:
        return walsh_decay_constant(self.alpha, self.b)

    @cached_property
    def Dtilde_mp(self) -> mpmath.mpf:
        with mpmath.workdps(_MP_DPS):
            return mpmath.mpf(self.b) ** ((2 * self.d - 1) * self.alpha) * _walsh_decay_mp(self.alpha, self.b)

    @cached_property
    def Dtilde(self) -> float:
        return float(self.Dtilde_mp)


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class Weights:
    """Product weights ``gamma_1..gamma_s`` or general subset weights ``{u: gamma_u}``.

    General weights use 1-based coordinate indices; subsets that are not
    listed have weight 0, except the empty set which defaults to 1.
    """

    kind: str
    product: tuple[float, ...] = ()
    general: Mapping[frozenset, float] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("product", "general"):
            raise ValueError("kind must be 'product' or 'general'")
        if self.kind == "product":
            g = tuple(float(v) for v in self.product)
            if any(not math.isfinite(v) or v < 0 for v in g):
                raise ValueError("weights must be finite and non-negative")
            object.__setattr__(self, "product", g)
        else:
            gen = {frozenset(int(i) for i in u): float(v) for u, v in dict(self.general).items()}
            for u, v in gen.items():
                if any(i < 1 for i in u):
                    raise ValueError("subset members are 1-based coordinate indices")
                if not math.isfinite(v) or v < 0:
                    raise ValueError("weights must be finite and non-negative")
            gen.setdefault(frozenset(), 1.0)
            object.__setattr__(self, "general", gen)

    @classmethod
    def from_product(cls, gammas, label: str = "") -> "Weights":
        return cls("product", tuple(gammas), label=label or "list:" + ",".join(repr(float(g)) for g in gammas))

    @classmethod
    def from_general(cls, mapping, label: str = "general") -> "Weights":
        return cls("general", general=mapping, label=label)

    @property
    def is_product(self) -> bool:
        return self.kind == "product"

    @property
    def s(self) -> int:
        if self.is_product:
            return len(self.product)
        return max((max(u) for u in self.general if u), default=0)

    def gamma(self, u) -> float:
        u = frozenset(u)
        if self.is_product:
            return math.prod(self.product[j - 1] for j in u)
        return self.general.get(u, 0.0)

    def gamma_empty(self) -> float:
        return 1.0 if self.is_product else self.general[frozenset()]

    def nonempty_items(self, s: int):
        """``(u, gamma_u)`` for nonempty ``u`` within ``{1..s}``, ascending order."""
        if self.is_product:
            for k in range(1, s + 1):
                for u in itertools.combinations(range(1, s + 1), k):
                    yield frozenset(u), self.gamma(u)
        else:
            for u in sorted(self.general, key=lambda t: (len(t), sorted(t))):
                if u and max(u) <= s:
                    yield u, self.general[u]

    def restrict(self, s: int) -> "Weights":
        if self.is_product:
            if s > len(self.product):
                raise ValueError(f"weights cover {len(self.product)} coordinates, {s} needed")
            return Weights("product", self.product[:s], label=self.label)
        return Weights("general", general={u: g for u, g in self.general.items() if not u or max(u) <= s}, label=self.label)

    def descriptor(self) -> dict:
        if self.is_product:
            return {"kind": "product", "spec": self.label, "gamma": list(self.product)}
        return {
            "kind": "general",
            "spec": self.label,
            "gamma": {",".join(str(i) for i in sorted(u)): g for u, g in self.general.items()},
        }

    @classmethod
    def parse(cls, spec: str, s: int, base_dir=None) -> "Weights":
        """Mini-language: ``1``, ``j^-2`` (any exponent), ``list:g1,g2,..``, ``general:@file``.

        A general-weight file has one ``members:gamma`` entry per line, e.g.
        ``1,3:0.25``; an empty member list denotes the empty set.
        """
        import os
        import re

        text = spec.strip()
        if text.startswith("general:"):
            ref = text[len("general:") :].strip()
            if not ref.startswith("@"):
                raise ValueError("general weights are given as general:@<file>")
            path = ref[1:]
            if base_dir and not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            mapping = {}
            with open(path) as fh:
                for lineno, line in enumerate(fh, 1):
                    line = line.split("#", 1)[0].strip()
                    if not line:
                        continue
                    members, sep, val = line.rpartition(":")
                    if not sep:
                        raise ValueError(f"{path}:{lineno}: expected 'members:gamma'")
                    idx = frozenset(int(t) for t in members.replace(" ", "").split(",") if t)
                    mapping[idx] = float(val)
            w = cls.from_general(mapping, label=text)
            if w.s > s:
                raise ValueError(f"weight file mentions coordinate {w.s} > s={s}")
            return w
        if text.startswith("list:"):
            vals = [float(t) for t in text[5:].split(",") if t.strip()]
            if len(vals) < s:
                raise ValueError(f"weight list has {len(vals)} entries, {s} needed")
            return cls("product", tuple(vals[:s]), label=text)
        mt = re.fullmatch(r"j\^\(?(-?\d+(?:\.\d+)?)\)?", text)
        if mt:
            e = float(mt.group(1))
            return cls("product", tuple(float(j) ** e for j in range(1, s + 1)), label=text)
        try:
            c = float(text)
        except ValueError:
            raise ValueError(f"unrecognised weight specification {spec!r}") from None
        return cls("product", (c,) * s, label=text)


@dataclass(frozen=True)
class BoundParams:
    """Exponent lambda of the CBC error bound with its constants C and G_a."""

    lam: float
    params: CriterionParams

    def __post_init__(self):
        lo = 1.0 / (2 * self.params.min_ad)
        if not (lo < self.lam <= 1.0):
            raise ValueError(f"lambda must lie in ({lo}, 1], got {self.lam}")

    @cached_property
    def C_mp(self) -> mpmath.mpf:
        b, mu, a = self.params.b, self.params.min_ad, self.params.alpha
        with mpmath.workdps(_MP_DPS):
            lam = mpmath.mpf(self.lam)
            first = (mpmath.mpf(b - 1) / (b ** (2 * mu) - b)) ** lam
            second = (b - 1) / (mpmath.mpf(b) ** (2 * lam * mu) - b)
            return mpmath.mpf(b) ** (-a * lam) * max(first, second)

    @property
    def C(self) -> float:
        return float(self.C_mp)

    def G_mp(self, a: int) -> mpmath.mpf:
        if not 1 <= a <= self.params.d:
            raise ValueError("G_a is defined for 1 <= a <= d")
        with mpmath.workdps(_MP_DPS):
            return self.params.Dtilde_mp ** mpmath.mpf(self.lam) * ((1 + self.C_mp) ** a - 1)

    def G(self, a: int) -> float:
        return float(self.G_mp(a))


# ---------------------------------------------------------------------------
# chi and r


def r_weight(params: CriterionParams, l: int) -> float:
    """1 for l = 0, otherwise ``b^(-2 min(alpha,d) mu_1(l) - alpha)``."""
    if l < 0:
        raise ValueError("l must be non-negative")
    if l == 0:
        return 1.0
    b = params.b
    return float(Fraction(1, b ** (2 * params.min_ad * mu_weight(1, l, b) + params.alpha)))


def _chi_fraction(params: CriterionParams, k) -> Fraction:
    """chi at a point whose leading nonzero digit sits at position k (None for y = 0)."""
    b, mu, a = params.b, params.min_ad, params.alpha
    den = b**a * (b ** (2 * mu) - b)
    if k is None:
        return Fraction(b - 1, den)
    return (b - 1 - Fraction(b ** (2 * mu) - 1, b ** ((2 * mu - 1) * k))) / den


@lru_cache(maxsize=256)
def _chi_table_cached(b: int, alpha: int, d: int, m: int) -> tuple[float, ...]:
    params = CriterionParams(b, alpha, d)
    return tuple(float(_chi_fraction(params, k if k else None)) for k in range(m + 1))


def chi_table(params: CriterionParams, m: int) -> np.ndarray:
    """``T[k]`` is chi of an m-digit value whose leading digit is at position k; ``T[0] = chi(0)``."""
    return np.array(_chi_table_cached(params.b, params.alpha, params.d, m))


def leading_position(values, b: int, m: int) -> np.ndarray:
    """Position (1..m) of the most significant nonzero digit; 0 for the value 0."""
    v = np.asarray(values)
    if v.dtype == object:
        flat = [0 if x == 0 else m - len(galois.to_coeffs(int(x), b)) + 1 for x in v.ravel()]
        return np.array(flat, dtype=np.int64).reshape(v.shape)
    powers = np.array([b**i for i in range(m)], dtype=np.int64)
    ndig = np.searchsorted(powers, v, side="right")
    return np.where(v == 0, 0, m - ndig + 1)


def chi(params: CriterionParams, y: int, m: int) -> float:
    """chi of the fixed-point value ``y * b^-m``; the leading digit is read from the digits."""
    if not 0 <= y < params.b**m:
        raise ValueError("y must be an m-digit fixed-point integer")
    k = int(leading_position(np.array([y], dtype=object if params.b**m > _INT64_SAFE else np.int64), params.b, m)[0])
    return float(_chi_fraction(params, k if k else None))


def chi_matrix(params: CriterionParams, points: PointSet) -> np.ndarray:
    if points.b != params.b:
        raise ValueError("point base differs from criterion base")
    table = chi_table(params, points.m)
    return table[leading_position(points.digits, points.b, points.m)]


# ---------------------------------------------------------------------------
# B via chi


def _block_gains(weights: Weights, params: CriterionParams, s: int) -> np.ndarray:
    return np.array([weights.product[j] * params.Dtilde for j in range(s)], dtype=np.float64)


def product_state(chi_cols: np.ndarray, d: int, gains) -> tuple[np.ndarray, np.ndarray]:
    """Accumulators after consuming the columns of ``chi_cols`` in order.

    ``H1 = prod_{complete blocks}(1 + g_j a_j) - 1`` and
    ``H2 = prod_{columns of the open block}(1 + chi) - 1``.
    """
    N, r = chi_cols.shape
    H1 = np.zeros(N)
    H2 = np.zeros(N)
    for c in range(r):
        H2 = H2 + chi_cols[:, c] * (1.0 + H2)
        if (c + 1) % d == 0:
            H1 = H1 + (gains[c // d] * H2) * (1.0 + H1)
            H2 = np.zeros(N)
    return H1, H2


def product_terms(H1, H2, gain):
    """Per-point terms of B when the open block (with gain ``gain``) has accumulator H2."""
    return H1 + (gain * H2) * (1.0 + H1)


def _mean_fsum(terms) -> float:
    terms = np.asarray(terms)
    return math.fsum(terms.tolist()) / terms.shape[-1]


def block_values(chi_cols: np.ndarray, d: int) -> list[np.ndarray]:
    """``a_j = prod_l (1 + chi) - 1`` for each (possibly partial) block of columns."""
    N, r = chi_cols.shape
    out = []
    for j in range(0, r, d):
        a = np.zeros(N)
        for c in range(j, min(r, j + d)):
            a = a + chi_cols[:, c] * (1.0 + a)
        out.append(a)
    return out


def general_terms(blocks, weights: Weights, Dtilde: float) -> np.ndarray:
    """Per-point ``sum_{u != {}} gamma_u Dtilde^|u| prod_{j in u} a_j`` over the blocks present."""
    N = blocks[0].shape[0] if blocks else 0
    total = np.zeros(N)
    for u, g in weights.nonempty_items(len(blocks)):
        if g == 0.0:
            continue
        term = np.full(N, g * Dtilde ** len(u))
        for j in sorted(u):
            term = term * blocks[j - 1]
        total = total + term
    return total


def _criterion_from_chi(chi_cols: np.ndarray, weights: Weights, params: CriterionParams) -> float:
    d = params.d
    r = chi_cols.shape[1]
    j1 = -(-r // d)
    if weights.is_product:
        if len(weights.product) < j1:
            raise ValueError(f"weights cover {len(weights.product)} coordinates, {j1} needed")
        gains = _block_gains(weights, params, j1)
        H1, H2 = product_state(chi_cols, d, gains)
        if r % d == 0:
            return _mean_fsum(H1)
        return _mean_fsum(product_terms(H1, H2, gains[j1 - 1]))
    return _mean_fsum(general_terms(block_values(chi_cols, d), weights, params.Dtilde))


EXACT_PATTERN_LIMIT = 4096


def _criterion_exact(lead: np.ndarray, weights: Weights, params: CriterionParams, m: int):
    """B in rational arithmetic, or None when there are too many distinct patterns.

    A point's term depends only on the leading-digit positions of its
    coordinates, and chi is rational there, so grouping points by that
    pattern leaves the float weights as the only rounding.  This matters
    when B is many orders of magnitude below the individual terms.
    """
    N, r = lead.shape
    pats, counts = np.unique(lead, axis=0, return_counts=True)
    if len(pats) > EXACT_PATTERN_LIMIT:
        return None
    d = params.d
    chis = [_chi_fraction(params, k if k else None) for k in range(m + 1)]
    nblocks = -(-r // d)
    if weights.is_product:
        if len(weights.product) < nblocks:
            raise ValueError(f"weights cover {len(weights.product)} coordinates, {nblocks} needed")
        gains = [Fraction(float(g)) for g in _block_gains(weights, params, nblocks)]
    else:
        dt = Fraction(params.Dtilde)
        items = [(sorted(u), Fraction(g) * dt ** len(u)) for u, g in weights.nonempty_items(nblocks) if g]
    total = Fraction(0)
    for pat, cnt in zip(pats.tolist(), counts.tolist()):
        blocks = []
        for j in range(0, r, d):
            a = Fraction(1)
            for k in pat[j : j + d]:
                a *= 1 + chis[k]
            blocks.append(a - 1)
        if weights.is_product:
            term = Fraction(1)
            for g, a in zip(gains, blocks):
                term *= 1 + g * a
            term -= 1
        else:
            term = Fraction(0)
            for u, c in items:
                prod = c
                for j in u:
                    prod *= blocks[j - 1]
                term += prod
        total += cnt * term
    return float(total / N)


def criterion_B_partial(points: PointSet, weights: Weights, params: CriterionParams) -> float:
    """B for the first r = points.dim lattice components, the last block possibly incomplete.

    Small point sets are evaluated exactly (see :func:`_criterion_exact`),
    larger ones with the floating-point recurrence.
    """
    if points.dim < 1:
        raise ValueError("need at least one component")
    if points.b != params.b:
        raise ValueError("point base differs from criterion base")
    lead = leading_position(points.digits, points.b, points.m)
    exact = _criterion_exact(lead, weights, params, points.m)
    if exact is not None:
        return exact
    return _criterion_from_chi(chi_table(params, points.m)[lead], weights, params)


def criterion_B(points: PointSet, weights: Weights, params: CriterionParams) -> float:
    """B of a lattice point set of dimension d*s (all blocks complete)."""
    if points.dim % params.d:
        raise ValueError(f"dimension {points.dim} is not a multiple of d={params.d}")
    s = points.dim // params.d
    if weights.is_product and len(weights.product) != s:
        raise ValueError(f"expected {s} product weights, got {len(weights.product)}")
    if not weights.is_product and weights.s > s:
        raise ValueError("general weights mention coordinates beyond s")
    return criterion_B_partial(points, weights, params)


def criterion_B_lattice(lat: PolyLattice, weights: Weights, params: CriterionParams) -> float:
    from .pointset import generate_points

    return criterion_B_partial(generate_points(lat), weights, params)


def base_case_value(params: CriterionParams, m: int, gamma1: float) -> float:
    """B of the single component q_1 = 1: ``gamma_1 Dtilde (b-1) / (b^(2 mu m + alpha) (b^(2 mu) - b))``."""
    b, mu = params.b, params.min_ad
    with mpmath.workdps(_MP_DPS):
        v = mpmath.mpf(gamma1) * params.Dtilde_mp * (b - 1) / (mpmath.mpf(b) ** (2 * mu * m + params.alpha) * (b ** (2 * mu) - b))
    return float(v)


# ---------------------------------------------------------------------------
# sums of r^lambda


def r_weight_sum(params: CriterionParams, lam: float = 1.0, m: int | None = None) -> float:
    """Closed form of ``sum_{l >= 1} r(l)^lam``, or of the sum over multiples of b^m."""
    b, mu, a = params.b, params.min_ad, params.alpha
    if lam <= 1.0 / (2 * mu):
        raise ValueError("series diverges for lambda <= 1/(2 min(alpha,d))")
    with mpmath.workdps(_MP_DPS):
        lam = mpmath.mpf(lam)
        den = mpmath.mpf(b) ** (lam * a) * (mpmath.mpf(b) ** (2 * lam * mu) - b)
        if m is not None:
            den *= mpmath.mpf(b) ** (2 * lam * mu * m)
        return float((b - 1) / den)


# ---------------------------------------------------------------------------
# dual-net oracle


def _poly_add_vec(u: np.ndarray, v: np.ndarray, b: int, m: int) -> np.ndarray:
    if b == 2:
        return u ^ v
    out = np.zeros_like(u)
    place = 1
    for _ in range(m):
        out = out + ((u // place + v // place) % b) * place
        place *= b
    return out


def _poly_neg_vec(u: np.ndarray, b: int, m: int) -> np.ndarray:
    if b == 2:
        return u
    out = np.zeros_like(u)
    place = 1
    for _ in range(m):
        out = out + ((-(u // place)) % b) * place
        place *= b
    return out


def criterion_B_dual_oracle(
    lat: PolyLattice,
    weights: Weights,
    params: CriterionParams,
    digit_cap: int | None = None,
    max_tuples: int = 2**24,
) -> tuple[float, float]:
    """B summed directly over the dual net, with frequencies below ``b^digit_cap``.

    Returns ``(value, tail_bound)``: ``value`` is the truncated sum and
    ``tail_bound`` bounds the omitted part.  Frequencies are grouped by
    their residue t modulo b^m (which alone decides dual membership); each
    residue class contributes ``r(t) + sum_{a=1}^{cap-m} (b-1) b^(a-1) b^(-2 mu (m+a) - alpha)``.
    """
    b, m = lat.b, lat.m
    ds = lat.dim
    if b != params.b:
        raise ValueError("lattice base differs from criterion base")
    cap = m + 10 if digit_cap is None else int(digit_cap)
    if cap < m:
        raise ValueError("digit_cap must be >= m")
    bm = b**m
    if bm ** max(ds - 1, 0) > max_tuples:
        raise ValueError("instance too large for the dual-net oracle")
    d = params.d
    mu, alpha = params.min_ad, params.alpha

    with mpmath.workdps(_MP_DPS):
        hi = mpmath.fsum((b - 1) * mpmath.mpf(b) ** (a - 1) * mpmath.mpf(b) ** (-2 * mu * (m + a) - alpha) for a in range(1, cap - m + 1))
        full = mpmath.mpf(b - 1) / (mpmath.mpf(b) ** alpha * (b ** (2 * mu) - b))
        trunc = bm * hi + mpmath.fsum(
            (b - 1) * mpmath.mpf(b) ** (a - 1) * mpmath.mpf(b) ** (-2 * mu * a - alpha) for a in range(1, m + 1)
        )
    S = np.empty(bm)
    S[0] = float(hi)
    for t in range(1, bm):
        S[t] = r_weight(params, t) + float(hi)

    p = lat.p.value
    tables = []
    for qj in lat.q:
        tables.append(np.array([galois.mulmod(t, qj.value, p, b) for t in range(bm)], dtype=np.int64))

    value_terms = []
    tail = mpmath.mpf(0)
    for size in range(1, ds + 1):
        for w in itertools.combinations(range(ds), size):
            phi = sorted({j // d + 1 for j in w})
            gam = weights.gamma(phi)
            if gam == 0.0:
                continue
            coef = gam * params.Dtilde ** len(phi)
            with mpmath.workdps(_MP_DPS):
                tail += mpmath.mpf(coef) * (full**size - trunc**size)
            last = w[-1]
            agg = np.zeros(bm)
            np.add.at(agg, tables[last], S)
            if size == 1:
                value_terms.append(coef * agg[0])
                continue
            # enumerate residues of all but the last coordinate
            acc_val = np.ones(1)
            acc_sum = np.zeros(1, dtype=np.int64)
            for j in w[:-1]:
                acc_val = (acc_val[:, None] * S[None, :]).ravel()
                acc_sum = _poly_add_vec(
                    np.repeat(acc_sum, bm), np.tile(tables[j], acc_sum.shape[0]), b, m
                )
            need = _poly_neg_vec(acc_sum, b, m)
            value_terms.append(coef * math.fsum((acc_val * agg[need]).tolist()))
    return math.fsum(value_terms), float(tail)


# ---------------------------------------------------------------------------
# kernel oracles


_BERNOULLI = {
    1: (Fraction(-1, 2), Fraction(1)),
    2: (Fraction(1, 6), Fraction(-1), Fraction(1)),
    3: (Fraction(0), Fraction(1, 2), Fraction(-3, 2), Fraction(1)),
    4: (Fraction(-1, 30), Fraction(0), Fraction(1), Fraction(-2), Fraction(1)),
    5: (Fraction(0), Fraction(-1, 6), Fraction(0), Fraction(5, 3), Fraction(-5, 2), Fraction(1)),
    6: (Fraction(1, 42), Fraction(0), Fraction(-1, 2), Fraction(0), Fraction(5, 2), Fraction(-3), Fraction(1)),
}


def bernoulli_poly(r: int) -> tuple[Fraction, ...]:
    """Ascending monomial coefficients of the Bernoulli polynomial B_r, 1 <= r <= 6."""
    if r not in _BERNOULLI:
        raise ValueError("Bernoulli polynomials are tabulated for degrees 1..6")
    return _BERNOULLI[r]


def _kernel_coeffs(alpha: int):
    if alpha not in (2, 3):
        raise ValueError("kernel oracles support alpha in {2, 3}")
    feats = [np.array([float(c / math.factorial(r)) for c in bernoulli_poly(r)]) for r in range(1, alpha + 1)]
    sign = 1 if alpha % 2 else -1  # (-1)^(alpha+1)
    tail = np.array([float(sign * c / math.factorial(2 * alpha)) for c in bernoulli_poly(2 * alpha)])
    return feats, tail


def kernel_1d(x, y, alpha: int):
    """One-dimensional kernel part ``sum_r B_r(x)B_r(y)/(r!)^2 + (-1)^(alpha+1) B_2alpha(|x-y|)/(2alpha)!``."""
    feats, tail = _kernel_coeffs(alpha)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    P = np.polynomial.polynomial.polyval
    out = P(np.abs(x - y), tail)
    for c in feats:
        out = out + P(x, c) * P(y, c)
    return out


def _features(x: np.ndarray, alpha: int):
    feats, tail = _kernel_coeffs(alpha)
    P = np.polynomial.polynomial.polyval
    F = np.stack([P(x, c) for c in feats], axis=-1)
    return np.ascontiguousarray(F), tail


def _pair_terms_general(Kmats, weights: Weights) -> float:
    s = len(Kmats)
    total = np.zeros_like(Kmats[0])
    for u, g in weights.nonempty_items(s):
        if g == 0.0:
            continue
        term = np.full_like(Kmats[0], g)
        for j in sorted(u):
            term = term * Kmats[j - 1]
        total = total + term
    return math.fsum(total.ravel().tolist())


def kernel_wce_squared(points: PointSet, weights: Weights, alpha: int) -> float:
    """Squared worst-case error ``-gamma_0 + N^-2 sum_{n,n'} K(x_n, x_n')`` of the equal-weight rule."""
    x = points.as_float()
    N, s = x.shape
    if N == 0:
        raise ValueError("empty point set")
    if weights.is_product:
        if len(weights.product) < s:
            raise ValueError("not enough weights for the point dimension")
        feat, tail = _features(x, alpha)
        return kernel_pair_sum(x, np.array(weights.product[:s]), feat, tail) / (N * N)
    Kmats = [kernel_1d(x[:, j, None], x[None, :, j], alpha) for j in range(s)]
    return _pair_terms_general(Kmats, weights) / (N * N)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(4)


def shifted_kernel_table(b: int, P: int, alpha: int) -> np.ndarray:
    """``T[z] = integral over sigma of K(z (+) sigma, sigma)`` for every P-digit value z.

    The shift average is exact: splitting sigma into its top P digits and a
    remainder t in [0, b^-P), both arguments move by t and the integrand is a
    polynomial of degree <= 2 alpha in t, integrated by 4-point Gauss-Legendre.
    """
    if b**P > 2**14:
        raise ValueError("exhaustive shift table limited to b^P <= 2^14")
    from .randomize import digit_add

    vals = np.arange(b**P, dtype=np.int64)
    scale = float(b**P)
    ts = (_GL_NODES + 1.0) / 2.0 / scale
    wts = _GL_WEIGHTS / 2.0
    out = np.empty(b**P)
    for z in range(b**P):
        X = digit_add(np.full_like(vals, z), vals, b, P) / scale
        Y = vals / scale
        acc = np.zeros(b**P)
        for t, wt in zip(ts, wts):
            acc = acc + wt * kernel_1d(X + t, Y + t, alpha)
        out[z] = math.fsum(acc.tolist()) / scale
    return out


def shifted_mean_square_wce(
    points: PointSet,
    weights: Weights,
    alpha: int,
    n_shifts: int = 32,
    seed: int = 0,
    exhaustive: bool = False,
    shifts=None,
) -> float:
    """Mean over digital shifts of the squared worst-case error.

    ``exhaustive=True`` gives the exact shift average for points with at
    most 14 binary digits; otherwise the average runs over ``shifts`` (a
    list of :class:`~hodnet.randomize.DigitalShift`) or ``n_shifts`` seeded
    random shifts.
    """
    from .randomize import apply_shift, digit_sub, random_shift

    if exhaustive:
        b, P = points.b, points.m
        table = shifted_kernel_table(b, P, alpha)
        N, s = points.digits.shape
        Kmats = []
        for j in range(s):
            col = points.digits[:, j]
            diff = digit_sub(col[:, None], col[None, :], b, P)
            Kmats.append(table[diff])
        if weights.is_product:
            E = np.zeros((N, N))
            for j in range(s):
                F = weights.product[j] * Kmats[j]
                E = E + F * (1.0 + E)
            return math.fsum(E.ravel().tolist()) / (N * N)
        return _pair_terms_general(Kmats, weights) / (N * N)
    if shifts is None:
        if n_shifts < 1:
            raise ValueError("n_shifts must be >= 1")
        shifts = [random_shift(points.b, points.dim, None, seed, index=i) for i in range(n_shifts)]
    vals = [kernel_wce_squared(apply_shift(points, sh), weights, alpha) for sh in shifts]
    return math.fsum(vals) / len(vals)
