"""Component-by-component search for the generating vector of a polynomial
lattice rule, minimising the interlaced criterion B one component at a time.

Both search paths share the per-point state

    H1[n] = prod over complete blocks (1 + gamma_j Dtilde a_j[n]) - 1
    H2[n] = prod over chosen columns of the open block (1 + chi) - 1

and the same exact evaluator for a candidate column, so they produce the
same B values bit for bit.  The naive path evaluates every candidate with
it.  The fast path orders the candidates by powers of a primitive element,
which turns the candidate-dependent part of B into a cyclic convolution; the
convolution only shortlists candidates, and the shortlist is re-scored with
the exact evaluator.  Ties (values within a relative 1e-9 of the minimum)
go to the candidate with the smallest integer encoding.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import galois
from ._kernels import circulant_direct, gf2_power_table
from .criterion import (
    BoundParams,
    CriterionParams,
    Weights,
    chi_table,
    general_terms,
    leading_position,
    product_state,
    product_terms,
)
from .galois import GFPoly
from .pointset import PolyLattice, generate_points, lattice_columns, span_columns

__all__ = [
    "BudgetExceeded",
    "CBCState",
    "ConstructionResult",
    "cbc_construct_naive",
    "cbc_construct_fast",
    "circulant_apply",
    "cbc_error_bound",
    "cbc_partial_bound",
    "DIRECT_LIMIT",
    "DEFAULT_BUDGET",
]

EPS = np.finfo(np.float64).eps
DIRECT_LIMIT = 1024
DEFAULT_BUDGET = 2**34
TIE_RTOL = 1e-9


class BudgetExceeded(RuntimeError):
    """The requested construction exceeds the configured work budget."""


# ---------------------------------------------------------------------------
# circulant products


def _fft_error(w, x) -> float:
    L = len(w)
    return 8.0 * EPS * max(1.0, math.log2(L)) * float(np.linalg.norm(w)) * float(np.linalg.norm(x))


def _direct_error(w, x) -> float:
    L = len(w)
    return L * EPS * float(np.max(np.abs(w), initial=0.0)) * float(np.sum(np.abs(x)))


def _fft_length(L: int) -> int:
    """Power of two holding the linear convolution of two length-L vectors."""
    return 1 << max(0, 2 * L - 2).bit_length()


def _cyclic_from_hat(w_hat, x, L: int, n: int) -> np.ndarray:
    """Cyclic convolution via a zero-padded linear one; ``w_hat`` is ``rfft(w, n)``."""
    z = np.fft.irfft(w_hat * np.fft.rfft(x, n), n=n)
    c = z[:L].copy()
    c[: L - 1] += z[L : 2 * L - 1]
    return c


def circulant_apply(first_column, eta, method: str = "auto"):
    """``c_i = sum_n Omega[i, n] eta[n]`` with ``Omega[i, n] = w[(i - n) mod L]``.

    ``first_column`` is the vector w or a callable giving w[k].  Returns
    ``(c, err)`` where ``err`` bounds the absolute rounding error of every
    entry.  ``method="auto"`` uses the direct product below length
    ``DIRECT_LIMIT`` and a power-of-two FFT otherwise.
    """
    x = np.asarray(eta, dtype=np.float64)
    L = x.shape[0]
    if callable(first_column):
        w = np.array([first_column(k) for k in range(L)], dtype=np.float64)
    else:
        w = np.asarray(first_column, dtype=np.float64)
    if w.shape != (L,):
        raise ValueError(f"length mismatch: first column {w.shape}, vector {x.shape}")
    if method == "auto":
        method = "direct" if L < DIRECT_LIMIT else "fft"
    if method == "direct":
        return circulant_direct(w, x), _direct_error(w, x)
    if method == "fft":
        n = _fft_length(L)
        return _cyclic_from_hat(np.fft.rfft(w, n), x, L, n), _fft_error(w, x)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# state and results


@dataclass
class CBCState:
    """Search state after ``r`` components; ``r = d (j1 - 1) + d1`` once r >= 1."""

    b: int
    m: int
    d: int
    H1: np.ndarray
    H2: np.ndarray
    chosen: list = field(default_factory=list)
    B_trace: list = field(default_factory=list)
    blocks: list = field(default_factory=list)

    @property
    def r(self) -> int:
        return len(self.chosen)

    @property
    def j1(self) -> int:
        return (self.r - 1) // self.d + 1 if self.r else 0

    @property
    def d1(self) -> int:
        return (self.r - 1) % self.d + 1 if self.r else 0

    @property
    def eta1(self) -> np.ndarray:
        return 1.0 + self.H1

    @property
    def eta2(self) -> np.ndarray:
        return 1.0 + self.H2

    def push(self, q: int, chi_col: np.ndarray, gain: float | None, value: float) -> None:
        """Append component q with its chi column; ``gain`` is None for general weights."""
        self.H2 = self.H2 + chi_col * (1.0 + self.H2)
        self.chosen.append(int(q))
        self.B_trace.append(float(value))
        if self.r % self.d == 0:
            if gain is not None:
                self.H1 = self.H1 + (gain * self.H2) * (1.0 + self.H1)
            else:
                self.blocks.append(self.H2)
            self.H2 = np.zeros_like(self.H2)


@dataclass(frozen=True)
class ConstructionResult:
    lattice: PolyLattice
    s: int
    alpha: int
    d: int
    weights: Weights
    B_trace: tuple
    bound: dict | None = None
    bound_trace: tuple | None = None
    mode: str = "fast"
    fast_estimates: tuple | None = None

    @property
    def B_final(self) -> float:
        return self.B_trace[-1]

    @property
    def params(self) -> CriterionParams:
        return CriterionParams(self.lattice.b, self.alpha, self.d)

    def to_dict(self) -> dict:
        doc = {
            "b": self.lattice.b,
            "m": self.lattice.m,
            "s": self.s,
            "alpha": self.alpha,
            "d": self.d,
            "p": self.lattice.p.value,
            "q": [qj.value for qj in self.lattice.q],
            "weights": self.weights.descriptor(),
            "B_trace": list(self.B_trace),
            "B_final": self.B_final,
            "bound": self.bound,
            "mode": self.mode,
        }
        if self.bound_trace is not None:
            doc["bound_trace"] = list(self.bound_trace)
        if self.fast_estimates is not None:
            doc["fast_estimates"] = list(self.fast_estimates)
        return doc

    def to_json(self, **extra) -> str:
        doc = self.to_dict()
        doc.update(extra)
        return json.dumps(doc, indent=2)

    @classmethod
    def from_dict(cls, doc: dict) -> "ConstructionResult":
        b, m = int(doc["b"]), int(doc["m"])
        lat = PolyLattice.from_ints(b, m, int(doc["p"]), [int(v) for v in doc["q"]])
        wd = doc["weights"]
        if wd["kind"] == "product":
            weights = Weights("product", tuple(wd["gamma"]), label=wd.get("spec", ""))
        else:
            mapping = {frozenset(int(t) for t in k.split(",") if t): v for k, v in wd["gamma"].items()}
            weights = Weights("general", general=mapping, label=wd.get("spec", "general"))
        return cls(
            lattice=lat,
            s=int(doc["s"]),
            alpha=int(doc["alpha"]),
            d=int(doc["d"]),
            weights=weights,
            B_trace=tuple(doc["B_trace"]),
            bound=doc.get("bound"),
            bound_trace=tuple(doc["bound_trace"]) if doc.get("bound_trace") else None,
            mode=doc.get("mode", "fast"),
            fast_estimates=tuple(doc["fast_estimates"]) if doc.get("fast_estimates") else None,
        )

    @classmethod
    def from_json(cls, text: str) -> "ConstructionResult":
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# shared exact evaluator and tie rule


def _setup(b, m, s, alpha, d, weights, p):
    params = CriterionParams(b, alpha, d)
    if s < 1:
        raise ValueError("s must be >= 1")
    if m < 1:
        raise ValueError("m must be >= 1")
    if weights.is_product:
        if len(weights.product) < s:
            raise ValueError(f"weights cover {len(weights.product)} coordinates, s={s} needed")
        weights = weights.restrict(s)
    elif weights.s > s:
        raise ValueError("general weights mention coordinates beyond s")
    if p is None:
        p = galois.smallest_irreducible(b, m)
    elif not isinstance(p, GFPoly):
        p = galois.parse_poly(p, b)
    if p.base != b or p.degree != m:
        raise ValueError(f"modulus must be a degree-{m} polynomial over F_{b}")
    return params, weights, p


def _gains(weights: Weights, params: CriterionParams):
    if not weights.is_product:
        return None
    return [g * params.Dtilde for g in weights.product]


def _evaluate(state: CBCState, gain, weights, Dtilde, chi_rows: np.ndarray) -> list[float]:
    """Exact B for each candidate chi column (rows of ``chi_rows``)."""
    N = state.H1.shape[0]
    out = []
    if gain is not None:
        A = state.H2[None, :] + chi_rows * (1.0 + state.H2[None, :])
        E = product_terms(state.H1[None, :], A, gain)
        for row in E:
            out.append(math.fsum(row.tolist()) / N)
        return out
    for row in chi_rows:
        a = state.H2 + row * (1.0 + state.H2)
        out.append(math.fsum(general_terms(state.blocks + [a], weights, Dtilde).tolist()) / N)
    return out


def _rms_scale(state: CBCState, gain, chi_max: float) -> float:
    """Root-sum-square size of the per-point terms, the yardstick for rounding in a mean of them."""
    N = state.H1.shape[0]
    base = product_terms(state.H1, state.H2, gain)
    eta = (1.0 + state.H1) * (1.0 + state.H2)
    return math.sqrt(float(base @ base) + (gain * chi_max) ** 2 * float(eta @ eta)) / N


def _tie_tolerance(vmin: float) -> float:
    return TIE_RTOL * abs(vmin)


def _select(cands, values):
    """Smallest integer encoding among values within the tie tolerance of the minimum."""
    vals = np.asarray(values)
    vmin = float(vals.min())
    thr = vmin + _tie_tolerance(vmin)
    ok = np.flatnonzero(vals <= thr)
    best = min(ok, key=lambda i: cands[i])
    return int(cands[best]), float(vals[best])


# ---------------------------------------------------------------------------
# bounds


def _bound_mp(params, weights, m, j1, d1, lam: BoundParams):
    b = params.b
    with mpmath.workdps(50):
        L = mpmath.mpf(lam.lam)
        Gd = lam.G_mp(params.d)
        Gd1 = lam.G_mp(d1)
        if weights.is_product:
            g = [mpmath.mpf(v) for v in weights.product]
            prod = mpmath.mpf(1)
            for j in range(j1 - 1):
                prod *= 1 + (g[j] ** L if g[j] else 0) * Gd
            first = prod - 1
            gl = g[j1 - 1] ** L if g[j1 - 1] else mpmath.mpf(0)
            second = gl * prod
        else:
            first = mpmath.mpf(0)
            second = mpmath.mpf(0)
            for u, gv in weights.nonempty_items(j1):
                if gv == 0:
                    continue
                gl = mpmath.mpf(gv) ** L
                if max(u) < j1:
                    first += gl * Gd ** len(u)
                else:
                    second += gl * Gd ** (len(u) - 1)
        total = first + Gd1 * second
        if total == 0:
            return 0.0
        return float((total / (mpmath.mpf(b) ** m - 1)) ** (1 / L))


def _as_bound_params(lam, params) -> BoundParams:
    return lam if isinstance(lam, BoundParams) else BoundParams(float(lam), params)


def cbc_partial_bound(params: CriterionParams, weights: Weights, m: int, r: int, lam) -> float:
    """Upper bound on B after r CBC components (r = d (j1 - 1) + d1), at exponent lambda."""
    if r < 1:
        raise ValueError("r must be >= 1")
    lam = _as_bound_params(lam, params)
    j1 = (r - 1) // params.d + 1
    d1 = (r - 1) % params.d + 1
    if weights.is_product and len(weights.product) < j1:
        raise ValueError("not enough weights")
    return _bound_mp(params, weights, m, j1, d1, lam)


def cbc_error_bound(params: CriterionParams, weights: Weights, m: int, s: int, lam) -> float:
    """Bound on B for the full CBC vector: ``[(sum_u gamma_u^lam G_d^|u|) / (b^m - 1)]^(1/lam)``."""
    return cbc_partial_bound(params, weights, m, params.d * s, lam)


# ---------------------------------------------------------------------------
# constructions


def _finish(p, b, m, s, alpha, d, weights, params, state, lam, mode, estimates=None):
    lat = PolyLattice.from_ints(b, m, p.value, state.chosen)
    bound = None
    bound_trace = None
    if lam is not None:
        bp = _as_bound_params(lam, params)
        bound_trace = tuple(cbc_partial_bound(params, weights, m, r, bp) for r in range(1, d * s + 1))
        bound = {"lambda": bp.lam, "value": bound_trace[-1]}
    return ConstructionResult(
        lattice=lat,
        s=s,
        alpha=alpha,
        d=d,
        weights=weights,
        B_trace=tuple(state.B_trace),
        bound=bound,
        bound_trace=bound_trace,
        mode=mode,
        fast_estimates=None if estimates is None else tuple(estimates),
    )


def _candidate_chi(b, m, p, cands, table) -> np.ndarray:
    """Chi of every lattice point for each candidate generator; shape (len(cands), b^m)."""
    lat = PolyLattice.from_ints(b, m, p.value, cands)
    cols = lattice_columns(lat)
    Y = span_columns(cols, b, m)
    return table[leading_position(Y, b, m)]


def cbc_construct_naive(
    b: int,
    m: int,
    s: int,
    alpha: int,
    d: int,
    weights: Weights,
    p=None,
    lam=None,
    budget: int = DEFAULT_BUDGET,
) -> ConstructionResult:
    """Exhaustive CBC: every nonzero polynomial of degree < m is scored at every step."""
    params, weights, p = _setup(b, m, s, alpha, d, weights, p)
    N = b**m
    if d * s * N * N > budget:
        raise BudgetExceeded(f"naive search needs ~{d * s * N * N:.3g} operations, budget {budget:.3g}")
    table = chi_table(params, m)
    gains = _gains(weights, params)
    state = CBCState(b, m, d, np.zeros(N), np.zeros(N))
    cands_all = np.arange(1, N, dtype=np.int64)
    chunk = max(1, (1 << 21) // N)

    first = _candidate_chi(b, m, p, [1], table)[0]
    state.push(1, first, gains[0] if gains else None, _evaluate(state, gains[0] if gains else None, weights, params.Dtilde, first[None, :])[0])
    for r in range(2, d * s + 1):
        j = (r - 1) // d
        gain = gains[j] if gains else None
        vals = []
        for c0 in range(0, len(cands_all), chunk):
            rows = _candidate_chi(b, m, p, cands_all[c0 : c0 + chunk], table)
            vals.extend(_evaluate(state, gain, weights, params.Dtilde, rows))
        q, val = _select(cands_all, vals)
        state.push(q, _candidate_chi(b, m, p, [q], table)[0], gain, val)
    return _finish(p, b, m, s, alpha, d, weights, params, state, lam, "naive")


def _power_table(p: GFPoly, g: GFPoly, m: int):
    b = p.base
    if b == 2 and m <= 30:
        return gf2_power_table(p.value, g.value, m)
    L = b**m - 1
    pw = np.empty(L, dtype=np.int64)
    vals = np.empty(L, dtype=np.int64)
    logt = np.full(b**m, -1, dtype=np.int64)
    a = 1
    for e in range(L):
        pw[e] = a
        logt[a] = e
        vals[e] = galois.laurent_value(a, p.value, m, b)
        a = galois.mulmod(a, g.value, p.value, b)
    return pw, logt, vals


def cbc_construct_fast(
    b: int,
    m: int,
    s: int,
    alpha: int,
    d: int,
    weights: Weights,
    p=None,
    lam=None,
    budget: int = DEFAULT_BUDGET,
    check_state: bool = False,
) -> ConstructionResult:
    """CBC with candidates indexed by powers of a primitive element and scored by one cyclic convolution per step.

    Needs product weights and an irreducible modulus.  ``check_state``
    recomputes the accumulators from the chosen components at every block
    boundary and asserts that they agree exactly with the running state.
    """
    params, weights, p = _setup(b, m, s, alpha, d, weights, p)
    if not weights.is_product:
        raise ValueError("the fast search supports product weights only")
    if not galois.is_irreducible(p):
        raise ValueError("the fast search needs an irreducible modulus")
    N = b**m
    L = N - 1
    cost = d * s * N * max(1, m)
    if cost > budget:
        raise BudgetExceeded(f"fast search needs ~{cost:.3g} operations, budget {budget:.3g}")
    g = galois.primitive_element(p)
    pw, logt, vals = _power_table(p, g, m)
    table = chi_table(params, m)
    chi0 = float(table[0])
    chi_max = float(np.max(np.abs(table)))
    w = table[leading_position(vals, b, m)]
    use_fft = L >= DIRECT_LIMIT
    # Convolving mean-free vectors keeps the rounding proportional to their
    # small fluctuations; the means come back through exact sums.
    w_bar = math.fsum(w.tolist()) / L
    w_c = w - w_bar
    S_w = math.fsum(w_c.tolist())
    n_fft = _fft_length(L)
    w_hat = np.fft.rfft(w_c, n_fft) if use_fft else None
    w_norm = float(np.linalg.norm(w_c))
    gather = pw[(-np.arange(L)) % L]  # a_k = eta[g^(-k)]
    lognz = logt[1:]
    gains = _gains(weights, params)
    chunk = max(1, (1 << 21) // N)

    def chi_rows(exps):
        exps = np.asarray(exps, dtype=np.int64)
        rows = np.empty((len(exps), N))
        rows[:, 0] = chi0
        rows[:, 1:] = w[(lognz[None, :] + exps[:, None]) % L]
        return rows

    state = CBCState(b, m, d, np.zeros(N), np.zeros(N))
    e1 = int(logt[1])  # exponent of the polynomial 1, i.e. 0
    first = chi_rows([e1])
    state.push(1, first[0], gains[0], _evaluate(state, gains[0], weights, params.Dtilde, first)[0])
    estimates = [state.B_trace[0]]
    for r in range(2, d * s + 1):
        gain = gains[(r - 1) // d]
        eta = (1.0 + state.H1) * (1.0 + state.H2)
        base = float(np.sum(product_terms(state.H1, state.H2, gain)))
        a = eta[gather]
        # only the candidate-dependent part needs care: these sums shift every estimate equally
        a_bar = float(np.sum(a)) / L
        a_c = a - a_bar
        S_a = float(np.sum(a_c))
        if use_fft:
            cc = _cyclic_from_hat(w_hat, a_c, L, n_fft)
            # typical-case FFT rounding, about 5x above the largest error observed in calibration
            conv_err = 16.0 * EPS * math.sqrt(math.log2(n_fft)) * w_norm * float(np.linalg.norm(a_c)) / math.sqrt(L)
        else:
            cc = circulant_direct(w_c, a_c)
            conv_err = _direct_error(w_c, a_c)
        const = math.fsum([base, gain * eta[0] * chi0, gain * w_bar * S_a, gain * a_bar * S_w, gain * L * w_bar * a_bar])
        est = (const + gain * cc) / N
        # Errors shared by every candidate shift all estimates alike and do
        # not affect the ranking; delta bounds only the part that varies.
        # Near the minimum gain * cc is close to -const, so |const| sizes the
        # rounding of the final sum.  The spread check below catches misses.
        delta = abs(gain) * conv_err / N + 2.0 * EPS * abs(const) / N + 0.5 * EPS * _rms_scale(state, gain, chi_max)
        emin = float(est.min())
        scored = {}

        def score(idx):
            new = np.array([i for i in idx if int(i) not in scored], dtype=np.int64)
            for i0 in range(0, len(new), chunk):
                part = new[i0 : i0 + chunk]
                for i, v in zip(part, _evaluate(state, gain, weights, params.Dtilde, chi_rows(part))):
                    scored[int(i)] = v

        def spread():
            err = [v - est[i] for i, v in scored.items()]
            return min(err), max(err)

        while True:
            # the true minimiser is among these, so vmin below is exact
            score(np.flatnonzero(est <= emin + 2.0 * delta))
            lo, hi = spread()
            if hi - lo > delta:
                delta = 2.0 * (hi - lo)  # the estimate was optimistic: widen and rescore
                continue
            adj = est + 0.5 * (lo + hi)
            vmin = min(scored.values())
            thr = vmin + _tie_tolerance(vmin)
            # Walk possible tie members by encoding; only those whose membership
            # the estimate cannot settle, up to the first sure member, are scored.
            maybe = np.flatnonzero(adj - delta <= thr)
            sure = adj[maybe] + delta <= thr
            known = np.fromiter(scored, dtype=np.int64, count=len(scored))
            kval = np.array([scored[int(i)] for i in known])
            sure[np.isin(maybe, known[kval <= thr])] = True
            sure[np.isin(maybe, known[kval > thr])] = False
            enc = pw[maybe]
            cut = enc[sure].min() if sure.any() else enc.max()
            walk = maybe[enc <= cut]
            score(walk)
            lo, hi = spread()
            if hi - lo > delta:
                delta = 2.0 * (hi - lo)
                continue
            members = [int(i) for i in walk if scored[int(i)] <= thr]
            if not members:  # a sure member turned out not to be one: the model failed
                delta *= 4.0
                continue
            break
        i_best = min(members, key=lambda i: pw[i])
        q, val = int(pw[i_best]), scored[i_best]
        i_sel = int(logt[q])
        estimates.append(float(est[i_sel]))
        state.push(q, chi_rows([i_sel])[0], gain, val)
        if check_state and state.r % d == 0:
            _check_state(state, b, m, p, params, gains)
    return _finish(p, b, m, s, alpha, d, weights, params, state, lam, "fast", estimates)


def _check_state(state, b, m, p, params, gains):
    lat = PolyLattice.from_ints(b, m, p.value, state.chosen)
    chi_cols = chi_table(params, m)[leading_position(generate_points(lat).digits, b, m)]
    H1, H2 = product_state(chi_cols, params.d, gains)
    if not (np.array_equal(H1, state.H1) and np.array_equal(H2, state.H2)):
        raise AssertionError("running CBC state diverged from recomputation")
