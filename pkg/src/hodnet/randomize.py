"""Random digital shifts and the shifted-QMC root-mean-square-error experiment."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .pointset import PointSet, _INT64_SAFE

__all__ = [
    "DigitalShift",
    "RmseReport",
    "PRNG_NAME",
    "default_precision",
    "digit_add",
    "digit_sub",
    "apply_shift",
    "random_shift",
    "qmc_estimate",
    "rmse_experiment",
    "test_function",
]

PRNG_NAME = "numpy.Philox(SeedSequence([seed, shift_index]))"


def default_precision(b: int) -> int:
    """Largest P with b^P exactly representable in a double: 53 for b=2, floor(52/log2 b) otherwise."""
    if b == 2:
        return 53
    return int(52 // math.log2(b))


def _digitwise(u, v, b: int, P: int, sign: int):
    u = np.asarray(u)
    v = np.asarray(v)
    if b == 2:
        return u ^ v
    big = u.dtype == object or v.dtype == object or b**P > _INT64_SAFE
    if big:
        u = u.astype(object)
        v = v.astype(object)
    out = np.zeros(np.broadcast(u, v).shape, dtype=object if big else np.int64)
    place = 1
    for _ in range(P):
        out = out + ((u // place + sign * (v // place)) % b) * place
        place *= b
    return out


def digit_add(u, v, b: int, P: int):
    """Digitwise sum mod b of P-digit fixed-point integers (XOR when b = 2)."""
    return _digitwise(u, v, b, P, 1)


def digit_sub(u, v, b: int, P: int):
    """Digitwise difference mod b of P-digit fixed-point integers."""
    return _digitwise(u, v, b, P, -1)


@dataclass(frozen=True, eq=False)
class DigitalShift:
    """Shift vector sigma stored as an ``(s, precision)`` digit matrix, most significant digit first."""

    b: int
    s: int
    precision: int
    digits: np.ndarray = field(repr=False)
    seed: int | None = None
    index: int | None = None
    generator: str = PRNG_NAME

    def __post_init__(self):
        dig = np.asarray(self.digits, dtype=np.int64).reshape(self.s, self.precision)
        if dig.size and (dig.min() < 0 or dig.max() >= self.b):
            raise ValueError("shift digits must lie in [0, b)")
        dig.setflags(write=False)
        object.__setattr__(self, "digits", dig)

    def values(self) -> np.ndarray:
        """The shift as P-digit fixed-point integers, one per coordinate."""
        big = self.b**self.precision > _INT64_SAFE
        out = np.zeros(self.s, dtype=object if big else np.int64)
        for a in range(self.precision):
            col = self.digits[:, a].astype(object) if big else self.digits[:, a]
            out = out * self.b + col
        return out

    @classmethod
    def zero(cls, b: int, s: int, precision: int) -> "DigitalShift":
        return cls(b, s, precision, np.zeros((s, precision), dtype=np.int64))


def random_shift(b: int, s: int, precision: int | None = None, seed: int = 0, index: int = 0) -> DigitalShift:
    """Uniform i.i.d. digits from a Philox stream keyed by ``(seed, index)``."""
    P = default_precision(b) if precision is None else int(precision)
    if P < 0:
        raise ValueError("precision must be non-negative")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))
    dig = rng.integers(0, b, size=(s, P), dtype=np.int64)
    return DigitalShift(b, s, P, dig, seed=seed, index=index)


def apply_shift(points: PointSet, shift: DigitalShift) -> PointSet:
    """``z_n = x_n (+) sigma``; the result carries the shift's precision."""
    if shift.b != points.b:
        raise ValueError("shift base differs from point base")
    if shift.s != points.dim:
        raise ValueError(f"shift dimension {shift.s} differs from point dimension {points.dim}")
    P, m, b = shift.precision, points.m, points.b
    if P < m:
        raise ValueError(f"shift precision {P} is below point precision {m}")
    big = b**P > _INT64_SAFE
    x = points.digits.astype(object) if big else points.digits.astype(np.int64)
    x = x * b ** (P - m)
    sig = shift.values()
    return PointSet(b, P, digit_add(x, sig[None, :], b, P))


def qmc_estimate(points: PointSet, f) -> float:
    """Equal-weight average of ``f`` over the points; ``f`` maps an (N, s) array to N values."""
    vals = np.asarray(f(points.as_float()), dtype=np.float64).reshape(-1)
    if vals.shape[0] != points.n_points:
        raise ValueError("integrand must return one value per point")
    return math.fsum(vals.tolist()) / points.n_points


@dataclass(frozen=True)
class RmseReport:
    r: int
    Q_bar: float
    rmse: float
    per_shift: tuple[float, ...]
    seed: int
    precision: int
    generator: str = PRNG_NAME

    def to_json(self, **extra) -> str:
        doc = {
            "r": self.r,
            "Q_bar": self.Q_bar,
            "rmse": self.rmse,
            "per_shift": list(self.per_shift),
            "seed": self.seed,
            "shift_precision": self.precision,
            "generator": self.generator,
        }
        doc.update(extra)
        return json.dumps(doc, indent=2)

    CSV_HEADER = "m,s,alpha,d,weights,r,Q_bar,rmse,seed"

    def csv_row(self, m, s, alpha, d, weights: str) -> str:
        return f"{m},{s},{alpha},{d},{weights},{self.r},{self.Q_bar:.17g},{self.rmse:.17g},{self.seed}"


def rmse_experiment(points: PointSet, f, r: int = 50, seed: int = 0, precision: int | None = None) -> RmseReport:
    """r independent random shifts, the mean estimate and ``sqrt(sum (Q_l - Qbar)^2 / (r (r-1)))``."""
    if r < 2:
        raise ValueError("need at least two shifts")
    P = max(default_precision(points.b), points.m) if precision is None else int(precision)
    qs = []
    for i in range(r):
        sh = random_shift(points.b, points.dim, P, seed, index=i)
        qs.append(qmc_estimate(apply_shift(points, sh), f))
    q_bar = math.fsum(qs) / r
    var = math.fsum((q - q_bar) ** 2 for q in qs) / (r * (r - 1))
    return RmseReport(r, q_bar, math.sqrt(var), tuple(qs), seed, P)


def test_function(s: int):
    """``f(x) = 1 / (1 + sum_j x_j / j^2)`` on ``[0,1)^s``; accepts an (N, s) array or one point."""
    if s < 1:
        raise ValueError("s must be >= 1")
    coef = 1.0 / np.arange(1, s + 1, dtype=np.float64) ** 2

    def f(x):
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != s:
            raise ValueError(f"expected points of dimension {s}")
        return 1.0 / (1.0 + x @ coef)

    f.__name__ = f"reciprocal_linear_{s}d"
    return f


test_function.__test__ = False  # keep pytest from collecting it
