"""Digit interlacing of points and integers, and the Dick weight.

Interlacing d coordinates with m digits each writes digit a of input r to
position ``r + (a-1) d`` of the output, giving a single coordinate with
``d m`` digits.  The integer version does the same with the base-b digits
of frequencies, least significant first.
"""

from __future__ import annotations

import numpy as np

from .pointset import PointSet, _INT64_SAFE

__all__ = [
    "interlace_point",
    "interlace_values",
    "interlace_net",
    "interlace_int",
    "deinterlace_int",
    "mu_weight",
]


def interlace_point(d: int, ys, m: int, b: int = 2) -> int:
    """Interlace d fixed-point integers of m digits into one of d*m digits."""
    ys = [int(v) for v in ys]
    if len(ys) != d:
        raise ValueError(f"expected {d} coordinates, got {len(ys)}")
    if any(v < 0 or v >= b**m for v in ys):
        raise ValueError(f"coordinates must be {m}-digit fixed-point integers")
    return int(interlace_values(np.array([ys], dtype=object), m, b)[0])


def interlace_values(block, m: int, b: int = 2) -> np.ndarray:
    """Row-wise interlacing of an ``(N, d)`` array of m-digit integers."""
    block = np.asarray(block)
    N, d = block.shape
    big = b ** (d * m) > _INT64_SAFE
    src = block.astype(object) if big else block.astype(np.int64)
    out = np.zeros(N, dtype=object if big else np.int64)
    if b == 2 and not big:
        for a in range(1, m + 1):
            for r in range(1, d + 1):
                bit = (src[:, r - 1] >> (m - a)) & 1
                out |= bit << (d * m - (r + (a - 1) * d))
        return out
    for a in range(1, m + 1):
        for r in range(1, d + 1):
            dig = (src[:, r - 1] // b ** (m - a)) % b
            out = out + dig * b ** (d * m - (r + (a - 1) * d))
    return out


def interlace_net(d: int, ys: PointSet) -> PointSet:
    """Interlace consecutive blocks of d coordinates of ``ys``; precision becomes d*m."""
    if d < 1:
        raise ValueError("interlacing factor must be >= 1")
    if ys.dim % d:
        raise ValueError(f"dimension {ys.dim} is not divisible by d={d}")
    if d == 1:
        return ys
    s = ys.dim // d
    cols = [interlace_values(ys.digits[:, d * j : d * (j + 1)], ys.m, ys.b) for j in range(s)]
    return PointSet(ys.b, d * ys.m, np.stack(cols, axis=1))


def interlace_int(d: int, ls, b: int = 2) -> int:
    """``E_d(l_1..l_d) = sum_a sum_j kappa_{j,a} b^(a d + j - 1)``."""
    ls = [int(v) for v in ls]
    if len(ls) != d:
        raise ValueError(f"expected {d} integers, got {len(ls)}")
    if any(v < 0 for v in ls):
        raise ValueError("integers must be non-negative")
    out = 0
    pos = 1
    while any(ls):
        for j in range(d):
            ls[j], dig = divmod(ls[j], b)
            out += dig * pos
            pos *= b
    return out


def deinterlace_int(d: int, k: int, b: int = 2) -> tuple[int, ...]:
    """Inverse of :func:`interlace_int`."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = [0] * d
    weight = 1
    while k:
        for j in range(d):
            k, dig = divmod(k, b)
            out[j] += dig * weight
        weight *= b
    return tuple(out)


def mu_weight(alpha: int, k: int, b: int = 2) -> int:
    """Sum of the positions of the ``alpha`` most significant nonzero base-b digits of k."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return 0
    digits = []
    while k:
        k, r = divmod(k, b)
        digits.append(r)
    total = 0
    taken = 0
    for pos in range(len(digits), 0, -1):
        if digits[pos - 1]:
            total += pos
            taken += 1
            if taken == alpha:
                break
    return total
