"""Pure numpy/Python implementations of the hot kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"


def gf2_power_table(p: int, g: int, m: int):
    """Powers of ``g`` modulo ``p`` over F_2, their discrete logs, and their Laurent values.

    Returns ``(pw, logt, vals)`` where ``pw[e] = g^e mod p`` for
    ``0 <= e < 2^m - 1``, ``logt[pw[e]] = e`` (``logt[0] = -1``) and
    ``vals[e]`` is the m-digit fixed-point integer of ``v_m(pw[e] / p)``.
    """
    L = (1 << m) - 1
    top = 1 << m
    pw = np.empty(L, dtype=np.int64)
    vals = np.empty(L, dtype=np.int64)
    logt = np.full(1 << m, -1, dtype=np.int64)
    a = 1
    for e in range(L):
        pw[e] = a
        logt[a] = e
        # quotient of a * x^m by p
        u = a << m
        q = 0
        for i in range(2 * m - 1, m - 1, -1):
            if (u >> i) & 1:
                q |= 1 << (i - m)
                u ^= p << (i - m)
        vals[e] = q
        # a <- a * g mod p
        r = 0
        x = a
        gg = g
        while gg:
            if gg & 1:
                r ^= x
            gg >>= 1
            x <<= 1
            if x & top:
                x ^= p
        a = r
    return pw, logt, vals


def gf2_span(cols):
    """All F_2-combinations of generating columns.

    ``cols`` has shape ``(C, m)``; the result ``out[c, n]`` is the XOR of
    ``cols[c, k]`` over the set bits ``k`` of ``n``, for ``0 <= n < 2^m``.
    """
    cols = np.ascontiguousarray(cols, dtype=np.int64)
    C, m = cols.shape
    out = np.zeros((C, 1 << m), dtype=np.int64)
    for k in range(m):
        h = 1 << k
        out[:, h : 2 * h] = out[:, :h] ^ cols[:, k : k + 1]
    return out


def circulant_direct(w, x):
    """c_i = sum_n w[(i - n) mod L] x[n], by direct O(L^2) summation."""
    w = np.asarray(w, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    L = w.shape[0]
    if x.shape[0] != L:
        raise ValueError("length mismatch")
    out = np.empty(L, dtype=np.float64)
    n = np.arange(L)
    step = max(1, (1 << 20) // max(L, 1))
    for i0 in range(0, L, step):
        i = np.arange(i0, min(L, i0 + step))
        out[i0 : i0 + len(i)] = w[(i[:, None] - n[None, :]) % L] @ x
    return out


def kernel_pair_sum(x, gamma, feat, tail_coeffs):
    """Sum over ordered pairs of prod_j (1 + gamma_j K(x_nj, x_n'j)) - 1.

    ``feat[n, j, r]`` holds ``B_{r+1}(x_nj) / (r+1)!`` and ``tail_coeffs``
    the monomial coefficients (ascending) of the signed
    ``B_{2 alpha}(t) / (2 alpha)!`` term evaluated at ``t = |x - y|``.
    The product-minus-one is accumulated with ``E <- E + F (1 + E)`` so that
    small values keep their relative accuracy.
    """
    x = np.asarray(x, dtype=np.float64)
    N, s = x.shape
    total = 0.0
    comp = 0.0
    rows = max(1, (1 << 18) // max(N, 1))
    for i0 in range(0, N, rows):
        i1 = min(N, i0 + rows)
        E = np.zeros((i1 - i0, N))
        for j in range(s):
            xj = x[:, j]
            t = np.abs(xj[i0:i1, None] - xj[None, :])
            K = np.polynomial.polynomial.polyval(t, tail_coeffs)
            K += feat[i0:i1, j, :] @ feat[:, j, :].T
            F = gamma[j] * K
            E += F * (1.0 + E)
        # Kahan step across row blocks
        y = float(np.sum(E)) - comp
        tmp = total + y
        comp = (tmp - total) - y
        total = tmp
    return total
