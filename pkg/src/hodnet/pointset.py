"""Polynomial lattice point sets, dual-net membership, Walsh characters and
external digital nets.

Points are stored as exact fixed-point integers: an entry ``y`` of a
:class:`PointSet` with precision ``m`` stands for the value ``y * b**-m``.
"""

from __future__ import annotations

import cmath
import math
import os
import struct
from dataclasses import dataclass, field
from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from importlib import resources

import numpy as np

from . import galois
from ._kernels import gf2_span
from .galois import GFPoly

__all__ = [
    "PolyLattice",
    "PointSet",
    "MalformedInputError",
    "generate_points",
    "dual_contains",
    "walsh_exponent",
    "walsh_char",
    "character_sum",
    "load_external_net",
    "sobol_points",
    "lattice_columns",
    "digits_of",
    "from_digits",
    "save_csv",
    "load_csv",
    "save_bin",
    "load_bin",
    "DEFAULT_DIRECTION_FILE",
]

DEFAULT_DIRECTION_FILE = "joe_kuo_d1111.txt"
_INT64_SAFE = 2**62


class MalformedInputError(ValueError):
    """An input file does not follow its documented format."""


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class PolyLattice:
    """Polynomial lattice rule: modulus ``p`` of degree ``m`` and generating vector ``q``."""

    b: int
    m: int
    p: GFPoly
    q: tuple[GFPoly, ...]

    def __post_init__(self):
        q = tuple(self.q)
        object.__setattr__(self, "q", q)
        if self.p.base != self.b:
            raise ValueError("modulus base differs from lattice base")
        if self.p.degree != self.m:
            raise ValueError(f"modulus must have degree m={self.m}, got {self.p.degree}")
        for j, qj in enumerate(q):
            if qj.base != self.b:
                raise ValueError(f"q[{j}] has base {qj.base}, expected {self.b}")
            if qj.is_zero() or qj.degree >= self.m:
                raise ValueError(f"q[{j}] must be nonzero with degree < m")

    @property
    def dim(self) -> int:
        return len(self.q)

    @classmethod
    def from_ints(cls, b: int, m: int, p: int, q) -> "PolyLattice":
        return cls(b, m, GFPoly.from_int(b, p), tuple(GFPoly.from_int(b, int(v)) for v in q))


@dataclass(frozen=True, eq=False)
class PointSet:
    """``n_points`` points in ``[0,1)^dim`` as fixed-point integers with ``m`` base-b digits."""

    b: int
    m: int
    digits: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = self.digits
        if not isinstance(arr, np.ndarray):
            arr = np.asarray(arr, dtype=object if self.b**self.m > _INT64_SAFE else np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2:
            raise ValueError("digits must be a 2-d array (points x coordinates)")
        if arr.size and (arr.min() < 0 or arr.max() >= self.b**self.m):
            raise ValueError("entries must lie in [0, b^m)")
        arr.setflags(write=False)
        object.__setattr__(self, "digits", arr)

    @property
    def n_points(self) -> int:
        return self.digits.shape[0]

    @property
    def dim(self) -> int:
        return self.digits.shape[1]

    def as_float(self) -> np.ndarray:
        """Point coordinates as doubles (correctly rounded for precision up to 53 bits)."""
        if self.digits.dtype == object:
            scale = self.b**self.m
            return np.vectorize(lambda v: float(v / scale), otypes=[float])(self.digits)
        if self.b == 2:
            return np.ldexp(self.digits.astype(np.float64), -self.m)
        return self.digits.astype(np.float64) / float(self.b**self.m)

    def column(self, j: int) -> "PointSet":
        return PointSet(self.b, self.m, self.digits[:, j : j + 1].copy())

    def columns(self, cols) -> "PointSet":
        return PointSet(self.b, self.m, self.digits[:, list(cols)].copy())

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return (
            self.b == other.b
            and self.m == other.m
            and self.digits.shape == other.digits.shape
            and bool(np.all(self.digits == other.digits))
        )

    def __hash__(self):
        return hash((self.b, self.m, self.digits.shape))


# ---------------------------------------------------------------------------
# digit helpers


def digits_of(values, b: int, m: int) -> np.ndarray:
    """Base-b digits of fixed-point integers, most significant first; shape ``(..., m)``."""
    v = np.asarray(values)
    out = np.empty(v.shape + (m,), dtype=np.int64)
    for a in range(m):
        out[..., a] = (v // b ** (m - 1 - a)) % b
    return out


def from_digits(dig, b: int) -> np.ndarray:
    """Inverse of :func:`digits_of` along the last axis."""
    dig = np.asarray(dig)
    m = dig.shape[-1]
    big = b**m > _INT64_SAFE
    acc = np.zeros(dig.shape[:-1], dtype=object if big else np.int64)
    for a in range(m):
        col = dig[..., a].astype(object) if big else dig[..., a]
        acc = acc * b + col
    return acc


def lattice_columns(lat: PolyLattice) -> np.ndarray:
    """Generating columns ``v_m(x^k q_j / p)`` as m-digit integers; shape ``(dim, m)``."""
    b, m, p = lat.b, lat.m, lat.p.value
    cols = np.empty((lat.dim, m), dtype=np.int64)
    for j, qj in enumerate(lat.q):
        r = galois.mod(qj.value, p, b)
        for k in range(m):
            cols[j, k] = galois.laurent_value(r, p, m, b)
            r = galois.mulmod(r, b, p, b)  # multiply by x
    return cols


def span_columns(cols: np.ndarray, b: int, m: int) -> np.ndarray:
    """All F_b-combinations ``sum_k n_k col_k`` for n = 0..b^m-1; shape ``(C, b^m)``.

    Row index n is the integer whose base-b digits n_0, n_1, ... select the
    columns, so the result is the image of n(x) under the generating map.
    """
    cols = np.asarray(cols, dtype=np.int64)
    if b == 2:
        return gf2_span(cols)
    C, ncol = cols.shape
    cd = digits_of(cols, b, m)  # (C, ncol, m)
    out = np.zeros((C, b**ncol, m), dtype=np.int64)
    size = 1
    for k in range(ncol):
        block = out[:, :size, :]
        for t in range(1, b):
            out[:, t * size : (t + 1) * size, :] = (block + t * cd[:, k : k + 1, :]) % b
        size *= b
    return from_digits(out, b)


def generate_points(lat: PolyLattice) -> PointSet:
    """The b^m points ``y_n = v_m(n(x) q(x) / p(x))``; row n is the integer encoding of n(x)."""
    cols = lattice_columns(lat)
    pts = span_columns(cols, lat.b, lat.m)
    return PointSet(lat.b, lat.m, np.ascontiguousarray(pts.T))


# ---------------------------------------------------------------------------
# dual net and Walsh characters


def dual_contains(lat: PolyLattice, k) -> bool:
    """Whether ``sum_j tr_m(k_j) q_j = 0 (mod p)``, with tr_m dropping digits at degree >= m."""
    k = list(k)
    if len(k) != lat.dim:
        raise ValueError(f"expected {lat.dim} components, got {len(k)}")
    b, p = lat.b, lat.p.value
    bm = b**lat.m
    acc = 0
    for kj, qj in zip(k, lat.q):
        if kj < 0:
            raise ValueError("frequencies must be non-negative")
        acc = galois.add(acc, galois.mulmod(int(kj) % bm, qj.value, p, b), b)
    return galois.mod(acc, p, b) == 0


def walsh_exponent(b: int, k, y, m: int):
    """Exponent e (mod b) with ``wal_k(y) = omega_b^e``; vectorized over ``y``.

    ``y`` holds m-digit fixed-point integers; digits of ``k`` beyond
    position m meet zero digits of ``y`` and do not contribute.
    """
    y = np.asarray(y)
    e = np.zeros(y.shape, dtype=np.int64)
    k = int(k)
    i = 0
    while k and i < m:
        kap = k % b
        if kap:
            xi = (y // b ** (m - 1 - i)) % b
            e = e + kap * xi.astype(np.int64)
        k //= b
        i += 1
    return e % b


def walsh_char(b: int, k: int, y: int, m: int):
    """``wal_k(y * b^-m)``: ±1.0 for b=2, a complex root of unity otherwise."""
    e = int(walsh_exponent(b, k, y, m))
    if b == 2:
        return -1.0 if e else 1.0
    return cmath.exp(2j * math.pi * e / b)


def character_sum(points: PointSet, k) -> float:
    """``(1/N) sum_n wal_k(x_n)``, real part; 0 or 1 on a digital net."""
    k = list(k)
    if len(k) != points.dim:
        raise ValueError("frequency vector length differs from point dimension")
    b = points.b
    e = np.zeros(points.n_points, dtype=np.int64)
    for j, kj in enumerate(k):
        e = e + walsh_exponent(b, kj, points.digits[:, j], points.m)
    counts = np.bincount(e % b, minlength=b)
    total = math.fsum(c * math.cos(2 * math.pi * t / b) for t, c in enumerate(counts))
    return total / points.n_points


# ---------------------------------------------------------------------------
# external digital nets (base 2)


def _read_direction_rows(path):
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            tok = line.split()
            if not tok or tok[0].startswith("#"):
                continue
            if not tok[0].lstrip("-").isdigit():
                if lineno == 1:
                    continue  # column header
                raise MalformedInputError(f"{path}:{lineno}: non-numeric entry")
            try:
                vals = [int(t) for t in tok]
            except ValueError as exc:
                raise MalformedInputError(f"{path}:{lineno}: {exc}") from None
            if len(vals) < 3:
                raise MalformedInputError(f"{path}:{lineno}: expected 'd s a m_1 .. m_s'")
            d, s, a = vals[:3]
            ms = vals[3:]
            if s < 1 or len(ms) != s or a < 0 or a >= 2 ** max(s - 1, 0):
                raise MalformedInputError(f"{path}:{lineno}: inconsistent degree/coefficients")
            for i, mi in enumerate(ms, 1):
                if mi % 2 == 0 or mi >= 2**i or mi < 1:
                    raise MalformedInputError(f"{path}:{lineno}: m_{i}={mi} must be odd and < 2^{i}")
            rows.append((d, s, a, ms))
    return rows


def _sobol_columns(s: int, a: int, ms, m: int) -> list[int]:
    """Direction numbers v_1..v_m of one Sobol' coordinate as m-bit integers."""
    mm = list(ms)
    for k in range(s, m):
        new = mm[k - s] ^ (mm[k - s] << s)
        for i in range(1, s):
            if (a >> (s - 1 - i)) & 1:
                new ^= mm[k - i] << i
        mm.append(new)
    return [mm[k] << (m - 1 - k) for k in range(m)]


def _read_genmat(path):
    with open(path) as fh:
        tokens = fh.read().split()
    if len(tokens) < 4 or tokens[0] != "genmat":
        raise MalformedInputError(f"{path}: expected header 'genmat <dim> <ncols> <precision>'")
    try:
        dim, ncols, prec = (int(t) for t in tokens[1:4])
        vals = [int(t) for t in tokens[4:]]
    except ValueError as exc:
        raise MalformedInputError(f"{path}: {exc}") from None
    if dim < 1 or ncols < 0 or prec < 0 or len(vals) != dim * ncols:
        raise MalformedInputError(f"{path}: expected {dim}*{ncols} column entries, found {len(vals)}")
    if any(v < 0 or v >= 2**prec for v in vals):
        raise MalformedInputError(f"{path}: column entries must be < 2^precision")
    return dim, ncols, prec, [vals[j * ncols : (j + 1) * ncols] for j in range(dim)]


def _bundled(name):
    return resources.files("hodnet").joinpath("data", name)


def load_external_net(file, dim: int, m: int) -> PointSet:
    """First 2^m points of a base-2 digital net described by a file.

    Two layouts are understood.  Joe–Kuo direction numbers: rows
    ``d s a m_1 ... m_s`` for dimensions 2, 3, ...; dimension 1 is the van
    der Corput sequence.  Generating matrices: a header line
    ``genmat <dim> <ncols> <precision>`` followed by ``dim * ncols``
    integers, the columns of each matrix with the top digit as the most
    significant bit of a ``precision``-bit integer.  Points are produced in
    natural (non-Gray) order: point n combines the columns selected by the
    bits of n.
    """
    if dim < 1 or m < 0:
        raise ValueError("need dim >= 1 and m >= 0")
    path = os.fspath(file)
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path) as fh:
        first = fh.readline().split()
    if first and first[0] == "genmat":
        fdim, ncols, prec, mats = _read_genmat(path)
        if dim > fdim:
            raise ValueError(f"file describes {fdim} dimensions, {dim} requested")
        if m > ncols:
            raise ValueError(f"file has {ncols} columns, {m} requested")
        cols = np.array([row[:m] for row in mats[:dim]], dtype=np.int64).reshape(dim, m)
        return PointSet(2, prec, np.ascontiguousarray(gf2_span(cols).T))
    rows = _read_direction_rows(path)
    if dim - 1 > len(rows):
        raise ValueError(f"file describes {len(rows) + 1} dimensions, {dim} requested")
    cols = [[1 << (m - 1 - k) for k in range(m)]]
    for d_, s, a, ms in rows[: dim - 1]:
        cols.append(_sobol_columns(s, a, ms, m))
    arr = np.array(cols, dtype=np.int64).reshape(dim, m)
    return PointSet(2, m, np.ascontiguousarray(gf2_span(arr).T))


def sobol_points(dim: int, m: int) -> PointSet:
    """First 2^m Sobol' points from the bundled Joe–Kuo table (up to 1111 dimensions)."""
    with resources.as_file(_bundled(DEFAULT_DIRECTION_FILE)) as path:
        return load_external_net(path, dim, m)


# ---------------------------------------------------------------------------
# point files


def _csv_places(b: int, m: int) -> int:
    return math.ceil(m * math.log10(b)) + 2 if m else 2


def save_csv(points: PointSet, path, comments=()) -> None:
    """Decimal coordinates with ``ceil(m log10 b) + 2`` places under a ``# b= m= dim= n=`` header.

    Each entry of ``comments`` becomes an extra ``#`` line after the header.
    """
    places = _csv_places(points.b, points.m)
    scale = Decimal(points.b) ** points.m
    quant = Decimal(1).scaleb(-places)
    with localcontext() as ctx:
        ctx.prec = places + 40
        with open(path, "w") as fh:
            fh.write(f"# b={points.b} m={points.m} dim={points.dim} n={points.n_points}\n")
            for c in comments:
                fh.write("# " + str(c).replace("\n", " ") + "\n")
            for row in points.digits:
                fh.write(",".join(str((Decimal(int(v)) / scale).quantize(quant)) for v in row))
                fh.write("\n")


def _parse_header(line: str, path) -> dict:
    if not line.startswith("#"):
        raise MalformedInputError(f"{path}: missing '# b= m= dim= n=' header")
    out = {}
    for tok in line[1:].split():
        key, _, val = tok.partition("=")
        try:
            out[key] = int(val)
        except ValueError:
            raise MalformedInputError(f"{path}: bad header field {tok!r}") from None
    if not {"b", "m", "dim", "n"} <= out.keys():
        raise MalformedInputError(f"{path}: header needs b, m, dim and n")
    return out


def load_csv(path) -> PointSet:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise MalformedInputError(f"{path}: empty file")
    h = _parse_header(lines[0], path)
    b, m, dim, n = h["b"], h["m"], h["dim"], h["n"]
    body = [ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("#")]
    if len(body) != n:
        raise MalformedInputError(f"{path}: header announces {n} rows, found {len(body)}")
    scale = Decimal(b) ** m
    big = b**m > _INT64_SAFE
    out = np.zeros((n, dim), dtype=object if big else np.int64)
    with localcontext() as ctx:
        ctx.prec = _csv_places(b, m) + 40
        for i, ln in enumerate(body):
            parts = ln.split(",")
            if len(parts) != dim:
                raise MalformedInputError(f"{path}: row {i + 1} has {len(parts)} fields, expected {dim}")
            for j, t in enumerate(parts):
                try:
                    v = int((Decimal(t.strip()) * scale).to_integral_value(ROUND_HALF_EVEN))
                except ArithmeticError:
                    raise MalformedInputError(f"{path}: row {i + 1}: not a number: {t!r}") from None
                if not 0 <= v < b**m:
                    raise MalformedInputError(f"{path}: row {i + 1}: value outside [0,1)")
                out[i, j] = v
    return PointSet(b, m, out)


_BIN_HEADER = struct.Struct("<4Q")


def save_bin(points: PointSet, path) -> None:
    """Header of four little-endian uint64 (b, m, dim, n_points), then row-major uint64 entries."""
    if points.b**points.m > 2**64:
        raise ValueError("binary format holds at most 64-bit fixed-point entries")
    with open(path, "wb") as fh:
        fh.write(_BIN_HEADER.pack(points.b, points.m, points.dim, points.n_points))
        fh.write(np.ascontiguousarray(points.digits, dtype="<u8").tobytes())


def load_bin(path) -> PointSet:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _BIN_HEADER.size:
        raise MalformedInputError(f"{path}: truncated header")
    b, m, dim, n = _BIN_HEADER.unpack_from(raw)
    if not galois.is_prime(b) or b**m > 2**64:
        raise MalformedInputError(f"{path}: invalid base/precision in header")
    body = raw[_BIN_HEADER.size :]
    if len(body) != 8 * dim * n:
        raise MalformedInputError(f"{path}: expected {dim * n} entries, found {len(body) // 8}")
    arr = np.frombuffer(body, dtype="<u8").reshape(n, dim)
    if arr.size and int(arr.max()) >= b**m:
        raise MalformedInputError(f"{path}: entry exceeds b^m")
    if b**m > _INT64_SAFE:
        return PointSet(b, m, arr.astype(object))
    return PointSet(b, m, arr.astype(np.int64))
