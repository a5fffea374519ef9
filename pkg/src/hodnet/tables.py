"""Sweeps over m that regenerate the benchmark tables next to their published values."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .cbc import cbc_construct_fast
from .criterion import CriterionParams, Weights, criterion_B
from .interlace import interlace_net
from .pointset import generate_points, sobol_points
from .randomize import rmse_experiment, test_function
from .reference import M_RANGE, TABLES, table

__all__ = ["Column", "COMPUTABLE", "evaluate", "run_table", "run_sweep", "to_csv", "fmt3", "parse_m_range", "known_tables"]

COMPUTABLE = ("sobol", "plps")


@dataclass(frozen=True)
class Column:
    quantity: str  # "B" or "rmse"
    method: str  # "sobol" or "plps"
    s: int
    alpha: int
    d: int
    weights: str

    @property
    def label(self) -> str:
        return f"s{self.s}_a{self.alpha}d{self.d}_{self.method}"


def fmt3(x) -> str:
    """Three significant digits in the compact ``2.11e-5`` style."""
    if x is None:
        return "<1e-16"
    mant, _, exp = f"{x:.2e}".partition("e")
    return f"{mant}e{int(exp)}"


def parse_m_range(text: str) -> list[int]:
    """``"4:15"`` (inclusive), ``"6"``, ``"4,6,8"`` or ``""`` for no rows."""
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        lo, _, hi = text.partition(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in text.split(",") if t.strip()]


def evaluate(col: Column, m: int, r: int = 50, seed: int = 0) -> float:
    """One table cell: B or the shifted-rule rmse of the chosen point set at 2^m points."""
    W = Weights.parse(col.weights, col.s)
    if col.method == "plps":
        res = cbc_construct_fast(2, m, col.s, col.alpha, col.d, W)
        if col.quantity == "B":
            return res.B_final
        pts = generate_points(res.lattice)
    elif col.method == "sobol":
        pts = sobol_points(col.d * col.s, m)
        if col.quantity == "B":
            return criterion_B(pts, W, CriterionParams(2, col.alpha, col.d))
    else:
        raise ValueError(f"cannot compute method {col.method!r}")
    net = interlace_net(col.d, pts)
    return rmse_experiment(net, test_function(col.s), r=r, seed=seed).rmse


def _columns_of(number: int, methods) -> list[tuple]:
    ref = table(number)
    out = []
    for key in ref.columns:
        s, alpha, d = ref.column_params(key)
        col = Column(ref.quantity, key[1], s, alpha, d, ref.weights)
        out.append((key, col, key[1] in methods))
    return out


def run_table(number: int, m_values=M_RANGE, r: int = 50, seed: int = 0, methods=COMPUTABLE, progress=None):
    """Header and rows for a published table: each column as computed here and as printed."""
    ref = table(number)
    cols = _columns_of(number, methods)
    header = ["m"]
    for _, col, _ in cols:
        header += [col.label, col.label + "_published"]
    rows = []
    for m in m_values:
        row = [m]
        for key, col, computed in cols:
            val = evaluate(col, m, r, seed) if computed else None
            if progress is not None and computed:
                progress(col, m, val)
            if m not in M_RANGE:
                pub = None
            else:
                printed = ref.value(key, m)
                pub = "<1e-16" if printed is None else repr(printed)
            row += [val, pub]
        rows.append(row)
    return header, rows


def run_sweep(col: Column, m_values, r: int = 50, seed: int = 0):
    header = ["m", col.label]
    return header, [[m, evaluate(col, m, r, seed)] for m in m_values]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def to_csv(header, rows, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def known_tables() -> list[int]:
    return sorted(TABLES)
