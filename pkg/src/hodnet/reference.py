"""Published benchmark values for interlaced polynomial lattice rules (b = 2).

Tables 1-6 hold values of the quality criterion B, tables 7-9 hold the
root-mean-square error of the randomly shifted rule for the test integrand
``1 / (1 + sum_j x_j / j^2)``.  Rows run over m = 4..15.  ``None`` marks
entries printed only as "below 1e-16".

Column keys are ``(s, method)`` for tables 1, 3, 5, 6, 7, 8, 9 and
``((alpha, d), method)`` for tables 2 and 4.  Methods: ``sobol`` (interlaced
Sobol' points), ``nx`` (interlaced Niederreiter-Xing points), ``plps``
(constructed polynomial lattice rule), ``plps_sc`` (its scrambled version).
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["ReferenceTable", "TABLES", "M_RANGE", "table"]

M_RANGE = tuple(range(4, 16))


@dataclass(frozen=True)
class ReferenceTable:
    number: int
    quantity: str  # "B" or "rmse"
    weights: str  # "1" or "j^-2"
    alpha: int | None  # None when the column key carries (alpha, d)
    d: int | None
    columns: tuple
    values: dict  # column key -> tuple over M_RANGE

    def value(self, key, m: int):
        return self.values[key][M_RANGE.index(m)]

    def column_params(self, key) -> tuple[int, int, int]:
        """``(s, alpha, d)`` of a column."""
        head = key[0]
        if isinstance(head, tuple):
            alpha, d = head
            return 3, alpha, d
        return head, self.alpha, self.d


def _cols(keys, rows):
    if any(len(r) != len(keys) for r in rows) or len(rows) != len(M_RANGE):
        raise AssertionError("reference table is ragged")
    return {k: tuple(r[i] for r in rows) for i, k in enumerate(keys)}


_FLOOR = None

_T1_KEYS = ((1, "sobol"), (1, "plps"), (2, "sobol"), (2, "nx"), (2, "plps"), (5, "sobol"), (5, "nx"), (5, "plps"))
_T1 = [
    (2.13e-5, 2.11e-5, 2.69e-3, 2.56e-3, 2.70e-3, 1.27e+0, 1.76e+0, 9.81e-1),
    (1.51e-6, 1.42e-6, 1.06e-3, 2.62e-4, 3.05e-4, 4.05e-1, 8.52e-1, 2.91e-1),
    (1.38e-7, 9.56e-8, 9.51e-5, 2.04e-5, 7.58e-5, 1.84e-1, 1.50e-1, 7.42e-2),
    (2.77e-8, 6.38e-9, 3.27e-6, 1.61e-6, 6.94e-6, 4.37e-2, 6.13e-2, 2.59e-2),
    (1.11e-8, 4.24e-10, 4.34e-7, 1.74e-7, 4.82e-7, 2.15e-2, 1.84e-2, 6.55e-3),
    (5.26e-9, 2.81e-11, 4.92e-8, 3.08e-8, 8.09e-8, 1.28e-2, 5.97e-3, 1.94e-3),
    (2.62e-9, 1.86e-12, 1.32e-8, 1.11e-8, 5.78e-9, 9.43e-4, 4.54e-3, 3.97e-4),
    (1.31e-9, 1.24e-13, 5.59e-9, 5.27e-9, 5.39e-10, 4.59e-4, 3.74e-3, 7.42e-5),
    (6.55e-10, 6.44e-15, 2.57e-9, 2.61e-9, 4.64e-11, 1.13e-4, 5.36e-5, 1.82e-5),
    (3.28e-10, 4.44e-16, 1.28e-9, 1.30e-9, 4.85e-12, 8.07e-5, 1.05e-5, 4.32e-6),
    (1.64e-10, _FLOOR, 6.37e-10, 6.52e-10, 3.99e-13, 1.38e-5, 1.62e-6, 7.18e-7),
    (8.19e-11, _FLOOR, 3.19e-10, 3.19e-10, 4.35e-14, 7.52e-7, 2.39e-7, 1.35e-7),
]

_T2_KEYS = (((2, 2), "sobol"), ((2, 2), "nx"), ((2, 2), "plps"), ((3, 3), "sobol"), ((3, 3), "nx"), ((3, 3), "plps"))
_T2 = [
    (7.16e-2, 2.08e-1, 4.77e-2, 1.86e+3, 1.79e+3, 1.14e+2),
    (3.06e-2, 1.33e-2, 8.05e-3, 6.11e+2, 7.22e+2, 1.87e+1),
    (6.18e-3, 2.92e-3, 1.90e-3, 2.58e+2, 4.06e+2, 1.14e+1),
    (9.08e-4, 1.30e-3, 2.79e-4, 2.07e+1, 1.01e+2, 1.35e+0),
    (2.42e-4, 3.74e-4, 6.02e-5, 3.55e+0, 9.83e+1, 1.34e-1),
    (8.86e-6, 4.40e-6, 7.53e-6, 1.80e+0, 1.65e+0, 1.74e-2),
    (1.58e-6, 7.80e-7, 9.00e-7, 2.17e-1, 1.59e+0, 2.29e-3),
    (1.20e-6, 1.66e-7, 1.45e-7, 1.77e-2, 8.70e-3, 1.34e-4),
    (6.41e-8, 1.69e-8, 1.61e-8, 4.04e-3, 3.50e-3, 8.42e-6),
    (7.57e-9, 4.92e-9, 3.08e-9, 1.97e-3, 1.97e-3, 8.32e-7),
    (2.43e-9, 2.06e-9, 2.37e-10, 9.82e-4, 1.13e-3, 5.14e-8),
    (1.20e-9, 9.80e-10, 3.18e-11, 4.91e-4, 4.79e-4, 2.75e-9),
]

_T3 = [
    (2.13e-5, 2.11e-5, 6.89e-4, 7.34e-4, 6.91e-4, 2.78e-2, 1.31e-1, 6.67e-3),
    (1.51e-6, 1.42e-6, 2.66e-4, 6.76e-5, 7.72e-5, 3.33e-3, 1.04e-1, 1.38e-3),
    (1.38e-7, 9.56e-8, 2.39e-5, 5.26e-6, 1.90e-5, 6.07e-4, 5.56e-4, 3.16e-4),
    (2.77e-8, 6.38e-9, 8.38e-7, 4.30e-7, 1.74e-6, 1.61e-4, 1.32e-4, 6.41e-5),
    (1.11e-8, 4.24e-10, 1.17e-7, 5.71e-8, 1.21e-7, 7.98e-5, 4.98e-5, 1.46e-5),
    (5.26e-9, 2.81e-11, 1.62e-8, 1.37e-8, 2.02e-8, 1.94e-5, 1.41e-5, 2.35e-6),
    (2.62e-9, 1.86e-12, 5.27e-9, 4.74e-9, 1.45e-9, 2.27e-6, 3.53e-6, 5.09e-7),
    (1.31e-9, 1.24e-13, 2.38e-9, 2.30e-9, 1.35e-10, 1.44e-6, 2.30e-6, 6.98e-8),
    (6.55e-10, 6.44e-15, 1.13e-9, 1.14e-9, 1.16e-11, 5.39e-8, 1.06e-7, 1.70e-8),
    (3.28e-10, 4.44e-16, 5.65e-10, 6.91e-10, 1.21e-12, 3.38e-8, 1.63e-8, 2.69e-9),
    (1.64e-10, _FLOOR, 2.82e-10, 3.45e-10, 9.97e-14, 4.33e-9, 1.57e-9, 3.92e-10),
    (8.19e-11, _FLOOR, 1.41e-10, 1.41e-10, 1.09e-14, 1.06e-9, 3.91e-10, 7.29e-11),
]

_T4 = [
    (5.49e-3, 2.21e-2, 2.38e-3, 1.12e+2, 1.31e+2, 6.13e+0),
    (2.03e-3, 9.73e-4, 4.25e-4, 1.86e+1, 2.42e+1, 6.03e-1),
    (2.00e-4, 2.84e-4, 9.00e-5, 7.21e+0, 1.13e+1, 3.72e-1),
    (2.84e-5, 3.93e-5, 1.37e-5, 5.82e-1, 2.81e+0, 5.32e-2),
    (6.95e-6, 1.14e-5, 2.21e-6, 1.03e-1, 2.73e+0, 4.58e-3),
    (2.87e-7, 2.64e-7, 2.53e-7, 5.10e-2, 4.60e-2, 5.02e-4),
    (5.04e-8, 7.85e-8, 3.22e-8, 6.09e-3, 4.41e-2, 7.55e-5),
    (3.61e-8, 8.29e-9, 4.35e-9, 5.20e-4, 2.67e-4, 3.98e-6),
    (3.01e-9, 1.93e-9, 5.93e-10, 1.26e-4, 1.10e-4, 2.38e-7),
    (8.19e-10, 8.93e-10, 9.78e-11, 6.17e-5, 6.10e-5, 2.32e-8),
    (3.72e-10, 3.79e-10, 7.46e-12, 3.08e-5, 3.39e-5, 2.02e-9),
    (1.85e-10, 2.27e-10, 1.14e-12, 1.54e-5, 1.52e-5, 1.05e-10),
]

_T56_KEYS = ((10, "sobol"), (10, "plps"), (20, "sobol"), (20, "plps"), (50, "sobol"), (50, "plps"))
_T5 = [
    (4.76e+1, 4.74e+1, 3.75e+4, 3.75e+4, 1.74e+13, 1.74e+13),
    (2.33e+1, 2.32e+1, 1.87e+4, 1.87e+4, 8.70e+12, 8.70e+12),
    (1.14e+1, 1.12e+1, 9.37e+3, 9.37e+3, 4.35e+12, 4.35e+12),
    (5.63e+0, 5.29e+0, 4.68e+3, 4.68e+3, 2.17e+12, 2.17e+12),
    (2.78e+0, 2.41e+0, 2.34e+3, 2.34e+3, 1.09e+12, 1.09e+12),
    (1.47e+0, 1.03e+0, 1.17e+3, 1.17e+3, 5.44e+11, 5.44e+11),
    (7.30e-1, 4.07e-1, 5.86e+2, 5.85e+2, 2.72e+11, 2.72e+11),
    (3.94e-1, 1.78e-1, 2.93e+2, 2.92e+2, 1.36e+11, 1.36e+11),
    (1.70e-1, 6.65e-2, 1.47e+2, 1.46e+2, 6.80e+10, 6.79e+10),
    (1.09e-1, 2.59e-2, 7.35e+1, 7.25e+1, 3.40e+10, 3.40e+10),
    (5.26e-2, 9.49e-3, 3.67e+1, 3.61e+1, 1.70e+10, 1.70e+10),
    (3.52e-2, 3.37e-3, 1.84e+1, 1.79e+1, 8.49e+9, 8.49e+9),
]

_T6 = [
    (3.85e-2, 1.29e-2, 4.70e-2, 1.72e-2, 5.21e-2, 2.01e-2),
    (7.91e-3, 3.27e-3, 1.30e-2, 4.85e-3, 1.54e-2, 6.00e-3),
    (1.24e-3, 8.65e-4, 2.56e-3, 1.41e-3, 3.93e-3, 1.85e-3),
    (5.01e-4, 2.11e-4, 8.33e-4, 3.87e-4, 1.57e-3, 5.55e-4),
    (2.31e-4, 5.41e-5, 3.57e-4, 1.04e-4, 6.27e-4, 1.60e-4),
    (8.81e-5, 1.21e-5, 1.56e-4, 2.72e-5, 2.06e-4, 4.44e-5),
    (2.58e-5, 3.08e-6, 6.48e-5, 7.00e-6, 9.13e-5, 1.20e-5),
    (9.69e-6, 6.20e-7, 1.87e-5, 1.73e-6, 2.75e-5, 3.25e-6),
    (1.67e-6, 1.60e-7, 4.80e-6, 4.73e-7, 8.46e-6, 9.10e-7),
    (1.20e-6, 3.61e-8, 3.10e-6, 1.24e-7, 4.64e-6, 2.60e-7),
    (2.61e-7, 7.96e-9, 1.67e-6, 3.11e-8, 2.61e-6, 7.20e-8),
    (1.73e-7, 1.76e-9, 1.40e-6, 8.11e-9, 1.73e-6, 2.01e-8),
]

_T7_KEYS = ((1, "sobol"), (1, "plps_sc"), (1, "plps"), (2, "sobol"), (2, "nx"), (2, "plps_sc"), (2, "plps"))
_T7 = [
    (1.72e-4, 4.53e-5, 8.09e-5, 1.86e-4, 1.05e-4, 1.11e-4, 1.29e-4),
    (4.31e-5, 9.38e-6, 2.09e-5, 3.86e-5, 2.15e-5, 2.45e-5, 2.99e-5),
    (1.02e-5, 1.50e-6, 5.90e-6, 1.01e-5, 1.09e-5, 8.51e-6, 6.70e-6),
    (2.92e-6, 2.91e-7, 1.30e-6, 2.34e-6, 1.39e-6, 1.31e-6, 1.20e-6),
    (6.82e-7, 5.08e-8, 3.39e-7, 5.57e-7, 4.69e-7, 5.07e-7, 4.42e-7),
    (1.59e-7, 1.31e-8, 8.50e-8, 1.42e-7, 6.85e-8, 1.84e-7, 1.92e-7),
    (3.77e-8, 2.25e-9, 2.07e-8, 4.54e-8, 1.96e-8, 2.86e-8, 1.90e-8),
    (1.00e-8, 2.96e-10, 5.03e-9, 9.73e-9, 5.02e-9, 1.32e-8, 6.39e-9),
    (2.37e-9, 6.35e-11, 1.23e-9, 2.19e-9, 9.90e-10, 1.31e-9, 1.03e-9),
    (5.97e-10, 1.22e-11, 3.10e-10, 4.94e-10, 3.03e-10, 5.51e-10, 2.75e-10),
    (1.60e-10, 2.71e-12, 7.32e-11, 1.27e-10, 1.11e-10, 9.96e-11, 6.82e-11),
    (3.43e-11, 4.75e-13, 1.81e-11, 4.39e-11, 1.54e-11, 5.32e-11, 2.00e-11),
]

_T8_KEYS = ((5, "sobol"), (5, "nx"), (5, "plps_sc"), (5, "plps"), (10, "sobol"), (10, "plps_sc"), (10, "plps"))
_T8 = [
    (3.15e-4, 1.63e-3, 1.10e-4, 1.29e-4, 2.71e-4, 9.61e-5, 9.88e-5),
    (3.84e-5, 1.63e-3, 3.04e-5, 3.18e-5, 6.03e-5, 2.72e-5, 3.42e-5),
    (1.80e-5, 2.16e-5, 1.21e-5, 1.05e-5, 1.30e-5, 1.14e-5, 1.15e-5),
    (9.39e-6, 7.26e-6, 5.59e-6, 3.25e-6, 9.94e-6, 4.46e-6, 3.94e-6),
    (5.19e-6, 1.38e-6, 1.55e-6, 1.24e-6, 4.94e-6, 1.27e-6, 1.12e-6),
    (7.33e-7, 3.79e-7, 3.79e-7, 2.67e-7, 7.17e-7, 3.74e-7, 3.44e-7),
    (1.77e-7, 2.73e-7, 1.25e-7, 6.59e-8, 2.03e-7, 2.16e-7, 2.17e-7),
    (1.60e-7, 6.72e-8, 3.12e-8, 6.52e-8, 1.62e-7, 4.21e-8, 5.75e-8),
    (1.44e-8, 3.65e-8, 1.49e-8, 9.92e-9, 3.86e-8, 2.56e-8, 9.99e-9),
    (7.94e-9, 3.94e-9, 5.04e-9, 4.02e-9, 1.84e-8, 7.38e-9, 4.75e-9),
    (6.06e-10, 8.13e-10, 1.16e-9, 8.30e-10, 2.31e-9, 2.20e-9, 1.34e-9),
    (1.61e-10, 1.84e-10, 3.59e-10, 1.42e-10, 1.55e-9, 9.91e-10, 1.50e-9),
]

_T9_KEYS = ((20, "sobol"), (20, "plps_sc"), (20, "plps"), (50, "sobol"), (50, "plps_sc"), (50, "plps"))
_T9 = [
    (2.59e-4, 8.09e-5, 1.12e-4, 2.27e-4, 9.40e-5, 9.96e-5),
    (5.75e-5, 2.36e-5, 3.52e-5, 5.64e-5, 2.98e-5, 2.86e-5),
    (1.45e-5, 1.14e-5, 1.11e-5, 1.16e-5, 1.13e-5, 8.75e-6),
    (9.18e-6, 4.68e-6, 3.87e-6, 9.31e-6, 4.25e-6, 4.09e-6),
    (4.58e-6, 1.50e-6, 1.21e-6, 5.22e-6, 1.10e-6, 1.31e-6),
    (9.21e-7, 3.92e-7, 3.15e-7, 1.00e-6, 4.04e-7, 3.26e-7),
    (2.67e-7, 1.56e-7, 1.98e-7, 2.83e-7, 2.08e-7, 1.87e-7),
    (1.54e-7, 4.55e-8, 6.33e-8, 1.52e-7, 4.60e-8, 6.31e-8),
    (5.11e-8, 2.49e-8, 1.15e-8, 7.40e-8, 2.77e-8, 1.20e-8),
    (2.39e-8, 6.15e-9, 4.93e-9, 3.06e-8, 5.40e-9, 6.39e-9),
    (1.02e-8, 2.85e-9, 2.12e-9, 1.21e-8, 2.15e-9, 2.36e-9),
    (1.09e-8, 9.90e-10, 1.47e-9, 1.13e-8, 1.06e-9, 1.37e-9),
]

TABLES = {
    1: ReferenceTable(1, "B", "1", 2, 2, _T1_KEYS, _cols(_T1_KEYS, _T1)),
    2: ReferenceTable(2, "B", "1", None, None, _T2_KEYS, _cols(_T2_KEYS, _T2)),
    3: ReferenceTable(3, "B", "j^-2", 2, 2, _T1_KEYS, _cols(_T1_KEYS, _T3)),
    4: ReferenceTable(4, "B", "j^-2", None, None, _T2_KEYS, _cols(_T2_KEYS, _T4)),
    5: ReferenceTable(5, "B", "1", 2, 2, _T56_KEYS, _cols(_T56_KEYS, _T5)),
    6: ReferenceTable(6, "B", "j^-2", 2, 2, _T56_KEYS, _cols(_T56_KEYS, _T6)),
    7: ReferenceTable(7, "rmse", "j^-2", 2, 2, _T7_KEYS, _cols(_T7_KEYS, _T7)),
    8: ReferenceTable(8, "rmse", "j^-2", 2, 2, _T8_KEYS, _cols(_T8_KEYS, _T8)),
    9: ReferenceTable(9, "rmse", "j^-2", 2, 2, _T9_KEYS, _cols(_T9_KEYS, _T9)),
}


def table(number: int) -> ReferenceTable:
    try:
        return TABLES[int(number)]
    except KeyError:
        raise KeyError(f"no reference table {number}; known: {sorted(TABLES)}") from None
