import csv
import io

import pytest

from hodnet.reference import M_RANGE, TABLES, table
from hodnet.tables import Column, evaluate, fmt3, known_tables, parse_m_range, run_sweep, run_table, to_csv


def test_reference_tables_are_rectangular():
    assert known_tables() == list(range(1, 10))
    for number, ref in TABLES.items():
        assert ref.number == number
        assert set(ref.values) == set(ref.columns)
        for key in ref.columns:
            assert len(ref.values[key]) == len(M_RANGE)
            s, alpha, d = ref.column_params(key)
            assert s >= 1 and alpha >= 2 and d >= 1
    with pytest.raises(KeyError):
        table(10)


def test_column_params():
    assert table(1).column_params((5, "plps")) == (5, 2, 2)
    assert table(2).column_params(((3, 3), "nx")) == (3, 3, 3)
    assert table(1).value((1, "sobol"), 4) == 2.13e-5
    assert table(1).value((1, "plps"), 14) is None


def test_fmt3():
    assert fmt3(2.11e-5) == "2.11e-5"
    assert fmt3(1.74e13) == "1.74e13"
    assert fmt3(0.5) == "5.00e-1"
    assert fmt3(None) == "<1e-16"


@pytest.mark.parametrize(
    "text,expected",
    [("4:7", [4, 5, 6, 7]), ("6", [6]), ("4, 6,8", [4, 6, 8]), ("", []), (" 5:5 ", [5])],
)
def test_parse_m_range(text, expected):
    assert parse_m_range(text) == expected


def test_parse_m_range_rejects_garbage():
    with pytest.raises(ValueError):
        parse_m_range("a:b")


def test_to_csv_round_trip():
    text = to_csv(["m", "x", "y"], [[4, 0.1, None], [5, 1 / 3, "<1e-16"]], comments=["made here"])
    lines = text.splitlines()
    assert lines[0] == "# made here"
    rows = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
    assert rows[0] == ["m", "x", "y"]
    assert rows[1] == ["4", "0.10000000000000001", ""]
    assert float(rows[2][1]) == 1 / 3 and rows[2][2] == "<1e-16"


def test_evaluate_criterion_cells():
    assert evaluate(Column("B", "sobol", 1, 2, 2, "1"), 4) == pytest.approx(2.13e-5, rel=0.02)
    assert evaluate(Column("B", "plps", 1, 2, 2, "1"), 4) == pytest.approx(2.11e-5, rel=0.005)
    with pytest.raises(ValueError):
        evaluate(Column("B", "nx", 1, 2, 2, "1"), 4)


def test_evaluate_rmse_is_deterministic():
    col = Column("rmse", "plps", 2, 2, 2, "j^-2")
    a = evaluate(col, 5, r=8, seed=3)
    assert a > 0 and a == evaluate(col, 5, r=8, seed=3)


def test_run_table_small():
    header, rows = run_table(1, m_values=[4, 5], methods=("plps",))
    assert header[:3] == ["m", "s1_a2d2_sobol", "s1_a2d2_sobol_published"]
    assert [r[0] for r in rows] == [4, 5]
    i = header.index("s1_a2d2_plps")
    assert rows[0][i] == pytest.approx(2.11e-5, rel=0.005)
    assert rows[0][i + 1] == repr(2.11e-5)
    assert rows[0][header.index("s1_a2d2_sobol")] is None


def test_run_table_outside_published_range_and_progress():
    seen = []
    header, rows = run_table(1, m_values=[3], methods=("plps",), progress=lambda col, m, v: seen.append((col.label, m)))
    assert rows[0][header.index("s1_a2d2_plps_published")] is None
    assert ("s1_a2d2_plps", 3) in seen


def test_run_sweep():
    col = Column("B", "plps", 2, 2, 1, "1")
    header, rows = run_sweep(col, [3, 4, 5])
    assert header == ["m", "s2_a2d1_plps"]
    vals = [v for _, v in rows]
    assert vals[0] > vals[1] > vals[2] > 0
