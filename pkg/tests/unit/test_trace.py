#! /usr/bin/env python
"""Test suite for the simulation trace and its CSV form"""
# pylint: disable=missing-function-docstring
import numpy as np
import pandas as pd
import pytest

from tests.unit.oracles import synthetic_trace
from tilthex import ConfigError, EmptyTraceError
from tilthex.harness.trace import TRACE_COLUMNS, Trace, read_trace, write_trace

HOVER_U = np.full(6, 3815.0)


def test_column_order():
    assert TRACE_COLUMNS[:5] == ["t", "phase", "p_x", "p_y", "p_z"]
    assert TRACE_COLUMNS[-4:] == ["t_c", "saturated", "status", "candidates"]
    assert len(TRACE_COLUMNS) == 36


def test_missing_timing_column_is_filled():
    frame = synthetic_trace(3, HOVER_U).frame.drop(columns=["t_c"])

    trace = Trace(frame)

    assert trace.frame["t_c"].isna().all()


def test_missing_columns_are_rejected():
    frame = synthetic_trace(3, HOVER_U).frame.drop(columns=["alpha"])

    with pytest.raises(ConfigError, match="alpha"):
        Trace(frame)


def test_vector_accessors():
    trace = synthetic_trace(4, HOVER_U, e_p=np.array([0.1, 0.2, 0.3]))

    assert trace.vectors("e_p").shape == (4, 3)
    assert trace.vectors("e_p")[2].tolist() == [0.1, 0.2, 0.3]
    assert trace.inputs[0].tolist() == HOVER_U.tolist()
    assert trace.wrenches.shape == (4, 6)
    assert trace.t == pytest.approx([0.0, 0.01, 0.02, 0.03])


def test_window_is_half_open():
    trace = synthetic_trace(100, HOVER_U)

    window = trace.window(0.2, 0.5)

    assert len(window) == 30
    assert window.t[0] == pytest.approx(0.2)
    assert window.t[-1] == pytest.approx(0.49)
    assert len(trace.window(0.95)) == 5


def test_phase_selection():
    frame = synthetic_trace(10, HOVER_U).frame
    frame.loc[5:, "phase"] = "contact"

    trace = Trace(frame, infeasible_count=2)

    assert len(trace.phase("contact")) == 5
    assert len(trace.phase("hover")) == 5
    assert trace.phase("contact").infeasible_count == 2


def test_untimed_csv_does_not_depend_on_wall_clock(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"

    write_trace(synthetic_trace(20, HOVER_U, t_c=1e-4), first)
    write_trace(synthetic_trace(20, HOVER_U, t_c=3e-4), second)

    assert first.read_bytes() == second.read_bytes()
    assert "t_c" not in pd.read_csv(first).columns


def test_timed_csv_keeps_the_timing_column(tmp_path):
    path = tmp_path / "trace.csv"

    write_trace(synthetic_trace(5, HOVER_U, t_c=2e-4), path, timing=True)
    trace = read_trace(path)

    assert trace.frame["t_c"].tolist() == [2e-4] * 5
    assert trace.frame["saturated"].dtype == bool
    assert trace.frame["status"].unique().tolist() == ["nominal"]


def test_untimed_csv_reads_back_without_timing(tmp_path):
    path = tmp_path / "trace.csv"
    write_trace(synthetic_trace(5, HOVER_U), path)

    trace = read_trace(path)

    assert len(trace) == 5
    assert trace.frame["t_c"].isna().all()
    assert list(trace.frame.columns) == TRACE_COLUMNS


def test_empty_trace_is_not_written(tmp_path):
    with pytest.raises(EmptyTraceError):
        write_trace(Trace.from_rows([]), tmp_path / "trace.csv")


def test_empty_files_are_rejected(tmp_path):
    blank, header = tmp_path / "blank.csv", tmp_path / "header.csv"
    blank.write_text("", encoding="UTF-8")
    header.write_text(",".join(TRACE_COLUMNS) + "\n", encoding="UTF-8")

    with pytest.raises(EmptyTraceError):
        read_trace(blank)
    with pytest.raises(EmptyTraceError):
        read_trace(header)


def test_foreign_csv_is_rejected(tmp_path):
    path = tmp_path / "other.csv"
    path.write_text("a,b\n1,2\n", encoding="UTF-8")

    with pytest.raises(ConfigError):
        read_trace(path)
