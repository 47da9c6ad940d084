"""Tests for CSV ingestion and emission."""

from __future__ import annotations

import io

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from snth.data import Dataset, from_array, read_csv, write_csv


class TestDataset:
    def test_wraps_and_validates(self):
        d = Dataset(("a", "b"), np.array([[1.0, 2.0], [3.0, 4.0]]))
        assert d.shape == (2, 2)
        assert d.n_dropped == 0

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            Dataset(("a",), np.array([[np.nan]]))
        with pytest.raises(ValueError):
            Dataset(("a",), np.array([[np.inf]]))

    def test_rejects_label_mismatch(self):
        with pytest.raises(ValueError):
            Dataset(("a",), np.ones((3, 2)))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Dataset((), np.ones((3, 0)))

    def test_from_array_default_labels(self):
        d = from_array(np.ones((4, 3)))
        assert d.columns == ("y1", "y2", "y3")

    def test_from_array_one_dimensional(self):
        d = from_array(np.arange(5.0))
        assert d.shape == (5, 1)


class TestReadCsv:
    def test_header_autodetection(self, tmp_path):
        f = tmp_path / "with_header.csv"
        f.write_text("height,weight\n1.2,3.4\n5.6,7.8\n")
        d = read_csv(f)
        assert d.columns == ("height", "weight")
        assert np.array_equal(d.values, [[1.2, 3.4], [5.6, 7.8]])

    def test_headerless_gets_default_labels(self, tmp_path):
        f = tmp_path / "plain.csv"
        f.write_text("1.2,3.4\n5.6,7.8\n")
        d = read_csv(f)
        assert d.columns == ("y1", "y2")
        assert d.values.shape == (2, 2)

    def test_missing_cells_drop_rows_and_count(self, tmp_path):
        f = tmp_path / "gaps.csv"
        f.write_text("a,b\n1,2\n,4\n5,6\nnan,8\n9,inf\n")
        d = read_csv(f)
        assert d.values.shape == (2, 2)
        assert d.n_dropped == 3
        assert np.array_equal(d.values, [[1.0, 2.0], [5.0, 6.0]])

    def test_wrong_width_row_is_an_error(self, tmp_path):
        f = tmp_path / "jagged.csv"
        f.write_text("1,2\n3,4,5\n")
        with pytest.raises(ValueError):
            read_csv(f)

    def test_empty_file_is_an_error(self, tmp_path):
        f = tmp_path / "empty.csv"
        f.write_text("")
        with pytest.raises(ValueError):
            read_csv(f)

    def test_header_only_is_an_error(self, tmp_path):
        f = tmp_path / "header_only.csv"
        f.write_text("a,b\n")
        with pytest.raises(ValueError):
            read_csv(f)

    def test_all_rows_invalid_is_an_error(self, tmp_path):
        f = tmp_path / "bad.csv"
        f.write_text("a,b\nx,1\ny,2\n")
        with pytest.raises(ValueError):
            read_csv(f)

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            read_csv(tmp_path / "does_not_exist.csv")


class TestWriteCsv:
    def test_roundtrip_is_lossless(self, tmp_path):
        rng = np.random.default_rng(1)
        vals = rng.standard_normal((30, 3)) * 10.0 ** rng.integers(
            -8, 9, size=(30, 3))
        d = from_array(vals, columns=("u", "v", "w"))
        f = tmp_path / "round.csv"
        write_csv(f, d)
        back = read_csv(f)
        assert back.columns == ("u", "v", "w")
        assert np.array_equal(back.values, vals)

    def test_writes_to_file_object(self):
        buf = io.StringIO()
        write_csv(buf, from_array(np.array([[1.5, 2.5]])))
        assert buf.getvalue() == "y1,y2\n1.5,2.5\n"

    @given(xs=st.lists(st.floats(min_value=-1e300, max_value=1e300,
                                 allow_nan=False, allow_infinity=False),
                       min_size=1, max_size=20))
    @settings(max_examples=150, deadline=None,
              suppress_health_check=[HealthCheck.function_scoped_fixture])
    def test_seventeen_digits_reproduce_any_double(self, xs, tmp_path):
        # the same scratch file is overwritten per example, so reusing
        # the function-scoped fixture is harmless here
        d = from_array(np.array(xs))
        f = tmp_path / "prop.csv"
        write_csv(f, d)
        back = read_csv(f)
        assert np.array_equal(back.values.ravel(), np.array(xs))
