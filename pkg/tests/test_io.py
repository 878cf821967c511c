import numpy as np
import pytest

from spreadim import ParseError, ValidationError
from spreadim.io import (
    read_angles_csv,
    read_distance_matrix_csv,
    read_point_cloud_csv,
    write_angles_csv,
    write_distance_matrix_csv,
    write_point_cloud_csv,
)


class TestPointCloudCsv:
    def test_round_trip_is_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        pts = rng.normal(size=(20, 3))
        path = tmp_path / "cloud.csv"
        write_point_cloud_csv(path, pts)
        back = read_point_cloud_csv(path)
        assert np.array_equal(back, pts)

    def test_round_trip_is_byte_stable(self, tmp_path):
        pts = np.random.default_rng(1).normal(size=(10, 2))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_point_cloud_csv(a, pts)
        write_point_cloud_csv(b, read_point_cloud_csv(a))
        assert a.read_bytes() == b.read_bytes()

    def test_header_detected_and_skipped(self, tmp_path):
        path = tmp_path / "cloud.csv"
        path.write_text("x,y\n1.0,2.0\n3.0,4.0\n")
        back = read_point_cloud_csv(path)
        np.testing.assert_array_equal(back, [[1.0, 2.0], [3.0, 4.0]])

    def test_non_numeric_mid_file_names_line(self, tmp_path):
        path = tmp_path / "cloud.csv"
        path.write_text("1.0,2.0\n3.0,oops\n")
        with pytest.raises(ParseError, match="line 2"):
            read_point_cloud_csv(path)

    def test_ragged_rows_name_line(self, tmp_path):
        path = tmp_path / "cloud.csv"
        path.write_text("1.0,2.0\n3.0\n")
        with pytest.raises(ParseError, match="line 2"):
            read_point_cloud_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "cloud.csv"
        path.write_text("")
        with pytest.raises(ParseError, match="no data"):
            read_point_cloud_csv(path)


class TestDistanceMatrixCsv:
    def test_round_trip(self, tmp_path):
        d = np.array([[0.0, 1.5], [1.5, 0.0]])
        path = tmp_path / "d.csv"
        write_distance_matrix_csv(path, d)
        assert np.array_equal(read_distance_matrix_csv(path), d)

    def test_non_square_rejected(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("0.0,1.0,2.0\n1.0,0.0,2.0\n")
        with pytest.raises(ValidationError, match="square"):
            read_distance_matrix_csv(path)

    def test_invariant_violations_rejected(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("0.0,1.0\n2.0,0.0\n")
        with pytest.raises(ValidationError, match="symmetry"):
            read_distance_matrix_csv(path)


class TestAnglesCsv:
    def test_round_trip(self, tmp_path):
        angles = np.array([0.0, 1.0, 3.14])
        path = tmp_path / "a.csv"
        write_angles_csv(path, angles)
        assert np.array_equal(read_angles_csv(path), angles)

    def test_multi_column_rejected(self, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("0.0,1.0\n")
        with pytest.raises(ValidationError, match="one column"):
            read_angles_csv(path)
