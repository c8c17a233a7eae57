import csv
import json

import numpy as np
import pytest

from unit_fibers.errors import InvalidArgumentError, UnsupportedFormatError
from unit_fibers.fibration import FibrationSpec, stack, standard_fiber, torus_residual, villarceau_fiber
from unit_fibers.harness import (
    ERR_NOT_DISJOINT,
    LINKED,
    SELF,
    THREADS_ENV,
    UNLINKED,
    bialy_grid,
    campaign_pairs,
    export_fibers,
    linking_matrix,
    load_fibers_json,
    read_obj_polylines,
    spec_grid,
    thread_count,
    verify_construction,
)


def test_verify_small_campaign():
    report = verify_construction(1, 1000, 42, 0.95)
    assert report.certified_fraction == 1.0
    assert report.linked_fraction == 1.0
    assert report.skew_fraction == 1.0
    assert report.passed and report.failures == []
    assert all(m > 0 for m in report.worst_margins)
    assert report.spec == FibrationSpec("standard", 1)


@pytest.mark.parametrize("n", (3, 7))
def test_verify_higher_algebras(n):
    report = verify_construction(n, 300, 5, 0.99)
    assert report.passed
    assert report.certified_fraction == report.linked_fraction == report.skew_fraction == 1.0


def test_verify_rejects_bad_arguments():
    for pairs in (0, -5, 2.5, True):
        with pytest.raises(InvalidArgumentError):
            verify_construction(1, pairs, 42)
    for bound in (0.0, 1.0, 1.5):
        with pytest.raises(InvalidArgumentError):
            verify_construction(1, 10, 42, bound)
    with pytest.raises(InvalidArgumentError):
        verify_construction(2, 10, 42)


def test_campaign_pairs_stay_inside_bound():
    ys, zs = campaign_pairs(3, 5000, 1, 0.5)
    assert ys.shape == zs.shape == (5000, 4)
    assert np.max(np.linalg.norm(ys, axis=1)) < 0.5
    assert np.max(np.linalg.norm(zs, axis=1)) < 0.5


def test_report_is_deterministic_across_threads(monkeypatch):
    one = verify_construction(3, 5000, 9, 0.99, threads=1)
    three = verify_construction(3, 5000, 9, 0.99, threads=3)
    again = verify_construction(3, 5000, 9, 0.99)
    assert one.to_json() == three.to_json() == again.to_json()
    assert verify_construction(3, 5000, 10, 0.99).to_json() != one.to_json()
    monkeypatch.setenv(THREADS_ENV, "4")
    assert thread_count() == 4
    assert verify_construction(3, 5000, 9, 0.99).to_json() == one.to_json()
    monkeypatch.setenv(THREADS_ENV, "lots")
    assert thread_count() == 1


def test_report_serialization():
    report = verify_construction(1, 50, 3)
    doc = json.loads(report.to_json())
    assert "wall_time" not in doc
    assert doc["n_pairs"] == 50 and doc["seed"] == 3
    assert "wall_time" in json.loads(report.to_json(include_timing=True))
    table = report.table()
    assert "certified" in table and "1.000000" in table


def test_failures_are_recorded_not_raised(monkeypatch):
    from unit_fibers import harness

    real = harness.linked
    calls = {"k": 0}

    def flaky(f1, f2, samples=None):
        calls["k"] += 1
        if calls["k"] == 3:
            raise harness.DegenerateConfigurationError("injected")
        return real(f1, f2)

    monkeypatch.setattr(harness, "linked", flaky)
    report = verify_construction(1, 10, 0)
    assert len(report.failures) == 1
    assert "injected" in report.failures[0].reason
    assert report.linked_fraction == 0.9
    assert report.certified_fraction == 1.0
    assert not report.passed


def test_linking_matrix_examples():
    f = villarceau_fiber(0.5, 0.0)
    assert linking_matrix([f]) == [[SELF]]
    fibers = [villarceau_fiber(r, 0.0) for r in np.linspace(0.1, 0.9, 10)]
    mat = linking_matrix(fibers)
    for i in range(10):
        for j in range(10):
            assert mat[i][j] == (SELF if i == j else LINKED)
    dup = linking_matrix([f, f])
    assert dup[0][1] == dup[1][0] == ERR_NOT_DISJOINT
    with pytest.raises(InvalidArgumentError):
        linking_matrix([])


def test_linking_matrix_unlinked_and_dimension():
    from unit_fibers.fibration import Fiber

    a = Fiber.from_containing_frame([0, 0, 0], np.eye(3)[:2])
    b = Fiber.from_containing_frame([5, 0, 0], np.eye(3)[:2])
    assert linking_matrix([a, b])[0][1] == UNLINKED
    lifted = stack(FibrationSpec("bialy"), (0, 1))
    up = [lifted.fiber(((0.5, 0.0), 0.3)), lifted.fiber(((0.5, 1.0), 0.6))]
    assert linking_matrix(up)[0][1] == "error:dimension"


def test_bialy_grid_layout():
    grid = bialy_grid(9, 24)
    assert len(grid) == 216
    assert sorted({r for r, _ in grid}) == pytest.approx([i / 10 for i in range(1, 10)])


def test_export_obj_bialy(tmp_path):
    spec = FibrationSpec("bialy")
    params = bialy_grid(9, 24)
    path = export_fibers(spec, params, 128, "obj", tmp_path / "bialy.obj")
    lines = read_obj_polylines(path)
    assert len(lines) == 216
    for (r, _), pts in zip(params, lines):
        assert pts.shape == (128, 3)
        assert np.max(np.abs(torus_residual(pts, r))) < 1e-12


def test_export_rejects_low_density_and_bad_formats(tmp_path):
    spec = FibrationSpec("bialy")
    with pytest.raises(InvalidArgumentError):
        export_fibers(spec, [(0.5, 0.0)], 4, "obj", tmp_path / "x.obj")
    with pytest.raises(UnsupportedFormatError):
        export_fibers(FibrationSpec("standard", 3), [np.zeros(4)], 16, "obj", tmp_path / "x.obj")
    with pytest.raises(UnsupportedFormatError):
        export_fibers(spec, [(0.5, 0.0)], 16, "ply", tmp_path / "x.ply")
    with pytest.raises(OSError):
        export_fibers(spec, [(0.5, 0.0)], 16, "csv", tmp_path / "missing" / "x.csv")


@pytest.mark.parametrize("spec", [
    FibrationSpec("bialy"),
    FibrationSpec("standard", 3),
    stack(FibrationSpec("standard", 1), (0.0, 2.0)),
])
def test_json_round_trip_is_exact(tmp_path, spec):
    params = spec_grid(spec, 2, 5, 0.8)
    path = export_fibers(spec, params, 16, "json", tmp_path / "f.json")
    loaded_spec, fibers, samples = load_fibers_json(path)
    assert loaded_spec == spec
    originals = [spec.fiber(p) for p in params]
    assert [f.to_dict() for f in fibers] == [f.to_dict() for f in originals]
    for f, pts in zip(originals, samples):
        np.testing.assert_array_equal(pts, f.sample(16))


@pytest.mark.parametrize("spec", [
    FibrationSpec("standard", 7),
    stack(FibrationSpec("bialy"), (-1.0, 1.0)),
])
def test_exported_csv_points_are_on_fiber(tmp_path, spec):
    params = spec_grid(spec, 3, 4, 0.9)
    path = export_fibers(spec, params, 32, "csv", tmp_path / "f.csv")
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["fiber_id"] + [f"x{k}" for k in range(spec.ambient_dim)]
    fibers = [spec.fiber(p) for p in params]
    body = rows[1:]
    assert len(body) == 32 * len(fibers)
    for row in body:
        f = fibers[int(row[0])]
        p = np.array([float(x) for x in row[1:]])
        rel = p - f.center
        assert abs(np.linalg.norm(rel) - 1) < 1e-9
        assert np.linalg.norm(f.normal_frame @ rel) < 1e-9


def test_exported_floats_round_trip(tmp_path):
    f = standard_fiber(1, [0.1234567890123, -0.3])
    path = export_fibers(FibrationSpec("standard", 1), [np.array([0.1234567890123, -0.3])], 8, "csv",
                         tmp_path / "f.csv")
    with path.open() as fh:
        rows = list(csv.reader(fh))[1:]
    pts = np.array([[float(x) for x in r[1:]] for r in rows])
    np.testing.assert_array_equal(pts, f.sample(8))
