import math
from pathlib import Path

import numpy as np
import pytest

import fracspec

ROOT = Path(__file__).resolve().parents[2]


def desk_operator(beta=1.0, points=128):
    grid = fracspec.GridSpec(1, 20.0, points, 0.25)
    return fracspec.Operator(fracspec.gaussian_well(grid, 1.0, 1.0), beta)


def test_grid_geometry():
    grid = fracspec.GridSpec(1, math.pi, 64, 0.25)
    assert grid.size == 64
    assert grid.spacing == pytest.approx(2 * math.pi / 64)
    x = grid.coordinates()
    assert x[0] == pytest.approx(-math.pi)
    assert x[32] == 0.0


def test_bad_grid_raises():
    with pytest.raises(fracspec.Error):
        fracspec.GridSpec(1, 20.0, 64, 0.5)


def test_plane_wave_symbol():
    grid = fracspec.GridSpec(1, math.pi, 64, 0.25)
    u = np.cos(3 * grid.coordinates())
    out = fracspec.apply_fractional_laplacian(grid, u)
    np.testing.assert_allclose(out, 3 ** 0.5 * u, atol=1e-12)


def test_potential_values_and_validation():
    grid = fracspec.GridSpec(1, 20.0, 256, 0.25)
    g = fracspec.gaussian_well(grid, 1.0, 1.0)
    assert g.kind == "gaussian_well"
    assert g.values.shape == (256,)
    assert g.values[128] == pytest.approx(0.0)
    report = fracspec.gaussian_well(grid, 1.0, 1.0).validate()
    assert report["bounds_ok"] and report["tail_ok"] and report["measure_ok"]
    assert not fracspec.constant_one(grid).validate()["measure_ok"]


def test_operator_quadratic_forms():
    op = desk_operator()
    x = op.grid.coordinates()
    u = np.exp(-x * x)
    lu = op.apply(u)
    dx = op.grid.spacing
    assert float(np.dot(u, lu) * dx) == pytest.approx(op.phi(u), rel=1e-10)
    assert op.rayleigh(2.5 * u) == pytest.approx(op.rayleigh(u), rel=1e-12)
    with pytest.raises(fracspec.Error):
        op.apply(np.zeros(5))


def test_eigenpairs_match_dense():
    op = desk_operator()
    values, vectors, residuals = fracspec.lowest_eigenpairs(op, k=3, tol=1e-10)
    dense = fracspec.dense_eigenvalues(op)
    np.testing.assert_allclose(values, dense[:3], atol=1e-7)
    assert len(vectors) == 3
    assert np.all(residuals < 1e-8)
    assert np.all(np.diff(values) >= 0)


def test_gamma_and_implication():
    op = desk_operator()
    gamma = fracspec.gamma_values(op, k=1, tol=1e-10)
    dense = fracspec.dense_gamma_values(op)
    assert gamma[0] == pytest.approx(dense[0], abs=1e-6)
    report = fracspec.implication_check(op)
    assert report["holds"]
    assert report["lambda1"] < report["beta"]


def test_run_solve_report():
    config = "[grid]\ndimension = 1\nhalf_length = 20\npoints = 128\norder = 0.25\n\n[solve]\nk = 2\n"
    report = fracspec.run("solve", config)
    assert report["command"] == "solve"
    assert report["fingerprint"] == fracspec.fingerprint(config)
    assert list(report)[-1] == "timestamp"


def test_run_reads_config_file():
    report = fracspec.run("oracle", ROOT / "configs" / "gaussian_well.ini")
    assert report["status"] == "pass"


def test_parse_error_type():
    with pytest.raises(fracspec.ParseError):
        fracspec.run("solve", "[grid]\nbogus = 1\n")
