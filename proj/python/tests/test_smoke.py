import json
import math

import numpy as np
import pytest

import exterior_wave as ew


@pytest.fixture
def grid():
    return ew.Grid(32.0, 4096)


def test_grid(grid):
    assert grid.size == 4095
    assert grid.radii[0] == pytest.approx(1.0 + 32.0 / 4096)
    assert grid.frequencies[0] == pytest.approx(math.pi / 32.0)


def test_transform_round_trip(grid):
    f = np.random.default_rng(0).uniform(-1, 1, grid.size)
    F = ew.forward(grid, f)
    assert np.max(np.abs(ew.inverse(grid, F) - f)) < 1e-12
    assert np.sum(F**2) * math.pi / grid.length == pytest.approx(ew.lq_norm(grid, f, 2) ** 2, rel=1e-12)


def test_exp_profile_closed_form(grid):
    r = grid.radii
    F = ew.forward(grid, (r - 1) * np.exp(-(r - 1)) / r)
    lam = grid.frequencies
    mask = lam <= 8
    exact = math.sqrt(2 / math.pi) * 2 * lam / (1 + lam**2) ** 2
    assert np.max(np.abs(F[mask] - exact[mask])) < 1e-5


def test_wrong_length_rejected(grid):
    with pytest.raises(ValueError):
        ew.forward(grid, np.zeros(10))


def test_projections_sum(grid):
    f = ew.gaussian_bump(grid, 1.0, 3.0, 0.5)
    total = ew.lp_project(grid, f, 2.0, "leq") + ew.lp_project(grid, f, 2.0, "gt")
    assert np.max(np.abs(total - f)) < 1e-12
    with pytest.raises(ValueError):
        ew.lp_project(grid, f, 2.0, "middle")


def test_half_wave_unitary(grid):
    f = ew.gaussian_bump(grid)
    g = ew.half_wave(grid, f, 7.0)
    assert g.dtype == np.complex128
    w = grid.radii**2 * grid.spacing
    assert math.sqrt(np.sum(np.abs(g) ** 2 * w)) == pytest.approx(ew.lq_norm(grid, f, 2), rel=1e-12)


def test_linear_energy_conserved(grid):
    u0 = ew.gaussian_bump(grid)
    u1 = np.zeros(grid.size)
    e0 = ew.energy(grid, u0, u1) - 0.25 * ew.lq_norm(grid, u0, 4) ** 4
    u, ut = ew.wave_propagate(grid, u0, u1, 5.0)
    e1 = ew.energy(grid, u, ut) - 0.25 * ew.lq_norm(grid, u, 4) ** 4
    assert e1 == pytest.approx(e0, rel=1e-10)


def test_solve_conserves_energy(grid):
    u0 = ew.gaussian_bump(grid, 1.0, 3.0, 0.5)
    out = ew.solve(grid, u0, np.zeros(grid.size), dt=1e-3, T=1.0, sample_every=100)
    assert out["u"].shape == (11, grid.size)
    e = [ew.energy(grid, u, ut) for u, ut in zip(out["u"], out["ut"])]
    assert max(abs(x - e[0]) for x in e) / e[0] < 1e-6


def test_truncation_error(grid):
    u0 = ew.gaussian_bump(grid)
    with pytest.raises(ew.TruncationError):
        ew.solve(grid, u0, np.zeros(grid.size), T=40.0)


def test_kernel_scaling():
    a = ew.kernel(2.0, 1.5, 2.0, 3.0)
    b = 8 * (2 / 3) * (1 / 2) * ew.wholespace_kernel(3.0, 2.0, 4.0)
    assert abs(a - b) <= 1e-8 * abs(a)


def test_dispersive_probe():
    grid = ew.Grid(64.0, 4096)
    f = ew.dipole_block(grid, 1.0, 0.0)
    out = ew.dispersive_probe(grid, 1.0, f, [1, 2, 4, 8, 16, 32])
    assert len(out["sup_norm"]) == 6
    assert -1.3 < out["slope"] < -0.7


def test_ftm_small():
    grid = ew.Grid(16.0, 1024)
    u0 = ew.rough_profile(grid, center=3.0, halfwidth=1.5)
    out = ew.run_ftm(grid, u0, np.zeros(grid.size), J=3, T=1.0, dt=1 / 256, sample_every=4, track_direct=True)
    assert out["T"] == 1.0
    assert out["recombine_error"] < 1e-10
    assert out["E_T"] >= out["E0"]


def test_run_experiment_selftest():
    manifest, tables = ew.run_experiment("selftest", json.dumps({"selftest": {"fields": 3}}))
    m = json.loads(manifest)
    assert m["passed"] is True
    assert tables["selftest"].splitlines()[0] == "field,roundtrip_residual,parseval_residual,pass"
    assert "selftest" in ew.subcommands
    with pytest.raises(ew.ConfigError):
        ew.run_experiment("selftest", json.dumps({"selftest": {"bogus": 1}}))
