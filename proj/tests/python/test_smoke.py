"""Smoke tests for the python bindings: the main operations round-trip
through numpy and reproduce the library's conservation and gauge behavior
at desk scale."""

import math

import numpy as np
import pytest

import ptdyn


@pytest.fixture(scope="module")
def small_model():
    grid = ptdyn.build_grid(1, 16)
    params = ptdyn.ModelParams()
    return grid, ptdyn.LatticeHamiltonian(grid, params)


def test_grid_and_kinetic(small_model):
    grid, model = small_model
    assert grid.n_points == 16
    assert grid.dx * grid.n_points == pytest.approx(2 * math.pi)
    k = np.asarray(model.kinetic)
    assert np.max(np.abs(k - k.conj().T)) < 1e-13
    ones = np.ones(16, dtype=complex)
    assert np.linalg.norm(k @ ones) < 1e-10


def test_hamiltonian_hermitian(small_model):
    _, model = small_model
    h = np.asarray(model.assemble(0.123))
    assert np.max(np.abs(h - h.conj().T)) <= 1e-13


def test_fermi_dirac_init(small_model):
    _, model = small_model
    init = ptdyn.fermi_dirac_init(model, beta=2.0, ne=3.0, rank=6)
    phi = np.asarray(init.phi0)
    assert np.allclose(phi.conj().T @ phi, np.eye(6), atol=1e-12)
    assert init.occupations.sum() == pytest.approx(3.0, abs=1e-10)
    assert 0.0 < min(init.occupations) and max(init.occupations) <= 1.0


def test_propagation_conserves_invariants(small_model):
    _, model = small_model
    init = ptdyn.fermi_dirac_init(model, beta=2.0, ne=3.0, rank=6)
    cfg = ptdyn.SolverConfig()
    traj = ptdyn.propagate(model, init, ptdyn.Scheme.PTIM, 0.01, 0.2, 1, cfg)
    series = ptdyn.conservation_report(traj)
    tr = np.asarray(series.tr_sigma)
    tr2 = np.asarray(series.tr_sigma2)
    assert np.max(np.abs(tr - tr[0])) < 1e-8
    assert np.max(np.abs(tr2 - tr2[0])) < 1e-7
    assert max(series.ortho_defect) < 1e-7
    assert all(r.converged for r in traj.reports)


def test_gauge_equivalence_of_densities(small_model):
    _, model = small_model
    init = ptdyn.fermi_dirac_init(model, beta=2.0, ne=3.0, rank=6)
    cfg = ptdyn.SolverConfig()
    cfg.tol = 1e-12
    pt = ptdyn.propagate(model, init, ptdyn.Scheme.PTIM, 1e-3, 0.05, 50, cfg)
    sd = ptdyn.propagate(model, init, ptdyn.Scheme.SDIM, 1e-3, 0.05, 50, cfg)
    rho_pt = np.asarray(pt.samples[-1].dense(ptdyn.Scheme.PTIM))
    rho_sd = np.asarray(sd.samples[-1].dense(ptdyn.Scheme.SDIM))
    assert np.linalg.norm(rho_pt - rho_sd) < 1e-5


def test_rhs_tangency(small_model):
    _, model = small_model
    init = ptdyn.fermi_dirac_init(model, beta=2.0, ne=3.0, rank=6)
    dphi, dsigma = ptdyn.rhs_pt(model, 0.3, init.phi0, init.sigma0())
    phi = np.asarray(init.phi0)
    assert np.max(np.abs(phi.conj().T @ np.asarray(dphi))) < 1e-12
    assert abs(np.trace(np.asarray(dsigma))) < 1e-12


def test_anderson_on_python_map():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((12, 12))
    a = 0.5 * (a + a.T)
    a *= 0.8 / np.max(np.abs(np.linalg.eigvalsh(a)))
    b = rng.standard_normal(12)
    x, report = ptdyn.anderson_solve(lambda v: a @ v + b, np.zeros(12))
    assert report.converged
    expected = np.linalg.solve(np.eye(12) - a, b)
    assert np.linalg.norm(x - expected) < 1e-8


def test_checkpoint_roundtrip(tmp_path, small_model):
    _, model = small_model
    init = ptdyn.fermi_dirac_init(model, beta=2.0, ne=3.0, rank=6)
    traj = ptdyn.propagate(model, init, ptdyn.Scheme.PTIM, 0.01, 0.05, 1,
                           ptdyn.SolverConfig())
    path = tmp_path / "traj.bin"
    ptdyn.save_trajectory(traj, path)
    loaded = ptdyn.load_trajectory(path)
    assert loaded.n_grid == traj.n_grid
    a = np.asarray(traj.samples[-1].orbitals)
    b = np.asarray(loaded.samples[-1].orbitals)
    assert np.array_equal(a, b)


def test_dipole_and_convergence_order(small_model):
    grid, model = small_model
    rho = np.diag(np.full(16, 0.5 + 0j))
    expected = 0.5 * sum(grid.coords)
    assert ptdyn.dipole_moment(grid, rho) == pytest.approx(expected)
    hs = [0.04, 0.02, 0.01]
    errs = [2.0 * h**2 for h in hs]
    assert ptdyn.convergence_order(hs, errs) == pytest.approx(2.0, abs=1e-10)
