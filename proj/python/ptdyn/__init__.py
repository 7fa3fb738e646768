"""Low-rank mixed-state quantum propagation.

Parallel-transport and Schroedinger gauge dynamics for density matrices
rho = phi sigma phi^H under time-dependent (optionally density-dependent)
Hamiltonians, discretized with implicit-midpoint integrators whose per-step
fixed points are solved by Anderson mixing.
"""

from _ptdyn import (  # noqa: F401
    BoundReport,
    ConfigurationError,
    ConservationSeries,
    Grid1D,
    HamiltonianModel,
    LaplacianScheme,
    LatticeHamiltonian,
    LowRankInit,
    ModelKind,
    ModelParams,
    NormKind,
    Quantity,
    Scheme,
    SolveReport,
    SolverConfig,
    SolverError,
    StateSample,
    StaticPotential,
    StepReport,
    Trajectory,
    TwoLevelScan,
    anderson_solve,
    build_grid,
    commutator_bounds,
    conservation_report,
    convergence_order,
    dense_density,
    dipole_moment,
    fermi_dirac_init,
    kinetic_matrix,
    load_trajectory,
    propagate,
    pt_im_step,
    relative_error,
    rhs_gauge,
    rhs_pt,
    rhs_sd,
    rhs_von_neumann,
    rk4_dense_step,
    save_trajectory,
    sd_im_step,
    two_level_adiabatic_scan,
)

__all__ = [name for name in dir() if not name.startswith("_")]
