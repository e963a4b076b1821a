"""Coalescence cusp conditions, local wave functions, cusp-constrained basis
functions and a radial eigenvalue solver with Robin boundary conditions."""

from ._cuspbc import (
    AsymptoticBoundary,
    BasisKind,
    CoalescencePair,
    ConvergenceError,
    CuspBasis,
    DomainError,
    Environment,
    Error,
    FitError,
    InputError,
    LocalWavefunction,
    NumericalError,
    ParityError,
    ParseError,
    PointCharge,
    RadialProblem,
    RegimeError,
    RobinBoundary,
    SpinChannel,
    SystemAsymptotics,
    build_basis,
    cusp_a,
    cusp_b,
    cusp_limits,
    cusp_series,
    electron_electron,
    electron_nucleus,
    kummer_1f1,
    log_grid,
    make_local_wavefunction,
    robin_inner,
    robin_outer,
    run_cli,
    solve_matrix,
    solve_shooting,
    spherical_average_w,
    validity_radius,
    verify_cusp_orders,
    w0,
    w_exact,
    w_multipole,
)

__version__ = "0.1.0"
