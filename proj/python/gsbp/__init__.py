"""Global upwind summation-by-parts operators and IMEX time stepping."""

from ._core import (
    AdvDiffConfig,
    BurgersConfig,
    BurgersResult,
    CertificationReport,
    ConfigError,
    ConvergenceConfig,
    ConvergenceRow,
    ImexTableau,
    Mesh1D,
    OperatorSet,
    ReferenceElement,
    RunConfig,
    ScanStatus,
    SolutionKind,
    StabilityConfig,
    StabilityScanResult,
    Subcommand,
    Topology,
    build_lgl,
    convergence_csv,
    dispatch,
    is_stable,
    max_stable_dt,
    parse_config,
    parse_config_text,
    run_burgers_demo,
    run_convergence,
    run_scans,
    serialize,
    stability_csv,
    tableau,
    theorem_tau_floor,
    uniform_mesh,
    verify_axioms,
)

__all__ = [name for name in dir() if not name.startswith("_")]
