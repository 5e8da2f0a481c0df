"""Parallel Schwarz (ddCOSMO) solver for the Laplace Dirichlet problem on
unions of overlapping disks, with tools to check the trace and spectral
estimates of the two-disk Dirichlet-to-Dirichlet operator.

Modules
-------
geometry        disks, intersection angles, bipolar coordinates
quadrature      periodic, arc and line rules; precision profiles
disk_harmonic   Fourier traces, harmonic extension, Poisson integral
strip           strip Poisson kernel, its symbol, Hardy-space norms
dtd             Dirichlet-to-Dirichlet maps (Galerkin, strip and Nystrom routes)
schwarz         block-Jacobi Schwarz sweeps, direct solve, error studies
spectral_theory closed-form bounds and numerical spectra
config, cli     TOML configuration and the ``ddcosmo`` command
"""
from .errors import (AliasRisk, ConfigError, DdcosmoError, DegenerateGeometry, EigenFailure,
                     GridMismatch, NearBoundary, NearBoundaryZ0, NegativeNorm, NumericalFailure,
                     OutOfDomain, OutsideDisk, QuadratureUnconverged, SolveFailure,
                     StagnationAtMachineEps)
from .geometry import Disk, TwoDiskGeometry, intersect, pair_from_angles, symmetric_pair
from .quadrature import PROFILES, get_profile
from .disk_harmonic import GlobalTrace, TraceFunction, fourier_coefficients
from .dtd import apply_dtd, assemble_block, assemble_gamma, gamma_pair
from .schwarz import ProblemSpec, iterate, solve_direct, sweep
from .spectral_theory import TheoryReport, eigenpair, spectrum, theory

__version__ = "0.1.0"

__all__ = [
    "AliasRisk", "ConfigError", "DdcosmoError", "DegenerateGeometry", "EigenFailure",
    "GridMismatch", "NearBoundary", "NearBoundaryZ0", "NegativeNorm", "NumericalFailure",
    "OutOfDomain", "OutsideDisk", "QuadratureUnconverged", "SolveFailure",
    "StagnationAtMachineEps",
    "Disk", "TwoDiskGeometry", "intersect", "pair_from_angles", "symmetric_pair",
    "PROFILES", "get_profile", "GlobalTrace", "TraceFunction", "fourier_coefficients",
    "apply_dtd", "assemble_block", "assemble_gamma", "gamma_pair",
    "ProblemSpec", "iterate", "solve_direct", "sweep",
    "TheoryReport", "eigenpair", "spectrum", "theory",
]
