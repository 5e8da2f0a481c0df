"""Exception and warning types shared across the package."""


class DdcosmoError(Exception):
    """Base class for all package errors."""


class DegenerateGeometry(DdcosmoError):
    """Two circles are tangent, disjoint, or one contains the other."""


class OutOfDomain(DdcosmoError):
    """A point lies outside the domain of a coordinate map."""


class OutsideDisk(DdcosmoError):
    """An evaluation point lies outside the open disk."""


class GridMismatch(DdcosmoError):
    """Two strip samples live on different line rules."""


class NegativeNorm(DdcosmoError):
    """A quadratic form that should be nonnegative came out negative."""


class QuadratureUnconverged(DdcosmoError):
    """Refining a quadrature rule changed the result beyond tolerance."""


class SolveFailure(DdcosmoError):
    """A linear solve left a residual above the acceptance threshold."""


class EigenFailure(DdcosmoError):
    """A dense eigensolver did not converge."""


class ConfigError(DdcosmoError):
    """Invalid command-line or configuration-file input."""


class NumericalFailure(DdcosmoError):
    """A numerical check failed at run time (used by the CLI)."""


class AliasRisk(UserWarning):
    """Too few quadrature nodes for the requested bandwidth."""


class NearBoundary(UserWarning):
    """Poisson-integral evaluation too close to the circle for the rule."""


class NearBoundaryZ0(UserWarning):
    """Eigenfunction parameter close to the edge of the dual strip."""


class StagnationAtMachineEps(UserWarning):
    """Iteration errors reached the round-off floor; ratios are noise."""
