"""Exception types shared across the package."""


class HermiteSqueezedError(Exception):
    """Base class for every error this package raises deliberately."""


class NonPositiveNorm(HermiteSqueezedError):
    """The requested parameter combination describes a vanishing state."""


class UnsupportedMoment(HermiteSqueezedError):
    """Moment order outside the set the closed forms cover (l + k > 4)."""


class ZeroMeanPhoton(HermiteSqueezedError):
    """Mean photon number is numerically zero; Q and g2 are undefined."""


class DegenerateDenominator(HermiteSqueezedError):
    """The printed quadrature-distribution form degenerates at these parameters."""


class NonConvergence(HermiteSqueezedError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class UnphysicalReservoir(HermiteSqueezedError):
    """Reservoir correlation violates |M|^2 <= nbar (nbar + 1)."""


class NearSingularD(HermiteSqueezedError):
    """The evolved-state denominator D = R1^2 - |R3|^2 is numerically singular."""


class CutoffTooSmall(HermiteSqueezedError):
    """Fock-space truncation cannot hold the requested state."""


class TraceDrift(HermiteSqueezedError):
    """Master-equation integration lost more trace than the allowed drift."""
