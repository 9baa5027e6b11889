"""Exception hierarchy shared across the toolkit."""


class ParadoxLabError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(ParadoxLabError):
    """Shape/dimension mismatch or unsupported dimension."""


class ZeroNormError(ParadoxLabError):
    """A state vector with zero norm cannot be normalized."""


class DirectionError(ParadoxLabError):
    """Spin direction is not a unit vector."""


class HermiticityError(ParadoxLabError):
    """Matrix violates a required Hermitian structure."""


class UnitarityError(ParadoxLabError):
    """Matrix violates a declared unitary structure."""


class NumericalError(ParadoxLabError):
    """Numerical invariant violated (norm, trace, imaginary residue...)."""


class GeometryError(ParadoxLabError):
    """Invalid interference geometry (nonpositive length scale)."""


class DomainError(ParadoxLabError):
    """Argument outside the mathematical domain of an operation."""


class ResolutionError(ParadoxLabError):
    """Sampling grid too coarse or span too short for the requested profile."""


class BoostError(ParadoxLabError):
    """Boost velocity at or above the speed of light."""


class ConfigError(ParadoxLabError):
    """Malformed or invalid experiment configuration."""
