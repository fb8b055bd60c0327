"""Exception types shared across the package."""


class SwldpcError(Exception):
    """Base class for structured errors raised by this package."""


class DegenerateChannelError(SwldpcError):
    """Channel parameters make the requested quantity undefined."""


class InfeasiblePlanError(SwldpcError):
    """Rate targets admit no valid code plan; message names the violated bound."""


class ConstructionError(SwldpcError):
    """LDPC matrix construction could not satisfy its degree constraints."""


class UnsupportedModelError(SwldpcError):
    """Markov model falls outside the supported class for this operation."""


class DecodingFailureError(SwldpcError):
    """Evidence handed to a decoder is internally inconsistent (zero total mass)."""


class MalformedStreamError(SwldpcError):
    """Encoded streams carry contradictory evidence for the same position."""


class ConfigError(SwldpcError):
    """Simulation config file is missing keys or holds invalid values."""
