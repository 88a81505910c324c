"""Exception hierarchy shared by all hartley3d modules.

Every library-raised error derives from Hartley3dError so callers (and the
CLI) can distinguish data/validation failures from programming errors.
"""


class Hartley3dError(Exception):
    """Base class for all errors raised by this package."""


class SingularParameter(Hartley3dError, ValueError):
    """A transform parameter that would produce a singular matrix (beta = 0)."""


class NonInvertibleGram(Hartley3dError, ValueError):
    """The Gram matrix T @ T.T (or a direct/inverse product) is singular."""


class DimensionMismatch(Hartley3dError, ValueError):
    """Operand shapes are incompatible with the requested operation."""


class EmptyTrainingSet(Hartley3dError, ValueError):
    """Zigzag training was requested with no training blocks."""


class NonIntegralRetention(Hartley3dError, ValueError):
    """A bitrate that does not correspond to a whole number of coefficients."""


class ConfigMismatch(Hartley3dError, ValueError):
    """Decode-side configuration disagrees with the encoded stream."""


class InvalidConfiguration(Hartley3dError, ValueError):
    """A codec or transform configuration rejected by validation."""


class MalformedSidecar(Hartley3dError, ValueError):
    """A volume sidecar file is missing required keys or cannot be parsed."""


class LengthMismatch(Hartley3dError, ValueError):
    """Payload or argument lengths disagree with the declared metadata."""


class SliceTooSmall(Hartley3dError, ValueError):
    """A volume slice is smaller than the SSIM analysis window."""


class StreamFormatError(Hartley3dError, ValueError):
    """A compressed stream has a bad magic, version, or truncated payload."""
