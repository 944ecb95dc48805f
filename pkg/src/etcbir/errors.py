"""Exception types shared across the package."""


class EtcbirError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(EtcbirError, ValueError):
    """Image too small for 16x16 blocking, or not block-aligned where required."""


class ValidationError(EtcbirError, ValueError):
    """Invalid manifest, config, or artifact contents."""


class ArtifactMismatchError(ValidationError):
    """An index was asked to work with a codebook it was not built from."""
