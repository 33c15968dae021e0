"""Exception types raised across the package."""


class GeometryError(ValueError):
    """Sampling parameters violate parity, positivity or support constraints."""


class WeightDegenerate(ValueError):
    """The angular mean of a weight (nearly) vanishes where it is divided by."""


class ConfigError(ValueError):
    """An experiment or phantom description is inconsistent."""


class NoiseError(ValueError):
    """Poisson noise was requested on data with negative samples."""
