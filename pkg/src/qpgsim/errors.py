"""Exception types shared across the simulator."""


class QPGError(Exception):
    """Base class for all simulator errors."""


class OutOfValidityRange(QPGError, ValueError):
    """A dispersion model was evaluated outside its fitted range."""

    def __init__(self, material, axis, value, bounds):
        self.material = material
        self.axis = axis
        self.value = value
        self.bounds = tuple(bounds)
        super().__init__(
            f"{material}: {axis}={value!r} outside validity range "
            f"[{self.bounds[0]}, {self.bounds[1]}]"
        )


class MaterialFileError(QPGError, ValueError):
    pass


class NoRoot(QPGError):
    pass


class GridNotConverged(QPGError):
    pass


class FitFailed(QPGError):
    pass


class NumericalFailure(QPGError):
    pass


class TargetUnreachable(QPGError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class TruncationInsufficient(QPGError):
    pass


class MonteCarloUnderflow(QPGError):
    pass


class InvalidOrdering(QPGError, ValueError):
    pass


class ConfigError(QPGError, ValueError):
    """Invalid run configuration; ``key`` is the offending key path."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
