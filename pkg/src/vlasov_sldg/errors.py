"""Exception types raised across the solver."""


class VlasovError(Exception):
    """Base class for all solver errors."""


class InvalidArgumentError(VlasovError, ValueError):
    pass


class OutOfDomainError(VlasovError, ValueError):
    pass


class IncompatibleDensityError(VlasovError, ValueError):
    """Charge density does not integrate to the neutralizing background."""


class InsufficientDataError(VlasovError, ValueError):
    pass


class ConfigError(VlasovError, ValueError):
    """Bad run configuration; carries the offending key and line if known."""

    def __init__(self, message, key=None, line=None):
        where = []
        if key is not None:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.key = key
        self.line = line


class BlowUpError(VlasovError, RuntimeError):
    """Non-finite values appeared in the distribution function."""

    def __init__(self, step, t):
        super().__init__(f"non-finite values in f at step {step} (t={t:.6g})")
        self.step = step
        self.t = t
