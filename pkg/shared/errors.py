class DomainError(ValueError):
    """A parameter lies outside the domain an operation is defined on."""

    pass


class InfeasibleError(DomainError):
    """The layered power allocation cannot satisfy the decodability condition."""

    pass


class ConfigurationError(Exception):
    pass


class UsageError(Exception):
    """Command-line misuse: bad flag values, missing input files."""

    pass
