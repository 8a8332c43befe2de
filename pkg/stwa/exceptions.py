class InvalidArgument(ValueError):
    """A caller handed an operation arguments outside its contract."""


class InvariantViolation(RuntimeError):
    """A structural property that construction guarantees did not hold."""


class IndexFormatError(InvalidArgument):
    """An index file is not a readable STWA1 container."""
