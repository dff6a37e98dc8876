"""Exception hierarchy shared by every module."""


class WafomError(Exception):
    """Base class; the CLI maps it to a nonzero exit code."""

    kind = "error"


class SpecMismatchError(WafomError, ValueError):
    """Operands built over different groups or with different shapes."""

    kind = "spec-mismatch"


class CapacityError(WafomError):
    """Requested enumeration exceeds the brute-force budget."""

    kind = "capacity"


class PreconditionError(WafomError, ValueError):
    """Parameters fall outside the range where a bound is valid."""

    kind = "precondition"


class NetFormatError(WafomError, ValueError):
    """Malformed net file."""

    kind = "net-format"


class CorruptGroupError(WafomError):
    """A point set that should be a subgroup is not one."""

    kind = "corrupt-group"
