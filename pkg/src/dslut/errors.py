"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class DslutError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(DslutError):
    """Caller passed arguments that violate an operation's contract."""


class ParseError(DslutError):
    """Malformed input file (netlist, library, bit assignment, arch model).

    `line` is the 1-based line number when known, else None.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class InternalError(DslutError):
    """An invariant the implementation relies on was violated."""
