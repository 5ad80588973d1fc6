"""Exception types shared across the package.

Each class carries the CLI exit code it maps to, so the command-line layer can
translate any failure without a lookup table.
"""


class DDAQCError(Exception):
    exit_code = 2


class ParameterError(DDAQCError, ValueError):
    """A numeric argument violates an operation's precondition."""


class DimensionError(DDAQCError, ValueError):
    """Operands act on different numbers of qubits."""


class PauliParseError(DDAQCError, ValueError):
    pass


class UnsupportedTermError(DDAQCError, ValueError):
    """A Hamiltonian term falls outside what an operation can handle."""


class NotALogicalError(DDAQCError, ValueError):
    """The operator anticommutes with at least one stabilizer generator."""


class InvalidPulseError(DDAQCError, ValueError):
    pass


class CodeInconsistencyError(DDAQCError):
    exit_code = 1


class ResourceError(DDAQCError, RuntimeError):
    """A brute-force enumeration or dense simulation would exceed its budget."""

    exit_code = 3
