"""Exception taxonomy shared by all modules."""


class GdrqError(Exception):
    """Base class for every error raised by this package."""


class SizeError(GdrqError, ValueError):
    """Mismatched register sizes, qubit counts, or array dimensions."""


class TargetError(GdrqError, IndexError):
    """Target/control qubit out of range, duplicated, or overlapping."""


class CapacityError(GdrqError, ValueError):
    """A hard resource cap was exceeded (dense-matrix size, shell capacity)."""


class ValidationError(GdrqError, ValueError):
    """An argument or configuration value fails its documented contract."""


class ImpossibleOutcomeError(GdrqError, RuntimeError):
    """Post-selection on a measurement outcome of (numerically) zero probability."""


class PreparationError(GdrqError, RuntimeError):
    """State preparation cannot succeed or exhausted its attempt budget."""


class AnnihilatedStateError(GdrqError, RuntimeError):
    """An operator maps the state to (numerically) zero, so no output state exists."""


class PoleCrossingError(GdrqError, RuntimeError):
    """The response dressing denominator vanishes on the energy grid."""


class DegenerateSpectrumError(GdrqError, RuntimeError):
    """A spectrum has no usable interior peak (boundary maximum or uncrossed half height)."""


class SchemaError(GdrqError, ValueError):
    """A structured input file violates its schema."""
