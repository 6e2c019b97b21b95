"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument lies outside the range an operation is defined for."""


class ContractViolation(ValueError):
    """Inputs are structurally incompatible (e.g. mismatched dimensions)."""


class VerificationFailure(RuntimeError):
    """A numerical verification report contains a failed check."""
