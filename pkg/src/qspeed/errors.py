"""Exception types shared across the package."""


class ContractViolationError(ValueError):
    """An argument broke a documented precondition."""


class InvalidStateError(ContractViolationError):
    """A Bloch vector or density matrix fails its validity bounds."""


class NumericalFailureError(RuntimeError):
    """A numerical routine failed to converge or returned garbage."""
