"""Exception types shared across the package."""


class PseudoPureError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateInitial(PseudoPureError, ValueError):
    """The reference state is already pseudo-pure, so epsilon is undefined."""


class IndexOutOfRange(PseudoPureError, IndexError):
    pass


class Infeasible(PseudoPureError, ValueError):
    """No real transfer angle produces the requested populations."""


class NonDiagonalInput(PseudoPureError, ValueError):
    pass


class OptimizerFailure(PseudoPureError, RuntimeError):
    pass


class UnsupportedSpec(PseudoPureError, ValueError):
    """A search specification combination that has no defined enumeration."""
