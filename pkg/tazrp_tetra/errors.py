class TazrpError(Exception):
    """Base class for errors raised by `tazrp_tetra`."""


class NonExactDivision(TazrpError, ArithmeticError):
    """A polynomial division that must be exact left a remainder."""


class ShapeMismatch(TazrpError, ValueError):
    """Operators or states on incompatible tensor products."""


class Divergent(TazrpError):
    """A trace over the untruncated Fock space does not converge."""


class UnboundedSum(TazrpError):
    """A boundary sum of the layer transfer matrix did not terminate within
    the configured exploration bound."""


class KernelNotOneDimensional(TazrpError):
    """The Markov matrix of a sector has a kernel of dimension other than
    one."""


class Unstable(TazrpError):
    """The matrix product trace changed between consecutive cutoffs."""

    def __init__(self, message: str, cutoff: int) -> None:
        super().__init__(message)
        self.cutoff = cutoff
