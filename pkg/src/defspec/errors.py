"""Exception hierarchy shared by all modules."""


class DefspecError(Exception):
    """Base class for every error raised by the toolkit."""


class InputError(DefspecError, ValueError):
    """An argument is outside its documented domain."""


class PoleError(InputError):
    """A transform was evaluated at its pole."""


class ConvergenceError(DefspecError, ArithmeticError):
    """An iteration hit its cap before converging.

    ``index`` identifies the eigenvalue (or iterate) that failed.
    """

    def __init__(self, msg, index=None):
        super().__init__(msg)
        self.index = index


class InfeasibleError(DefspecError, ValueError):
    """The constraint set is empty (e.g. ``t`` outside the numerical range)."""


class DegeneratePairError(InputError):
    """Two eigenvalues that must be distinct coincide."""


class UnsupportedModelError(DefspecError, NotImplementedError):
    """The requested operation has no implementation for this model."""


class IncompleteWindowError(DefspecError, ValueError):
    """A query reaches outside the window on which a spectrum is complete."""


class InsufficientWindowError(IncompleteWindowError):
    """Too few eigenvalues in the window to answer the query reliably."""
