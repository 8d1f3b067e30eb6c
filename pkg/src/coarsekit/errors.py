class CoarseError(Exception):
    """Base class for all coarsekit errors."""


class ValidationError(CoarseError, ValueError):
    """An input object violates a type invariant."""


class PreconditionError(CoarseError, ValueError):
    """A construction's hypothesis does not hold on the given instance."""


class PostconditionError(CoarseError):
    """A runtime-verified conclusion failed on the given instance."""


class InternalInconsistencyError(PostconditionError):
    """A conclusion that should be forced by its hypotheses failed; indicates a bug."""


class PseudometricWarning(UserWarning):
    pass
