"""Exception types shared across the package."""


class BasisMismatchError(ValueError):
    """Two words (or graphs) over different bases were combined."""


class LetterRangeError(ValueError):
    """A letter index lies outside +-rank or is zero."""


class FileFormatError(ValueError):
    """A subgroup, table, or graph file could not be parsed."""


class AdmissibilityError(ValueError):
    """A weight system violates a matching equation.

    Carries the generator index and the lens (canonical word tuple) of the
    first violated row, so callers can name the failing constraint.
    """

    def __init__(self, generator, lens, lhs, rhs):
        self.generator = generator
        self.lens = lens
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(
            f"matching equation violated for generator {generator}, "
            f"lens {lens}: {lhs} != {rhs}"
        )


class InfeasibleKernelError(ValueError):
    """No nonnegative rational kernel point exists near the target vector."""
