from numpy.linalg import LinAlgError


class ValidationError(ValueError):
    """
    Raised when an argument does not satisfy the shape or value requirements of an operation
    """


class DegenerateInputError(ValidationError):
    """
    Raised for all-zero inputs where a dominant direction or an SNR is undefined
    """


class DegenerateColumnError(DegenerateInputError):
    """
    Raised when a single column of an estimate (or of a filtered observation) is all zero

    Attributes:
        column: int
            0-based index of the offending column
    """

    def __init__(self, column: int, message: str = None):
        self.column = column
        super().__init__(message or f"Column {column} is all zero")


class PreconditionError(ValidationError):
    """
    Raised when the training design does not match what an operation assumes
    """


class IdentifiabilityError(PreconditionError):
    """
    Raised when (dims, method) violates the training design requirements

    Attributes:
        violations: list
            violated inequalities in readable form
        cell: str
            sweep cell or method the violation was found for
    """

    def __init__(self, violations: list, cell: str = None):
        self.violations = list(violations)
        self.cell = cell
        prefix = f"{cell}: " if cell else ""
        super().__init__(prefix + "; ".join(self.violations))


class ConfigError(ValidationError):
    """
    Raised for config files that can't be parsed or don't match the config schema
    """


class RankDeficiencyError(LinAlgError):
    """
    Raised when a least squares system has no unique solution

    Attributes:
        condition: str
            the violated singular value inequality
        step: str
            which algorithm step hit the deficient system (None outside of an algorithm)
    """

    def __init__(self, condition: str, step: str = None):
        self.condition = condition
        self.step = step
        prefix = f"Rank-deficient system at {step}: " if step else "Rank-deficient system: "
        super().__init__(prefix + condition)
