"""Exception hierarchy.

Every mathematical violation derives from :class:`Violation` so the CLI can
map it to exit code 1; malformed input raises :class:`FormatError` (exit 2).
"""


class HptError(Exception):
    pass


class FormatError(HptError):
    pass


class Violation(HptError):
    pass


class ModuleMismatch(Violation):
    pass


class RingMismatch(ModuleMismatch):
    pass


class ComplexMismatch(Violation):
    pass


class NotADifferential(Violation):
    pass


class MaurerCartanViolation(Violation):
    def __init__(self, message, degree=None, block=None):
        super().__init__(message)
        self.degree = degree
        self.block = block


class WindowTooSmall(Violation):
    pass


class UniversalPropertyViolation(Violation):
    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class NotInvertible(Violation):
    pass


class CommutatorObstruction(Violation):
    def __init__(self, message, generator=None, degree=None, block=None):
        super().__init__(message)
        self.generator = generator
        self.degree = degree
        self.block = block


class SdrViolation(Violation):
    def __init__(self, relations):
        # relations: list of (name, witness GradedMap)
        self.relations = list(relations)
        names = ", ".join(name for name, _ in self.relations)
        super().__init__(f"violated relations: {names}")

    @property
    def names(self):
        return [name for name, _ in self.relations]


class NaturalityViolation(Violation):
    def __init__(self, generator):
        super().__init__(f"square is not natural on generator {generator}")
        self.generator = generator


class CompatibilityViolation(Violation):
    pass


class NotNilpotent(Violation):
    def __init__(self, degree):
        super().__init__(f"operator is not nilpotent in degree {degree}")
        self.degree = degree


class FunctorialityViolation(Violation):
    pass


class EquivalenceViolation(Violation):
    pass
