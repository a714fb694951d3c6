"""Exception hierarchy shared by all pencilhyp modules."""


class PencilError(Exception):
    """Base class for every error raised by pencilhyp."""


class NonConvergence(PencilError):
    pass


class DegreeExceeded(PencilError):
    pass


class Singular(PencilError):
    pass


class NotFullySecondOrder(Singular):
    """The time-time block of the principal part is numerically singular."""


class SingularGauge(Singular):
    pass


class CorrespondenceViolation(PencilError):
    pass


class SpectralInconsistency(PencilError):
    """Kernel dimensions disagree with the eigenvalue grouping."""


class UnsupportedDimension(PencilError):
    pass


class Defective(PencilError):
    """Some eigenvalue has geometric multiplicity below its algebraic one."""


class NoAdmissiblePartition(PencilError):
    pass


class ZeroSpeed(PencilError):
    pass


class ComplexSpeeds(PencilError):
    pass


class ComplexRoots(PencilError):
    pass


class UnsatisfiedCaseCondition(PencilError):
    pass


class SchemaError(PencilError):
    def __init__(self, message, path=()):
        self.path = tuple(path)
        where = "/".join(str(p) for p in self.path) or "<root>"
        super().__init__(f"{where}: {message}")
