class GultraError(ValueError):
    """Base class for rejected inputs."""


class DomainMismatch(GultraError, TypeError):
    """Operands live in different value domains."""


class NotAGroup(GultraError):
    """Multiplication requested over an exponent set with no addition."""


class AxiomViolation(GultraError):
    """A table failed the axioms it was declared to satisfy."""


class CertificateFailure(AssertionError):
    """A computed object failed a guarantee that is supposed to be a theorem."""
