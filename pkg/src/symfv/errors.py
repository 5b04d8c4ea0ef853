"""Exception types shared across the package."""


class SymfvError(Exception):
    pass


class FieldMismatchError(SymfvError):
    """Operands live in incompatible number fields."""


class ResourceLimitError(SymfvError):
    """A configured cap (field degree, group closure size, ...) was exceeded."""


class DegenerateInputError(SymfvError):
    """Input points do not affinely span 3-space."""


class SingularMatrixError(SymfvError):
    pass


class UnknownKeyError(SymfvError):
    """Catalog key is not registered."""


class ParameterError(SymfvError):
    """Catalog or group parameter out of range."""


class NoMatchingTargetError(SymfvError):
    """No facet/vertex orbit matches the requested degree and orbit size."""


class StabilizerIncompatibleError(SymfvError):
    """Half-prism requires the facet stabilizer order to divide half the degree."""


class PlacementFailedError(SymfvError):
    """Guess-and-verify placement exhausted its attempt budget."""


class NotSymmetricError(SymfvError):
    pass


class NotAMemberError(SymfvError):
    """Requested f-vector is rejected by the classifier."""


class VerificationError(SymfvError):
    """A self-check that should always pass failed (internal bug guard)."""
