"""Exception types shared across the package."""


class RationalityError(ValueError):
    """A polynomial expected to split over F_{p^2} failed to do so."""


class KernelError(ValueError):
    """A claimed kernel x-coordinate is not a 2-torsion root of the domain curve."""


class InvalidCurveError(ValueError):
    """Curve coefficients with vanishing discriminant (singular cubic)."""


class GraphIntegrityError(RuntimeError):
    """A structural invariant of the isogeny graph or its derived chain failed."""


class AmbiguousStationaryError(RuntimeError):
    """The eigenvalue-1 eigenspace of a walk matrix is not one-dimensional."""

    def __init__(self, dimension: int):
        self.dimension = dimension
        super().__init__(
            f"stationary vector is not unique: eigenspace of eigenvalue 1 has dimension {dimension}"
        )
