"""Exception hierarchy for condtail."""


class CondTailError(Exception):
    """Base class for all package errors."""


class DomainError(CondTailError, ValueError):
    """An argument lies outside the domain of a function."""


class DataError(CondTailError, ValueError):
    """Input data violates the dataset contract (e.g. non-positive responses)."""


class EmptyWindow(CondTailError):
    """No design point falls in the ball B(t, h)."""


class InsufficientData(CondTailError):
    """k is not smaller than the number of responses in the window."""


class NonPositiveResponse(CondTailError, ValueError):
    """An order statistic needed for a log-spacing is <= 0."""


class DegenerateWeights(CondTailError):
    """The weights sum to zero so the weighted ratio is undefined."""


class IdenticalSchemes(CondTailError):
    """Two weight schemes coincide where distinct schemes are required."""


class EqualBiases(CondTailError):
    """Equal bias coefficients; no combination cancels the bias."""


class MissingRho(CondTailError):
    """A bias correction was requested without a second-order parameter."""


class SingularParameter(CondTailError):
    """A closed-form coefficient is evaluated at its pole."""


class NoFeasiblePair(CondTailError):
    """No (h, k) candidate pair is feasible on every grid point."""


class TooFewSpacings(CondTailError):
    """Too few spacings for the requested number of chi-square cells."""


class NotAPerfectPower(CondTailError, ValueError):
    """A lattice design needs n to be a perfect p-th power."""


class SpecError(CondTailError, ValueError):
    """A simulation spec failed validation; ``field`` names the culprit."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
