"""Moving-window estimation of the conditional tail index.

Weighted sums of rescaled log-spacings computed on the responses whose
covariates fall in a ball B(t, h), with Hill, Zipf and bias-reducing weights,
their asymptotic bias/variance calculus, (h, k) selection, exponentiality
diagnostics and simulation tools.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    CondTailError, DataError, DegenerateWeights, DomainError, EmptyWindow, EqualBiases,
    IdenticalSchemes, InsufficientData, MissingRho, NoFeasiblePair, NonPositiveResponse,
    NotAPerfectPower, SingularParameter, SpecError, TooFewSpacings,
)
from .model import (  # noqa: F401
    AsymptoticSpec, Dataset, DesignSpec, LogSpacings, MetricSpec, SimSpec, TailFit,
    WeightScheme, Window,
)
from .window import log_spacings, phi, select_window  # noqa: F401
from .weights import alpha_unbias, combine, hill, hz, opt, validate_weight, zipf  # noqa: F401
from .estimator import (  # noqa: F401
    confidence_interval, estimate, estimate_extended, estimate_family, estimate_hill,
    estimate_zipf, zipf_least_squares,
)
from .asymptotics import (  # noqa: F401
    ab_av, asymptotic_law, frontier_rho1, frontier_rho2, region_classify,
)
from .selection import select_h_k  # noqa: F401
from .diagnostics import chi2_exponential, exponential_qq, theoretical_spacing_mean  # noqa: F401
