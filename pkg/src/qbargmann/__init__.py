"""q-deformed true-polyanalytic Bargmann transforms, coherent states and kernels.

Submodules: ``qcore`` (q-Pochhammer symbols and basic series), ``qpolys``
(q-orthogonal polynomials), ``cstates`` (coefficients, eigenfunctions and
measures), ``kernel`` (reproducing kernel), ``transform`` (the integral
transform), ``identities`` (randomized identity checks), ``classical``
(q = 1 reference objects) and ``cli``.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    Divergence,
    DomainError,
    PoleError,
    QSeriesError,
    TruncationExceeded,
    UnknownIdentity,
)
from .qcore import (  # noqa: E402
    DEFAULT_POLICY,
    ComplexPoint,
    QParam,
    TruncationPolicy,
    phi21,
    phi32,
    qbinomial,
    qpoch_finite,
    qpoch_infinite,
)
from .cstates import (  # noqa: E402
    coeff_h,
    coherent_state_eval,
    eigenfunction_phi,
    measure_density_mu,
    measure_density_nu,
    normalization_N,
    state_coefficients,
    weight_omega,
)
from .kernel import kernel, normalized_overlap, overlap_closed, overlap_series  # noqa: E402
from .transform import (  # noqa: E402
    SignalFunction,
    bargmann_transform,
    builtin_signal,
    transform_kernel,
)

__all__ = [
    "__version__",
    "Divergence", "DomainError", "PoleError", "QSeriesError", "TruncationExceeded",
    "UnknownIdentity",
    "DEFAULT_POLICY", "ComplexPoint", "QParam", "TruncationPolicy",
    "phi21", "phi32", "qbinomial", "qpoch_finite", "qpoch_infinite",
    "coeff_h", "coherent_state_eval", "eigenfunction_phi", "measure_density_mu",
    "measure_density_nu", "normalization_N", "state_coefficients", "weight_omega",
    "kernel", "normalized_overlap", "overlap_closed", "overlap_series",
    "SignalFunction", "bargmann_transform", "builtin_signal", "transform_kernel",
]
