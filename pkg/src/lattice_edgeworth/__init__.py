"""Edgeworth expansions with trigonometric corrections for sums of bounded integer variables."""

from .conditions import (
    DiagnosticReport,
    llt_diagnostic,
    order_r_diagnostic,
    prokhorov_diagnostic,
    quantitative_prokhorov,
    superstable_diagnostic,
    uniformity_diagnostic,
)
from .edgeworth import classical_density, edgeworth_data, hermite
from .estimators import EdgeworthDensity
from .exact_dist import Model, Pmf, iid_model, mod_marginal, sequence_model, sum_pmf, uniform_distance
from .exceptions import LatticeEdgeworthError, ResourceGuardError, ValidationError
from .experiments import ErrorTableRow, error_table, rate_fit
from .lattice_rv import IntegerRV, bernoulli, char_fn, rademacher, uniform_on
from .models import ModelConfig, build_model
from .resonance import ResonantPoint, resonant_set, threshold_R
from .series import TruncatedSeries
from .trig_expansion import (
    GeneralizedExpansion,
    generalized_density,
    leading_correction,
    order1_density,
    order2_density,
    resonant_term,
)

__version__ = "0.1.0"

__all__ = [
    "DiagnosticReport",
    "EdgeworthDensity",
    "ErrorTableRow",
    "GeneralizedExpansion",
    "IntegerRV",
    "LatticeEdgeworthError",
    "Model",
    "ModelConfig",
    "Pmf",
    "ResonantPoint",
    "ResourceGuardError",
    "TruncatedSeries",
    "ValidationError",
    "bernoulli",
    "build_model",
    "char_fn",
    "classical_density",
    "edgeworth_data",
    "error_table",
    "generalized_density",
    "hermite",
    "iid_model",
    "leading_correction",
    "llt_diagnostic",
    "mod_marginal",
    "order1_density",
    "order2_density",
    "order_r_diagnostic",
    "prokhorov_diagnostic",
    "quantitative_prokhorov",
    "rademacher",
    "rate_fit",
    "resonant_set",
    "resonant_term",
    "sequence_model",
    "sum_pmf",
    "superstable_diagnostic",
    "threshold_R",
    "uniform_distance",
    "uniform_on",
    "uniformity_diagnostic",
]
