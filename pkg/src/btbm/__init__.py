"""Simulation and numerical checks for Brownian-time Brownian motion."""

from .errors import (
    BTBMError,
    DegenerateClockError,
    InconclusiveTestError,
    InvalidArgumentError,
    NumericalFailureError,
    OnDiagonalDivergenceError,
)
from .kernel import QuadratureConfig, cdf, cdf_function, density, moment, on_diagonal
from .measure import (
    ComVerifyConfig,
    com_distribution_test,
    conditional_weight_mean_test,
    rn_weight,
    rn_weight_ddim,
    rn_weight_quartic,
)
from .paths import InnerPath, LevelSampler, Partition, make_partition, sample_inner_path
from .processes import ProcessVariant, decompose_excursions, sample_terminal, simulate, simulate_batch
from .report import EstimateReport

__version__ = "0.1.0"
