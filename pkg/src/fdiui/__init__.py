"""Base-station-assisted inter-user interference suppression for full-duplex links."""

from .channel import (
    FadingSpec,
    LinkBatch,
    LinkRealization,
    deterministic_link,
    sample_rayleigh,
)
from .errors import (
    DegenerateChannelError,
    DomainError,
    EmptyRequestError,
    FdiuiError,
    IciError,
    InstabilityError,
    SolverError,
)
from .narrowband import PowerPair, SinrReport, h_opt, inp, sinr_general, sinr_opt, sum_rate
from .pulse import PulseSpec, raised_cosine, rc_autocorrelation, suppression_ratio
from .scenarios import ScenarioConfig, ScenarioReport, energy_efficiency, solve_power_budget

__version__ = "0.1.0"
