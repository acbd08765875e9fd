"""Rayleigh-fading rate and energy-efficiency comparison of four set-ups.

``hd``               half duplex, uplink share ``mu`` of the time
``fd_ideal``         full duplex, no inter-user interference
``fd_unsuppressed``  full duplex, interference treated as noise
``fd_proposed``      full duplex with base-station suppression, gated on
                     the uplink channel power

Every engine draws its channels from the same :class:`FadingSpec` seed,
so the four scenarios see common random numbers.  Means and variances
use compensated summation so the result does not depend on how trials
are chunked.

For the energy study the total budget ``P`` is split ``P_u = P_d`` and,
in the proposed scheme, the counter-injection power ``P_j`` comes out of
the same budget: ``P_j(P_u) + 2 P_u = P`` is solved per trial
(:func:`solve_power_budget`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import FadingSpec, LinkRealization, sample_rayleigh
from .errors import DegenerateChannelError, DomainError, SolverError
from .narrowband import PowerPair, sinr_opt
from .specfun import exp_scaled_e1

CASES = ("hd", "fd_ideal", "fd_unsuppressed", "fd_proposed")


@dataclass(frozen=True)
class ScenarioConfig:
    """Parameters shared by the four scenarios (linear units)."""

    total_power: float
    noise_power: float = 1.0
    mu: float = 0.5
    beta_threshold: float = 1.0
    t_d: float = 0.1
    trials: int = 100_000

    def __post_init__(self):
        if not (math.isfinite(self.total_power) and self.total_power > 0):
            raise DomainError(f"total_power must be finite and > 0, got {self.total_power!r}")
        if not (math.isfinite(self.noise_power) and self.noise_power > 0):
            raise DomainError(f"noise_power must be finite and > 0, got {self.noise_power!r}")
        if not 0.0 <= self.mu <= 1.0:
            raise DomainError(f"mu must lie in [0, 1], got {self.mu!r}")
        if not self.beta_threshold >= 0.0:
            raise DomainError("beta_threshold must be >= 0")
        if not self.t_d >= 0.0:
            raise DomainError("t_d must be >= 0")
        if int(self.trials) < 1:
            raise DomainError("trials must be >= 1")

    @classmethod
    def from_snr_db(cls, snr_db: float, noise_power: float = 1.0, **kwargs) -> "ScenarioConfig":
        """Config whose per-link SNR ``P_u/s2 = P_d/s2`` equals ``snr_db``."""
        return cls(total_power=2.0 * noise_power * 10.0 ** (snr_db / 10.0),
                   noise_power=noise_power, **kwargs)

    @property
    def powers(self) -> PowerPair:
        half = 0.5 * self.total_power
        return PowerPair(half, half)


@dataclass(frozen=True)
class ScenarioReport:
    """Monte Carlo summary for one scenario.

    ``std_error`` refers to ``mean_rate``; ``efficiency_std_error`` is the
    same quantity divided by the total power.
    """

    mean_rate: float
    jensen_bound: Optional[float]
    energy_efficiency: float
    trials_used: int
    std_error: float
    efficiency_std_error: float


def mean_and_stderr(values) -> tuple[float, float]:
    """Sample mean and its standard error, both via ``math.fsum``."""
    v = np.asarray(values, dtype=float).ravel()
    n = v.size
    if n == 0:
        raise DomainError("no samples")
    mean = math.fsum(v) / n
    if n == 1:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def _report(rates, config: ScenarioConfig, bound: Optional[float]) -> ScenarioReport:
    mean, se = mean_and_stderr(rates)
    P = config.total_power
    return ScenarioReport(mean, bound, mean / P, len(rates), se, se / P)


def _channel_powers(config: ScenarioConfig, fading: FadingSpec):
    batch = sample_rayleigh(fading, config.noise_power, 0j, int(config.trials))
    return batch.g_u, batch.g_d, batch.g_i


def _log2p(x):
    return np.log2(1.0 + x)


def _unsuppressed_sinr(g_d, g_i, p_u, p_d, s2):
    return g_d * p_d / (g_i * p_u + s2)


def _suppressed_sinr(g_u, g_d, g_i, p_u, p_d, s2):
    return g_d * p_d / (g_i * p_u * s2 / (g_u * p_u + s2) + s2)


# -- rates -----------------------------------------------------------------

def rate_hd(config: ScenarioConfig, fading: FadingSpec) -> ScenarioReport:
    g_u, g_d, _ = _channel_powers(config, fading)
    pw, s2, mu = config.powers, config.noise_power, config.mu
    rates = mu * _log2p(g_u * pw.p_u / s2) + (1.0 - mu) * _log2p(g_d * pw.p_d / s2)
    bound = (mu * math.log2(1.0 + fading.variance_u * pw.p_u / s2)
             + (1.0 - mu) * math.log2(1.0 + fading.variance_d * pw.p_d / s2))
    return _report(rates, config, bound)


def rate_fd_ideal(config: ScenarioConfig, fading: FadingSpec) -> ScenarioReport:
    g_u, g_d, _ = _channel_powers(config, fading)
    pw, s2 = config.powers, config.noise_power
    rates = _log2p(g_u * pw.p_u / s2) + _log2p(g_d * pw.p_d / s2)
    bound = (math.log2(1.0 + fading.variance_u * pw.p_u / s2)
             + math.log2(1.0 + fading.variance_d * pw.p_d / s2))
    return _report(rates, config, bound)


def unsuppressed_mean_sinr(p_u: float, p_d: float, noise_power: float,
                           variance_d: float = 1.0, variance_i: float = 1.0) -> float:
    """Closed-form ``E[|h_d|^2 P_d / (|h_i|^2 P_u + s2)]`` for Rayleigh links.

    Equals ``(v_d P_d / (v_i P_u)) exp(a) E1(a)`` with ``a = s2/(v_i P_u)``,
    i.e. ``-(P_d/P_u) exp(a) Ei(-a)`` for unit variances.
    """
    if p_u <= 0:
        return variance_d * p_d / noise_power
    a = noise_power / (variance_i * p_u)
    return variance_d * p_d / (variance_i * p_u) * exp_scaled_e1(a)


def rate_fd_unsuppressed(config: ScenarioConfig, fading: FadingSpec) -> ScenarioReport:
    g_u, g_d, g_i = _channel_powers(config, fading)
    pw, s2 = config.powers, config.noise_power
    rates = _log2p(g_u * pw.p_u / s2) + _log2p(_unsuppressed_sinr(g_d, g_i, pw.p_u, pw.p_d, s2))
    inner = unsuppressed_mean_sinr(pw.p_u, pw.p_d, s2, fading.variance_d, fading.variance_i)
    bound = math.log2(1.0 + fading.variance_u * pw.p_u / s2) + math.log2(1.0 + inner)
    return _report(rates, config, bound)


def _conditional_mean(values, mask) -> float:
    # Empty event contributes log2(1 + 0) = 0 to the bound.
    if not np.any(mask):
        return 0.0
    return math.fsum(values[mask]) / int(np.count_nonzero(mask))


def rate_fd_proposed(config: ScenarioConfig, fading: FadingSpec) -> ScenarioReport:
    """Suppression when ``|h_u|^2 > beta s2 / P_u``, otherwise none.

    The bound is the three-term Jensen expression with both conditional
    expectations estimated from the same draws.
    """
    g_u, g_d, g_i = _channel_powers(config, fading)
    pw, s2 = config.powers, config.noise_power
    with np.errstate(invalid="ignore"):
        gate = g_u > config.beta_threshold * s2 / pw.p_u
    sup = _suppressed_sinr(g_u, g_d, g_i, pw.p_u, pw.p_d, s2)
    uns = _unsuppressed_sinr(g_d, g_i, pw.p_u, pw.p_d, s2)
    rates = _log2p(g_u * pw.p_u / s2) + _log2p(np.where(gate, sup, uns))
    bound = (math.log2(1.0 + fading.variance_u * pw.p_u / s2)
             + math.log2(1.0 + _conditional_mean(sup, gate))
             + math.log2(1.0 + _conditional_mean(uns, ~gate)))
    return _report(rates, config, bound)


def suppressed_sum_rate(link: LinkRealization, powers: PowerPair) -> float:
    """Sum rate with perfect SI and the optimal coefficient."""
    up = math.log2(1.0 + link.g_u * powers.p_u / link.noise_power)
    return up + math.log2(1.0 + sinr_opt(link, powers))


# -- power budget ----------------------------------------------------------

def _pj(g_u, g_d, g_i, p_u, s2):
    return p_u ** 3 * g_u ** 2 * g_i / (g_d * (g_u * p_u + s2) ** 2)


def pj_power(link: LinkRealization, p_u: float) -> float:
    """Counter-injection power ``E|h_opt h_u X_u|^2`` at uplink power ``p_u``."""
    if link.h_d == 0:
        raise DegenerateChannelError("h_d = 0: counter-injection power is unbounded")
    return float(_pj(link.g_u, link.g_d, link.g_i, float(p_u), link.noise_power))


def solve_budget(g_u, g_d, g_i, total_power: float, noise_power: float,
                 max_iter: int = 200) -> np.ndarray:
    """Solve ``P_j(P_u) + 2 P_u = P`` elementwise for ``P_u`` in ``(0, P/2]``.

    Safeguarded Newton: each element keeps its own sign-change bracket
    ``[lo, hi]`` (initially ``[0, P/2]``) and falls back to bisection when
    a Newton step leaves it.  The left side is strictly increasing, so
    the root is unique.
    """
    g_u, g_d, g_i = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (g_u, g_d, g_i)))
    shape = g_u.shape
    g_u, g_d, g_i = g_u.ravel(), g_d.ravel(), g_i.ravel()
    if np.any(g_d <= 0):
        raise DegenerateChannelError("every |h_d|^2 must be > 0")
    P, c = float(total_power), float(noise_power)
    a = g_u ** 2 * g_i / g_d
    b = g_u
    lo = np.zeros(g_u.shape)
    hi = np.full(g_u.shape, 0.5 * P)
    x = hi.copy()
    tol = 1e-13 * P
    active = np.ones(g_u.shape, dtype=bool)
    for _ in range(max_iter):
        xa, aa, ba = x[active], a[active], b[active]
        den = ba * xa + c
        f = aa * xa ** 3 / den ** 2 + 2.0 * xa - P
        done = np.abs(f) <= tol
        pos = f > 0
        la, ha = lo[active], hi[active]
        ha = np.where(pos, xa, ha)
        la = np.where(pos, la, xa)
        fp = aa * xa ** 2 * (ba * xa + 3.0 * c) / den ** 3 + 2.0
        step = xa - f / fp
        inside = (step > la) & (step < ha)
        new = np.where(inside, step, 0.5 * (la + ha))
        new = np.where(done, xa, new)
        stalled = ~done & ((ha - la) <= 4.0 * np.finfo(float).eps * P)
        lo[active], hi[active], x[active] = la, ha, new
        idx = np.flatnonzero(active)
        active[idx[done | stalled]] = False
        if not active.any():
            return x.reshape(shape)
    raise SolverError(f"power-budget solver did not converge for {int(active.sum())} instance(s)")


def solve_power_budget(link: LinkRealization, total_power: float,
                       noise_power: Optional[float] = None) -> PowerPair:
    """Equal up/down power that leaves room for the counter-injection power.

    ``noise_power`` defaults to the link's own.  Returns ``P_u = P_d``.
    """
    if not (math.isfinite(total_power) and total_power > 0):
        raise DomainError("total_power must be finite and > 0")
    if link.h_d == 0:
        raise DegenerateChannelError("h_d = 0: no finite power split exists")
    s2 = link.noise_power if noise_power is None else float(noise_power)
    p_u = float(solve_budget(link.g_u, link.g_d, link.g_i, total_power, s2)[()])
    return PowerPair(p_u, p_u)


# -- energy efficiency -----------------------------------------------------

@dataclass(frozen=True)
class ProposedTrials:
    """Per-trial record of the proposed-scheme energy computation."""

    rate: np.ndarray
    p_u: np.ndarray
    p_d: np.ndarray
    p_j: np.ndarray
    cubic_branch: np.ndarray  # |h_d|^2 > T_d
    suppressed: np.ndarray    # cubic branch and uplink gate passed


def proposed_energy_trials(config: ScenarioConfig, fading: FadingSpec) -> ProposedTrials:
    """Per-trial power split and sum rate of the proposed scheme.

    For each draw: if ``|h_d|^2 > T_d``, solve the power budget; if then
    ``|h_u|^2 >= beta s2 / P_u``, suppress with the solved powers.  All
    other draws fall back to ``P/2`` each without suppression.
    """
    g_u, g_d, g_i = _channel_powers(config, fading)
    P, s2 = config.total_power, config.noise_power
    n = g_u.size
    p_u = np.full(n, 0.5 * P)
    p_j = np.zeros(n)
    cubic = g_d > config.t_d
    suppressed = np.zeros(n, dtype=bool)
    if cubic.any():
        root = solve_budget(g_u[cubic], g_d[cubic], g_i[cubic], P, s2)
        gate = g_u[cubic] >= config.beta_threshold * s2 / root
        idx = np.flatnonzero(cubic)[gate]
        suppressed[idx] = True
        p_u[idx] = root[gate]
        p_j[idx] = _pj(g_u[idx], g_d[idx], g_i[idx], p_u[idx], s2)
    p_d = p_u.copy()
    up = _log2p(g_u * p_u / s2)
    sinr = np.where(suppressed,
                    _suppressed_sinr(g_u, g_d, g_i, p_u, p_d, s2),
                    _unsuppressed_sinr(g_d, g_i, p_u, p_d, s2))
    return ProposedTrials(up + _log2p(sinr), p_u, p_d, p_j, cubic, suppressed)


_RATE_ENGINES = {
    "hd": rate_hd,
    "fd_ideal": rate_fd_ideal,
    "fd_unsuppressed": rate_fd_unsuppressed,
}


def energy_efficiency(case_id: str, config: ScenarioConfig, fading: FadingSpec) -> ScenarioReport:
    """Sum rate per unit of total power for one of :data:`CASES`."""
    if case_id == "fd_proposed":
        trials = proposed_energy_trials(config, fading)
        return _report(trials.rate, config, None)
    try:
        engine = _RATE_ENGINES[case_id]
    except KeyError:
        raise DomainError(f"unknown case {case_id!r}; expected one of {CASES}") from None
    return engine(config, fading)
