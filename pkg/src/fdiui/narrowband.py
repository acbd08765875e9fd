"""Narrowband closed forms for base-station-assisted IUI suppression.

The base station re-sends its received uplink signal scaled by a complex
coefficient ``h``; at the downlink user this copy adds to the inter-user
interference arriving over ``h_i``.  With perfect self-interference
cancellation the interference-plus-noise power (INP) at the downlink user
is

    INP(h) = |h h_d h_u + h_i|^2 P_u + |h_d h|^2 s2 + s2

which is a convex quadratic in ``h`` with minimiser :func:`h_opt`.

When residual self-interference ``s = h_si - h~_si`` is present the
retransmission loop divides every re-sent term by ``1 - s h``;
:func:`sinr_general` evaluates that case.

``h`` arguments accept complex scalars or numpy arrays (grid searches).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import LinkRealization
from .errors import DegenerateChannelError, DomainError, InstabilityError

POLE_EPS = 1e-6


@dataclass(frozen=True)
class PowerPair:
    """Uplink and downlink transmit powers, linear scale."""

    p_u: float
    p_d: float

    def __post_init__(self):
        for name in ("p_u", "p_d"):
            v = float(getattr(self, name))
            if math.isnan(v) or v < 0.0 or v == math.inf:
                raise DomainError(f"{name} must be finite and >= 0, got {v!r}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class SinrReport:
    sinr_d: float
    sinr_u: float
    rate_d: float
    rate_u: float
    rate_sum: float

    @classmethod
    def from_sinr(cls, sinr_d: float, sinr_u: float) -> "SinrReport":
        rate_d = math.log2(1.0 + sinr_d)
        rate_u = math.log2(1.0 + sinr_u)
        return cls(sinr_d, sinr_u, rate_d, rate_u, rate_d + rate_u)


def _require_perfect_si(link: LinkRealization):
    if link.residual_si != 0:
        raise DomainError("this closed form assumes perfect SI cancellation (residual_si = 0)")


def _require_downlink(link: LinkRealization):
    if link.h_d == 0:
        raise DegenerateChannelError("h_d = 0: there is no downlink to protect")


def inp(link: LinkRealization, powers: PowerPair, h=0j):
    """Interference-plus-noise power at the downlink user for coefficient ``h``."""
    _require_perfect_si(link)
    h = np.asarray(h) if np.ndim(h) else complex(h)
    s2 = link.noise_power
    iui = np.abs(h * link.h_d * link.h_u + link.h_i) ** 2 * powers.p_u
    boosted_noise = np.abs(link.h_d * h) ** 2 * s2
    return iui + boosted_noise + s2


def residual_interference(link: LinkRealization, powers: PowerPair, h=0j):
    """INP minus the downlink user's own noise floor.

    This is the interference still present after suppression, including
    the base-station noise that the re-sent copy carries along.
    """
    return inp(link, powers, h) - link.noise_power


def h_opt(link: LinkRealization, powers: PowerPair) -> complex:
    """INP-minimising suppression coefficient.

    Raises DegenerateChannelError when ``h_d = 0``.
    """
    _require_downlink(link)
    s2 = link.noise_power
    denom = link.g_d * (link.g_u * powers.p_u + s2)
    return -link.h_i * link.h_d.conjugate() * link.h_u.conjugate() * powers.p_u / denom


def sinr_opt(link: LinkRealization, powers: PowerPair) -> float:
    """Downlink SINR at ``h_opt`` with perfect SI cancellation."""
    _require_downlink(link)
    s2 = link.noise_power
    leak = link.g_i * powers.p_u * s2 / (link.g_u * powers.p_u + s2)
    return link.g_d * powers.p_d / (leak + s2)


def sinr_general(link: LinkRealization, powers: PowerPair, h=0j) -> SinrReport:
    """Both SINRs and rates for coefficient ``h`` with residual SI.

    With ``residual_si = 0`` this reduces to the ideal-case expressions.
    Raises InstabilityError when ``|1 - residual_si*h| <= POLE_EPS``.
    """
    h = complex(h)
    s = link.residual_si
    loop = 1.0 - s * h
    if abs(loop) <= POLE_EPS:
        raise InstabilityError(f"|1 - residual_si*h| = {abs(loop):.3g}: retransmission loop diverges")
    s2 = link.noise_power
    p_u, p_d = powers.p_u, powers.p_d

    num_d = abs(link.h_d / loop) ** 2 * p_d
    iui = abs(h * link.h_u * link.h_d / loop + link.h_i) ** 2 * p_u
    noise_d = (abs(h * link.h_d / loop) ** 2 + 1.0) * s2
    sinr_d = num_d / (iui + noise_d)

    num_u = abs(link.h_u + h * link.h_u * s / loop) ** 2 * p_u
    den_u = abs(s / loop) ** 2 * p_d + abs(h * s / loop + 1.0) ** 2 * s2
    sinr_u = num_u / den_u
    return SinrReport.from_sinr(sinr_d, sinr_u)


def sum_rate(link: LinkRealization, powers: PowerPair, h=0j) -> float:
    """Downlink plus uplink achievable rate in bits/s/Hz."""
    return sinr_general(link, powers, h).rate_sum
