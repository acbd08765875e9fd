"""Suppression with unknown downlink/interference phases.

If the base station knows channel amplitudes but the phases of ``h_d``
and ``h_i`` are uniform on ``[-pi, pi)``, the cross term of the INP
averages out because the phase difference ``gamma = alpha - beta`` of two
independent uniforms has a triangular density on ``[-2pi, 2pi]`` whose
cosine moment vanishes for every offset.  What remains grows with
``|h|``, so the best coefficient is zero.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .channel import LinkRealization
from .errors import DomainError
from .narrowband import PowerPair

TWO_PI = 2.0 * math.pi


def _check_support(gamma):
    g = np.asarray(gamma, dtype=float)
    if np.any(~np.isfinite(g)) or np.any(np.abs(g) > TWO_PI):
        raise DomainError("gamma must lie in [-2pi, 2pi]")
    return g


def gamma_cdf(gamma):
    """CDF of the difference of two independent U[-pi, pi) phases."""
    g = _check_support(gamma)
    out = 0.5 + g / TWO_PI - np.sign(g) * g ** 2 / (8.0 * math.pi ** 2)
    return float(out) if np.ndim(gamma) == 0 else out


def gamma_pdf(gamma):
    """Triangular density, peak ``1/(2pi)`` at 0, zero at ``+-2pi``."""
    g = _check_support(gamma)
    out = 1.0 / TWO_PI - np.abs(g) / (4.0 * math.pi ** 2)
    return float(out) if np.ndim(gamma) == 0 else out


def expected_cos_offset(theta_f: float) -> float:
    """``E[cos(gamma - theta_f)]`` by quadrature of each density branch."""
    theta_f = float(theta_f)
    if not math.isfinite(theta_f):
        raise DomainError("theta_f must be finite")

    def integrand(g):
        return math.cos(g - theta_f) * gamma_pdf(g)

    neg, _ = integrate.quad(integrand, -TWO_PI, 0.0, epsabs=1e-14, epsrel=1e-14, limit=200)
    pos, _ = integrate.quad(integrand, 0.0, TWO_PI, epsabs=1e-14, epsrel=1e-14, limit=200)
    return neg + pos


def expected_cos_offset_closed(theta_f: float) -> float:
    """Closed form of :func:`expected_cos_offset`.

    The triangular density is the convolution of two uniforms, so its
    characteristic function at unit frequency is ``sinc(1)^2 = 0`` and
    ``E[cos(gamma - theta_f)] = cos(theta_f) * sinc(1)^2``.
    """
    return math.cos(float(theta_f)) * float(np.sinc(1.0)) ** 2


class LinkMagnitudes(NamedTuple):
    """Channel amplitudes known to the base station, plus noise power."""

    h_u: float
    h_d: float
    h_i: float
    noise_power: float = 1.0

    @classmethod
    def from_link(cls, link: LinkRealization) -> "LinkMagnitudes":
        return cls(abs(link.h_u), abs(link.h_d), abs(link.h_i), link.noise_power)


def inp_unknown_phase(mags: LinkMagnitudes, powers: PowerPair, h_magnitude):
    """Phase-averaged INP for a coefficient of magnitude ``h_magnitude``.

    ``|h_i|^2 P_u + |h h_d h_u|^2 P_u + |h_d h|^2 s2 + s2``; strictly
    increasing in ``|h|`` whenever ``h_d != 0``.
    """
    if min(mags.h_u, mags.h_d, mags.h_i) < 0:
        raise DomainError("channel magnitudes must be non-negative")
    if mags.noise_power <= 0:
        raise DomainError("noise_power must be > 0")
    a = np.asarray(h_magnitude, dtype=float)
    if np.any(a < 0):
        raise DomainError("h_magnitude must be non-negative")
    s2 = mags.noise_power
    out = (mags.h_i ** 2 * powers.p_u
           + (a * mags.h_d * mags.h_u) ** 2 * powers.p_u
           + (mags.h_d * a) ** 2 * s2
           + s2)
    return float(out) if np.ndim(h_magnitude) == 0 else out


def sample_phase_difference(rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw ``alpha - beta`` for independent uniform phases."""
    alpha = rng.uniform(-math.pi, math.pi, count)
    beta = rng.uniform(-math.pi, math.pi, count)
    return alpha - beta
