import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fdiui.channel import deterministic_link
from fdiui.errors import DomainError
from fdiui.narrowband import PowerPair, inp
from fdiui.phase import (LinkMagnitudes, expected_cos_offset, expected_cos_offset_closed, gamma_cdf,
                         gamma_pdf, inp_unknown_phase, sample_phase_difference)


def test_cdf_is_antiderivative_of_pdf():
    g = np.linspace(-2 * math.pi + 1e-3, 2 * math.pi - 1e-3, 2001)
    h = 1e-5
    g = g[np.abs(g) > 2 * h]  # the density has a kink at zero
    fd = (gamma_cdf(g + h) - gamma_cdf(g - h)) / (2 * h)
    assert np.max(np.abs(fd - gamma_pdf(g))) < 1e-8


def test_cdf_endpoints_and_symmetry():
    assert gamma_cdf(-2 * math.pi) == pytest.approx(0.0, abs=1e-15)
    assert gamma_cdf(2 * math.pi) == pytest.approx(1.0)
    assert gamma_cdf(0.0) == 0.5
    assert gamma_pdf(0.0) == pytest.approx(1 / (2 * math.pi))


@given(st.floats(min_value=-10.0, max_value=10.0))
def test_cos_moment_vanishes(theta):
    assert abs(expected_cos_offset(theta)) < 1e-10
    assert expected_cos_offset(theta) == pytest.approx(expected_cos_offset_closed(theta), abs=1e-10)


def test_sampled_moment():
    g = sample_phase_difference(np.random.default_rng(1), 1_000_000)
    assert abs(np.mean(np.cos(g - 0.7))) < 5e-3


def test_zero_coefficient_matches_narrowband():
    link = deterministic_link(0.3 + 1j, -0.8j, 1.5 - 0.2j, noise_power=0.4)
    powers = PowerPair(2.0, 3.0)
    mags = LinkMagnitudes.from_link(link)
    assert inp_unknown_phase(mags, powers, 0.0) == pytest.approx(inp(link, powers, 0j), rel=1e-14)


def test_phase_average_of_narrowband_inp():
    # averaging the narrowband INP over uniform phases gives the closed form
    rng = np.random.default_rng(5)
    mags = LinkMagnitudes(0.9, 1.3, 0.7, 0.5)
    powers = PowerPair(2.0, 1.0)
    a = 0.4
    n = 200_000
    ph = rng.uniform(-math.pi, math.pi, (2, n))
    h_d = mags.h_d * np.exp(1j * ph[0])
    h_i = mags.h_i * np.exp(1j * ph[1])
    vals = (np.abs(a * h_d * mags.h_u + h_i) ** 2 * powers.p_u
            + np.abs(h_d * a) ** 2 * mags.noise_power + mags.noise_power)
    assert vals.mean() == pytest.approx(inp_unknown_phase(mags, powers, a), rel=5e-3)


def test_increasing_in_magnitude():
    mags = LinkMagnitudes(1.0, 0.5, 2.0)
    vals = inp_unknown_phase(mags, PowerPair(1, 1), np.linspace(0, 3, 50))
    assert np.all(np.diff(vals) > 0)


def test_domain():
    with pytest.raises(DomainError):
        gamma_pdf(7.0)
    with pytest.raises(DomainError):
        inp_unknown_phase(LinkMagnitudes(1, 1, 1), PowerPair(1, 1), -0.1)
    with pytest.raises(DomainError):
        expected_cos_offset(math.nan)
