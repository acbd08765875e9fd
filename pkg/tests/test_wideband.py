import numpy as np
import pytest

from fdiui import wideband
from fdiui.channel import deterministic_link
from fdiui.errors import DomainError, IciError
from fdiui.narrowband import PowerPair, residual_interference
from fdiui.wideband import MultipathChannel, OfdmSpec

SPEC = OfdmSpec(64, 16)
POWERS = PowerPair(10.0, 10.0)


def build(ch_u, ch_d, ch_i, spec=SPEC, s2=1.0):
    coeffs = wideband.per_subcarrier_hopt(ch_u, ch_d, ch_i, spec, POWERS, s2)
    return coeffs, wideband.synthesize_tdinis(coeffs.coeffs, spec)


def test_filter_response_equals_coefficients():
    coeffs, filt = build(*wideband.demo_channels())
    np.testing.assert_allclose(filt.frequency_response(), coeffs.coeffs, atol=1e-13)


def test_demo_fits_in_prefix():
    ch_u, ch_d, ch_i = wideband.demo_channels()
    _, filt = build(ch_u, ch_d, ch_i)
    for lo, hi in wideband.path_lags(ch_u, ch_d, ch_i, filt).values():
        assert 0 <= lo and hi <= SPEC.cp_length
    assert filt.lag_span[1] + max(ch.memory for ch in (ch_u, ch_d, ch_i)) <= SPEC.cp_length


def test_flat_channels_reproduce_narrowband():
    link = deterministic_link(0.4 + 0.9j, 1.2 - 0.3j, -0.7 + 0.2j, noise_power=1.0)
    chans = [MultipathChannel.flat(g) for g in (link.h_u, link.h_d, link.h_i)]
    coeffs, filt = build(*chans)
    np.testing.assert_allclose(coeffs.coeffs, coeffs.coeffs[0], atol=1e-15)
    assert filt.lag_span == (0, 0)
    res = wideband.residual_iui_per_subcarrier(*chans, filt, SPEC, POWERS, 1.0)
    np.testing.assert_allclose(res, residual_interference(link, POWERS, coeffs.coeffs[0]), rtol=1e-9)


def test_per_bin_optimality():
    ch_u, ch_d, ch_i = wideband.demo_channels()
    coeffs, _ = build(ch_u, ch_d, ch_i)
    H = [ch.frequency_response(64) for ch in (ch_u, ch_d, ch_i)]
    rng = np.random.default_rng(0)
    for k in range(64):
        link = wideband.bin_link(H[0][k], H[1][k], H[2][k], 1.0)
        base = residual_interference(link, POWERS, coeffs.coeffs[k])
        pert = coeffs.coeffs[k] + 1e-3 * np.exp(1j * rng.uniform(0, 2 * np.pi, 8))
        assert np.all(residual_interference(link, POWERS, pert) >= base)


def test_residual_matches_closed_form_on_demo():
    ch_u, ch_d, ch_i = wideband.demo_channels()
    coeffs, filt = build(ch_u, ch_d, ch_i)
    res = wideband.residual_iui_per_subcarrier(ch_u, ch_d, ch_i, filt, SPEC, POWERS, 1.0)
    H = [ch.frequency_response(64) for ch in (ch_u, ch_d, ch_i)]
    want = [residual_interference(wideband.bin_link(H[0][k], H[1][k], H[2][k], 1.0), POWERS, coeffs.coeffs[k])
            for k in range(64)]
    np.testing.assert_allclose(res, want, rtol=1e-9)


def test_short_prefix_raises_ici():
    ch_u = MultipathChannel.flat(1.0)
    ch_d = MultipathChannel(((2, 0.9),))
    ch_i = MultipathChannel(((0, 0.5), (1, 0.3)))
    spec = OfdmSpec(64, 2)
    _, filt = build(ch_u, ch_d, ch_i, spec)
    # the filter must look ahead by the downlink delay, which is not causal
    with pytest.raises(IciError):
        wideband.residual_iui_per_subcarrier(ch_u, ch_d, ch_i, filt, spec, POWERS, 1.0)


def test_spectral_null_is_flagged():
    ch_d = MultipathChannel(((0, 1.0), (1, 1.0)))  # zero at bin N/2
    coeffs = wideband.per_subcarrier_hopt(MultipathChannel.flat(1), ch_d, MultipathChannel.flat(1),
                                          SPEC, POWERS, 1.0)
    assert coeffs.flagged == (32,) and coeffs.coeffs[32] == 0


def test_lagged_apply_shifts():
    lag = wideband.Lagged(-1, np.array([1.0 + 0j]))
    out = lag.apply(np.arange(5, dtype=complex))
    np.testing.assert_array_equal(out, [1, 2, 3, 4, 0])


@pytest.mark.parametrize("n,cp", [(48, 4), (1, 0), (16, 16), (16, -1)])
def test_spec_validation(n, cp):
    with pytest.raises(DomainError):
        OfdmSpec(n, cp)


def test_channel_validation():
    with pytest.raises(DomainError):
        MultipathChannel(((1, 1.0), (1, 2.0)))
    with pytest.raises(DomainError):
        MultipathChannel(())
    with pytest.raises(DomainError):
        wideband.per_subcarrier_hopt(MultipathChannel(((20, 1),)), MultipathChannel.flat(1),
                                     MultipathChannel.flat(1), SPEC, POWERS, 1.0)
