"""End-to-end acceptance checks, one or more tests per numbered criterion.

Oracles here avoid the package code path they check: grid search and
finite differences for optimality, plain numpy sampling for the
exponential-integral bound, bisection for the power budget, and a
sampled waveform for the suppression ratio.
"""

import math
import time

import numpy as np
import pytest

from fdiui import phase, pulse, scenarios, wideband
from fdiui.channel import FadingSpec, deterministic_link
from fdiui.narrowband import PowerPair, h_opt, inp, residual_interference, sinr_opt

acceptance = pytest.mark.acceptance

SNR_GRID_DB = np.arange(0.0, 31.0, 5.0)
EE_GRID_DB = (0.0, 10.0, 20.0, 30.0)


def combined_se(*ses):
    return math.sqrt(sum(s * s for s in ses))


# 1 -------------------------------------------------------------------------

@acceptance(1, "delay sweep: -30 dB at 2 us, waveform oracle within 5%")
def test_delay_sweep_reproduction():
    t0 = time.perf_counter()
    spec = pulse.PulseSpec(100e-6, 0.22)
    db = pulse.to_db(pulse.suppression_ratio(2e-6, spec))
    assert abs(db - (-30.0)) <= 1.0, db
    for tau in np.linspace(0.25e-6, 5e-6, 20):  # tau/T <= 0.05
        analytic = pulse.suppression_ratio(tau, spec)
        sampled = pulse.simulate_suppression_ratio(tau, spec)
        assert abs(sampled - analytic) <= 0.05 * analytic, (tau, sampled, analytic)
    assert time.perf_counter() - t0 < 5.0


# 2 -------------------------------------------------------------------------

def _random_link(rng):
    # Magnitudes keep |h_opt| <= 1 so the grid stays small.
    mags = (rng.uniform(0.25, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.25, 1.0))
    phases = rng.uniform(-math.pi, math.pi, 3)
    h_u, h_d, h_i = (m * complex(math.cos(p), math.sin(p)) for m, p in zip(mags, phases))
    return deterministic_link(h_u, h_d, h_i)


@acceptance(2, "optimality: grid search and vanishing gradient at h_opt")
def test_optimality_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    powers = PowerPair(1.0, 1.0)
    for _ in range(1000):
        link = _random_link(rng)
        h0 = h_opt(link, powers)
        best = inp(link, powers, h0)
        radius = 2.0 * abs(h0)
        axis = np.arange(-radius, radius + 1e-2, 1e-2)
        grid = axis[:, None] + 1j * axis[None, :]
        grid = grid[np.abs(grid) <= radius]
        values = inp(link, powers, grid)
        # slack only for rounding when a grid point lands on h_opt
        assert best <= values.min() * (1 + 1e-12)

        step = 1e-6
        d_re = (inp(link, powers, h0 + step) - inp(link, powers, h0 - step)) / (2 * step)
        d_im = (inp(link, powers, h0 + 1j * step) - inp(link, powers, h0 - 1j * step)) / (2 * step)
        assert math.hypot(d_re, d_im) < 1e-6 * best
    assert time.perf_counter() - t0 < 30.0


# 3, 4 ----------------------------------------------------------------------

@acceptance(3, "unit gains at 20 dB: suppressed SINR about 3 dB below ideal")
def test_unit_gains_lose_about_3db():
    link = deterministic_link(1, 1, 1, noise_power=1.0)
    powers = PowerPair(100.0, 100.0)
    ideal = link.g_d * powers.p_d / link.noise_power
    ratio = sinr_opt(link, powers) / ideal
    assert 0.49 <= ratio <= 0.52, ratio


@acceptance(4, "uplink SNR of one: residual interference is exactly half")
def test_unit_uplink_snr_halves_interference():
    rng = np.random.default_rng(4)
    for _ in range(50):
        s2 = rng.uniform(0.1, 10.0)
        p_u = rng.uniform(0.1, 10.0)
        h_u = math.sqrt(s2 / p_u) * np.exp(1j * rng.uniform(-math.pi, math.pi))
        h_d, h_i = rng.normal(size=2) + 1j * rng.normal(size=2)
        link = deterministic_link(h_u, h_d, h_i, noise_power=s2)
        powers = PowerPair(p_u, rng.uniform(0.1, 10.0))
        res = residual_interference(link, powers, h_opt(link, powers))
        assert res == pytest.approx(0.5 * link.g_i * p_u, rel=1e-12)


# 5 -------------------------------------------------------------------------

@pytest.fixture(scope="module")
def rate_sweep():
    fading = FadingSpec(seed=5)
    out = []
    t0 = time.perf_counter()
    for snr_db in SNR_GRID_DB:
        config = scenarios.ScenarioConfig.from_snr_db(snr_db, beta_threshold=1.0, trials=100_000)
        out.append({
            "hd": scenarios.rate_hd(config, fading),
            "fd_ideal": scenarios.rate_fd_ideal(config, fading),
            "fd_unsuppressed": scenarios.rate_fd_unsuppressed(config, fading),
            "fd_proposed": scenarios.rate_fd_proposed(config, fading),
        })
    return out, time.perf_counter() - t0


@acceptance(5, "rate ordering across SNR, separated and with a steady ideal-proposed gap")
def test_rate_ordering(rate_sweep):
    sweep, elapsed = rate_sweep
    chain = ("fd_ideal", "fd_proposed", "fd_unsuppressed", "hd")
    for snr_db, reports in zip(SNR_GRID_DB, sweep):
        for hi, lo in zip(chain, chain[1:]):
            gap = reports[hi].mean_rate - reports[lo].mean_rate
            assert gap > 3 * combined_se(reports[hi].std_error, reports[lo].std_error), (snr_db, hi, lo)
    assert elapsed < 60.0


@acceptance(5, "rate ordering across SNR, separated and with a steady ideal-proposed gap")
def test_ideal_proposed_gap_is_steady(rate_sweep):
    sweep, _ = rate_sweep
    gaps = np.array([r["fd_ideal"].mean_rate - r["fd_proposed"].mean_rate for r in sweep])
    variation = (gaps.max() - gaps.min()) / gaps.mean()
    print("ideal - proposed gap per SNR:", np.round(gaps, 4), "variation", round(variation, 3))
    assert variation < 0.15, f"gap varies {variation:.0%} across the sweep: {gaps}"


# 6 -------------------------------------------------------------------------

@acceptance(6, "exponential-integral bound vs sampling, and Jensen bounds hold")
def test_ei_bound_matches_sampling():
    closed = scenarios.unsuppressed_mean_sinr(1.0, 1.0, 1.0)
    rng = np.random.default_rng(606)
    total, n, chunk = 0.0, 10_000_000, 1_000_000
    for _ in range(n // chunk):
        g_d = rng.exponential(size=chunk)
        g_i = rng.exponential(size=chunk)
        total += float(np.sum(g_d / (g_i + 1.0)))
    sampled = total / n
    assert abs(sampled - closed) <= 5e-3 * closed, (sampled, closed)


@acceptance(6, "exponential-integral bound vs sampling, and Jensen bounds hold")
def test_jensen_bounds_not_exceeded(rate_sweep):
    sweep, _ = rate_sweep
    for snr_db, reports in zip(SNR_GRID_DB, sweep):
        for name, rep in reports.items():
            assert rep.mean_rate <= rep.jensen_bound + 3 * rep.std_error, (snr_db, name)


# 7 -------------------------------------------------------------------------

def _bisect_budget(link, total):
    # P_j from the coefficient itself: |h_opt|^2 |h_u|^2 P_u
    def f(p_u):
        h = h_opt(link, PowerPair(p_u, p_u))
        return abs(h) ** 2 * link.g_u * p_u + 2 * p_u - total

    lo, hi = 0.0, total / 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@acceptance(7, "power-budget solver: residual, h_i = 0 case and bisection agreement")
def test_power_budget_solver():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        h = (rng.normal(size=3) + 1j * rng.normal(size=3)) * math.sqrt(0.5)
        s2 = 10 ** rng.uniform(-1, 1)
        link = deterministic_link(*h, noise_power=s2)
        total = 10 ** rng.uniform(-1, 4)
        pair = scenarios.solve_power_budget(link, total)
        p_j = scenarios.pj_power(link, pair.p_u)
        assert abs(p_j + pair.p_u + pair.p_d - total) < 1e-10 * total
        assert abs(pair.p_u - _bisect_budget(link, total)) <= 1e-9 * total

    for total in (0.3, 1.0, 17.0, 1e3):
        link = deterministic_link(0.7 + 0.1j, -1.2j, 0, noise_power=0.5)
        assert scenarios.solve_power_budget(link, total).p_u == total / 2


# 8, 9 ----------------------------------------------------------------------

def _ee(case, p_db, trials, seed, t_d=0.1):
    config = scenarios.ScenarioConfig(total_power=10 ** (p_db / 10), noise_power=1.0,
                                      beta_threshold=1.0, t_d=t_d, trials=trials)
    return scenarios.energy_efficiency(case, config, FadingSpec(seed=seed))


@acceptance(8, "proposed-scheme efficiency stable from 1e3 to 1e5 trials")
def test_algorithm_convergence():
    for p_db in EE_GRID_DB:
        small = _ee("fd_proposed", p_db, 1_000, seed=81)
        large = _ee("fd_proposed", p_db, 100_000, seed=82)
        diff = abs(small.energy_efficiency - large.energy_efficiency)
        assert diff <= 3 * combined_se(small.efficiency_std_error, large.efficiency_std_error), p_db


@pytest.fixture(scope="module")
def ee_grid():
    out = {}
    for p_db in EE_GRID_DB:
        for case in ("hd", "fd_unsuppressed"):
            out[case, p_db] = _ee(case, p_db, 100_000, seed=9)
        for t_d in (0.1, 0.01):
            out["fd_proposed", t_d, p_db] = _ee("fd_proposed", p_db, 100_000, seed=9, t_d=t_d)
    return out


@acceptance(9, "energy ordering: HD <= proposed <= unsuppressed")
def test_proposed_beats_half_duplex(ee_grid):
    for p_db in EE_GRID_DB:
        for t_d in (0.1, 0.01):
            prop = ee_grid["fd_proposed", t_d, p_db].energy_efficiency
            assert prop >= ee_grid["hd", p_db].energy_efficiency, (p_db, t_d)


@acceptance(9, "energy ordering: HD <= proposed <= unsuppressed")
def test_proposed_below_unsuppressed(ee_grid):
    rows = []
    for p_db in EE_GRID_DB:
        for t_d in (0.1, 0.01):
            prop = ee_grid["fd_proposed", t_d, p_db].energy_efficiency
            uns = ee_grid["fd_unsuppressed", p_db].energy_efficiency
            rows.append((p_db, t_d, prop, uns))
    print("(P dB, T_d, proposed, unsuppressed):", rows)
    bad = [r for r in rows if r[2] > r[3]]
    assert not bad, f"proposed above unsuppressed at {bad}"


# 10 ------------------------------------------------------------------------

@acceptance(10, "unknown-phase lemma: zero cross term, triangular CDF, argmin at zero")
def test_phase_lemma():
    rng = np.random.default_rng(10)
    for theta in rng.uniform(-math.pi, math.pi, 100):
        assert abs(phase.expected_cos_offset(theta)) < 1e-10

    n = 10_000_000
    gamma = np.sort(phase.sample_phase_difference(np.random.default_rng(1010), n))
    cdf = phase.gamma_cdf(gamma)
    ecdf_hi = np.arange(1, n + 1) / n
    ks = max(np.max(ecdf_hi - cdf), np.max(cdf - (ecdf_hi - 1.0 / n)))
    assert ks < 1e-3, ks

    grid = np.linspace(0.0, 5.0, 501)
    for _ in range(100):
        mags = phase.LinkMagnitudes(*rng.uniform(0.0, 3.0, 3), noise_power=rng.uniform(0.1, 3))
        powers = PowerPair(*rng.uniform(0.1, 10.0, 2))
        assert np.argmin(phase.inp_unknown_phase(mags, powers, grid)) == 0


# 11 ------------------------------------------------------------------------

@acceptance(11, "wideband pipeline matches narrowband per subcarrier")
def test_wideband_equivalence():
    rng = np.random.default_rng(11)
    spec = wideband.OfdmSpec(64, 16)
    powers = PowerPair(3.0, 2.0)
    s2 = 0.7
    for _ in range(20):
        h_u, h_d, h_i = rng.normal(size=3) + 1j * rng.normal(size=3)
        chans = [wideband.MultipathChannel.flat(g) for g in (h_u, h_d, h_i)]
        coeffs = wideband.per_subcarrier_hopt(*chans, spec, powers, s2)
        filt = wideband.synthesize_tdinis(coeffs.coeffs, spec)
        residual = wideband.residual_iui_per_subcarrier(*chans, filt, spec, powers, s2)
        sinr = wideband.subcarrier_sinr(chans[1], residual, spec, powers, s2)
        expected = sinr_opt(deterministic_link(h_u, h_d, h_i, noise_power=s2), powers)
        np.testing.assert_allclose(sinr, expected, rtol=1e-9)

    ch_u, ch_d, ch_i = wideband.demo_channels()
    powers = PowerPair(10.0, 10.0)
    coeffs = wideband.per_subcarrier_hopt(ch_u, ch_d, ch_i, spec, powers, 1.0)
    filt = wideband.synthesize_tdinis(coeffs.coeffs, spec)
    residual = wideband.residual_iui_per_subcarrier(ch_u, ch_d, ch_i, filt, spec, powers, 1.0)
    assert np.all(residual <= wideband.unfiltered_interference(ch_i, spec, powers))
