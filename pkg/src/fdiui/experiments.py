"""Figure-style experiments producing plain tables.

Each experiment takes a flat ``{name: value}`` parameter map and a seed
and returns a header plus rows; :mod:`fdiui.cli` writes them as CSV.
Monte Carlo columns come with a ``<name>_se`` standard-error column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import pulse, scenarios, wideband
from .channel import FadingSpec, deterministic_link
from .errors import DomainError
from .narrowband import PowerPair, h_opt, inp, residual_interference, sinr_general, sinr_opt

Table = tuple[list[str], list[list]]


@dataclass(frozen=True)
class Param:
    kind: type
    default: object = None
    help: str = ""

    @property
    def required(self) -> bool:
        return self.default is None


@dataclass(frozen=True)
class Experiment:
    name: str
    summary: str
    run: Callable[[dict, int], Table]
    params: dict = field(default_factory=dict)

    def resolve(self, raw: dict) -> dict:
        """Typed parameter map with defaults filled in.

        Raises DomainError for unknown keys, missing required keys or
        values that do not parse.
        """
        unknown = sorted(set(raw) - set(self.params))
        if unknown:
            raise DomainError(f"unknown parameter(s) for {self.name}: {', '.join(unknown)}")
        out = {}
        for key, spec in self.params.items():
            if key in raw:
                try:
                    out[key] = spec.kind(raw[key])
                except (TypeError, ValueError) as exc:
                    raise DomainError(f"{key}={raw[key]!r} is not a valid {spec.kind.__name__}") from exc
            elif spec.required:
                raise DomainError(f"{self.name} needs --param {key}=...")
            else:
                out[key] = spec.default
        return out


def _db_grid(lo: float, hi: float, step: float) -> np.ndarray:
    if step <= 0 or hi < lo:
        raise DomainError("dB grid needs step > 0 and max >= min")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


def _trials(p: dict) -> int:
    n = int(p["trials"])
    if n < 1:
        raise DomainError("trials must be >= 1")
    return n


# -- delay sweep -----------------------------------------------------------

def _delay_sweep(p: dict, seed: int) -> Table:
    spec = pulse.PulseSpec(p["T"], p["rolloff"])
    if p["points"] < 2:
        raise DomainError("points must be >= 2")
    taus = np.linspace(0.0, p["tau_max"], p["points"])
    analytic = pulse.suppression_ratio(taus, spec)
    rows = []
    for tau, r in zip(taus, analytic):
        w = pulse.simulate_suppression_ratio(tau, spec)
        rows.append([tau, r, pulse.to_db(r), w, pulse.to_db(w)])
    return ["tau_s", "ratio", "ratio_db", "waveform_ratio", "waveform_db"], rows


# -- rate vs SNR -----------------------------------------------------------

_RATE_ENGINES = (
    ("hd", scenarios.rate_hd),
    ("fd_ideal", scenarios.rate_fd_ideal),
    ("fd_unsuppressed", scenarios.rate_fd_unsuppressed),
    ("fd_proposed", scenarios.rate_fd_proposed),
)


def _rate_vs_snr(p: dict, seed: int) -> Table:
    fading = FadingSpec(seed=seed)
    header = ["snr_db"]
    for name, _ in _RATE_ENGINES:
        header += [name, f"{name}_se"]
    header += [f"{name}_bound" for name, _ in _RATE_ENGINES]
    rows = []
    for snr_db in _db_grid(p["snr_min_db"], p["snr_max_db"], p["snr_step_db"]):
        config = scenarios.ScenarioConfig.from_snr_db(
            snr_db, p["noise_power"], mu=p["mu"], beta_threshold=p["beta"], trials=_trials(p))
        reports = [engine(config, fading) for _, engine in _RATE_ENGINES]
        row = [snr_db]
        for rep in reports:
            row += [rep.mean_rate, rep.std_error]
        row += [rep.jensen_bound for rep in reports]
        rows.append(row)
    return header, rows


# -- energy efficiency -----------------------------------------------------

def closed_form_efficiency(case: str, total_power: float, noise_power: float, mu: float = 0.5) -> float:
    """Jensen-level efficiency for the equal-split cases (unit-variance links)."""
    half = 0.5 * total_power
    snr = half / noise_power
    if case == "hd":
        rate = mu * math.log2(1 + snr) + (1 - mu) * math.log2(1 + snr)
    elif case == "fd_ideal":
        rate = 2 * math.log2(1 + snr)
    elif case == "fd_unsuppressed":
        rate = math.log2(1 + snr) + math.log2(1 + scenarios.unsuppressed_mean_sinr(half, half, noise_power))
    else:
        raise DomainError(f"no closed form for {case!r}")
    return rate / total_power


def _energy_vs_power(p: dict, seed: int) -> Table:
    fading = FadingSpec(seed=seed)
    header = ["p_db"]
    cols = list(scenarios.CASES) + ["fd_proposed_alt"]
    for name in cols:
        header += [name, f"{name}_se"]
    closed = ["hd", "fd_ideal", "fd_unsuppressed"]
    header += [f"{name}_closed" for name in closed]
    rows = []
    for p_db in _db_grid(p["p_min_db"], p["p_max_db"], p["p_step_db"]):
        total = p["noise_power"] * 10.0 ** (p_db / 10.0)
        base = dict(total_power=total, noise_power=p["noise_power"], mu=p["mu"],
                    beta_threshold=p["beta"], trials=_trials(p))
        row = [p_db]
        for name in cols:
            t_d = p["t_d_alt"] if name == "fd_proposed_alt" else p["t_d"]
            case = "fd_proposed" if name == "fd_proposed_alt" else name
            rep = scenarios.energy_efficiency(case, scenarios.ScenarioConfig(t_d=t_d, **base), fading)
            row += [rep.energy_efficiency, rep.efficiency_std_error]
        row += [closed_form_efficiency(c, total, p["noise_power"], p["mu"]) for c in closed]
        rows.append(row)
    return header, rows


def _ee_convergence(p: dict, seed: int) -> Table:
    fading = FadingSpec(seed=seed)
    lo, hi = int(p["min_trials_exp"]), int(p["max_trials_exp"])
    if not 1 <= lo <= hi <= 7:
        raise DomainError("need 1 <= min_trials_exp <= max_trials_exp <= 7")
    counts = [10 ** e for e in range(lo, hi + 1)]
    header = ["p_db"]
    for n in counts:
        header += [f"ee_n{n}", f"ee_n{n}_se"]
    rows = []
    for p_db in _db_grid(p["p_min_db"], p["p_max_db"], p["p_step_db"]):
        total = p["noise_power"] * 10.0 ** (p_db / 10.0)
        row = [p_db]
        for n in counts:
            config = scenarios.ScenarioConfig(total_power=total, noise_power=p["noise_power"],
                                              beta_threshold=p["beta"], t_d=p["t_d"], trials=n)
            rep = scenarios.energy_efficiency("fd_proposed", config, fading)
            row += [rep.energy_efficiency, rep.efficiency_std_error]
        rows.append(row)
    return header, rows


# -- wideband --------------------------------------------------------------

def _wideband_demo(p: dict, seed: int) -> Table:
    spec = wideband.OfdmSpec(p["n_subcarriers"], p["cp_length"])
    powers = PowerPair(p["p_u"], p["p_d"])
    s2 = p["noise_power"]
    ch_u, ch_d, ch_i = wideband.demo_channels()
    coeffs = wideband.per_subcarrier_hopt(ch_u, ch_d, ch_i, spec, powers, s2)
    filt = wideband.synthesize_tdinis(coeffs.coeffs, spec)
    residual = wideband.residual_iui_per_subcarrier(ch_u, ch_d, ch_i, filt, spec, powers, s2, seed)
    unfiltered = wideband.unfiltered_interference(ch_i, spec, powers)
    sinr = wideband.subcarrier_sinr(ch_d, residual, spec, powers, s2)
    sinr_raw = wideband.subcarrier_sinr(ch_d, unfiltered, spec, powers, s2)
    n = spec.n_subcarriers
    H = [ch.frequency_response(n) for ch in (ch_u, ch_d, ch_i)]
    rows = []
    for k in range(n):
        link = wideband.bin_link(H[0][k], H[1][k], H[2][k], s2)
        closed = residual_interference(link, powers, coeffs.coeffs[k])
        c = coeffs.coeffs[k]
        rows.append([k, c.real, c.imag, unfiltered[k], residual[k], closed, sinr[k], sinr_raw[k]])
    header = ["subcarrier", "coeff_re", "coeff_im", "unfiltered", "residual",
              "narrowband_residual", "sinr", "sinr_unsuppressed"]
    return header, rows


# -- point evaluation ------------------------------------------------------

def _point_eval(p: dict, seed: int) -> Table:
    link = deterministic_link(p["h_u"], p["h_d"], p["h_i"], p["residual_si"], p["noise_power"])
    powers = PowerPair(p["p_u"], p["p_d"])
    ideal = deterministic_link(link.h_u, link.h_d, link.h_i, 0j, link.noise_power)
    rows = []
    coeff = h_opt(ideal, powers) if link.h_d != 0 else 0j
    rows += [["h_opt_re", coeff.real], ["h_opt_im", coeff.imag]]
    rows.append(["inp_unsuppressed", inp(ideal, powers, 0j)])
    if link.h_d != 0:
        rows.append(["inp_opt", inp(ideal, powers, coeff)])
        rows.append(["sinr_opt", sinr_opt(ideal, powers)])
        rows.append(["pj_power", scenarios.pj_power(ideal, powers.p_u)])
    h = complex(p["h"]) if p["h"] != "opt" else coeff
    report = sinr_general(link, powers, h)
    rows += [["h_re", h.real], ["h_im", h.imag],
             ["sinr_d", report.sinr_d], ["sinr_u", report.sinr_u],
             ["rate_d", report.rate_d], ["rate_u", report.rate_u], ["rate_sum", report.rate_sum]]
    if p["total_power"] > 0 and link.h_d != 0:
        budget = scenarios.solve_power_budget(ideal, p["total_power"])
        rows.append(["budget_p_u", budget.p_u])
    return ["quantity", "value"], rows


def _coefficient(text: str) -> str:
    if text != "opt":
        complex(text)
    return text


EXPERIMENTS = {
    e.name: e for e in [
        Experiment("delay_sweep", "IUI suppression ratio vs delay difference (analytic and waveform)",
                   _delay_sweep, {
                       "T": Param(float, 100e-6, "symbol duration [s]"),
                       "rolloff": Param(float, 0.22, "raised-cosine roll-off"),
                       "tau_max": Param(float, 5e-6, "largest delay difference [s]"),
                       "points": Param(int, 51, "number of delay points"),
                   }),
        Experiment("rate_vs_snr", "Sum rate of the four scenarios vs SNR, with Jensen bounds",
                   _rate_vs_snr, {
                       "snr_min_db": Param(float, 0.0),
                       "snr_max_db": Param(float, 30.0),
                       "snr_step_db": Param(float, 5.0),
                       "trials": Param(int, 100_000),
                       "beta": Param(float, 1.0, "uplink gate coefficient"),
                       "mu": Param(float, 0.5, "half-duplex uplink time share"),
                       "noise_power": Param(float, 1.0),
                   }),
        Experiment("energy_vs_power", "Energy efficiency vs total normalised power P/s2",
                   _energy_vs_power, {
                       "p_min_db": Param(float, 0.0),
                       "p_max_db": Param(float, 30.0),
                       "p_step_db": Param(float, 5.0),
                       "trials": Param(int, 100_000),
                       "beta": Param(float, 1.0),
                       "mu": Param(float, 0.5),
                       "t_d": Param(float, 0.1, "downlink power threshold"),
                       "t_d_alt": Param(float, 0.01, "second threshold (fd_proposed_alt)"),
                       "noise_power": Param(float, 1.0),
                   }),
        Experiment("ee_convergence", "Proposed-scheme efficiency for increasing trial counts",
                   _ee_convergence, {
                       "p_min_db": Param(float, 0.0),
                       "p_max_db": Param(float, 30.0),
                       "p_step_db": Param(float, 5.0),
                       "min_trials_exp": Param(int, 2),
                       "max_trials_exp": Param(int, 5),
                       "beta": Param(float, 1.0),
                       "t_d": Param(float, 0.1),
                       "noise_power": Param(float, 1.0),
                   }),
        Experiment("wideband_demo", "Per-subcarrier residual IUI through the time-domain filter",
                   _wideband_demo, {
                       "n_subcarriers": Param(int, 64),
                       "cp_length": Param(int, 16),
                       "p_u": Param(float, 10.0),
                       "p_d": Param(float, 10.0),
                       "noise_power": Param(float, 1.0),
                   }),
        Experiment("point_eval", "Closed-form quantities for one link realization",
                   _point_eval, {
                       "h_u": Param(complex, None, "uplink gain, e.g. 1+0.5j"),
                       "h_d": Param(complex, None, "downlink gain"),
                       "h_i": Param(complex, None, "interference gain"),
                       "residual_si": Param(complex, 0j),
                       "p_u": Param(float, 1.0),
                       "p_d": Param(float, 1.0),
                       "noise_power": Param(float, 1.0),
                       "h": Param(_coefficient, "opt", "coefficient, or 'opt'"),
                       "total_power": Param(float, 0.0, "if > 0, also solve the power budget"),
                   }),
    ]
}
