"""OFDM extension: a time-domain suppression filter built per subcarrier.

Under a cyclic prefix every subcarrier behaves like its own narrowband
link, so the optimal coefficient is computed bin by bin from the
channels' frequency responses.  Waiting for a whole OFDM symbol before
re-sending would defeat the purpose, so the per-bin coefficients are
turned into FIR taps by frequency sampling (inverse DFT).  The base
station runs its received uplink stream through that filter and re-sends
immediately; at bin centres the filter response equals the coefficients
exactly.

Filter taps are read with signed lags (index ``n >= N/2`` means lag
``n - N``) so that a filter compensating a downlink delay shows up as a
look-ahead.  :func:`path_lags` checks that every propagation path the
downlink user sees stays within ``[0, cp_length]``; outside that window
the per-bin model breaks and :class:`IciError` is raised.

Self-interference at the base station is assumed perfectly cancelled
here, which removes the retransmission recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .channel import LinkRealization
from .errors import DomainError, IciError
from .narrowband import PowerPair, h_opt

TAP_TOL = 1e-12


@dataclass(frozen=True)
class OfdmSpec:
    n_subcarriers: int
    cp_length: int
    sample_rate: float = 1.0

    def __post_init__(self):
        n = int(self.n_subcarriers)
        if n < 2 or n & (n - 1):
            raise DomainError(f"n_subcarriers must be a power of two >= 2, got {n}")
        if not 0 <= int(self.cp_length) < n:
            raise DomainError("cp_length must satisfy 0 <= cp_length < n_subcarriers")
        if not self.sample_rate > 0:
            raise DomainError("sample_rate must be > 0")


@dataclass(frozen=True)
class MultipathChannel:
    """Sparse tapped delay line: ``((delay_samples, gain), ...)``."""

    taps: tuple

    def __post_init__(self):
        taps = tuple((int(d), complex(g)) for d, g in self.taps)
        if not taps:
            raise DomainError("a channel needs at least one tap")
        delays = [d for d, _ in taps]
        if delays[0] < 0 or any(b <= a for a, b in zip(delays, delays[1:])):
            raise DomainError("tap delays must be non-negative and strictly increasing")
        if not all(math.isfinite(g.real) and math.isfinite(g.imag) for _, g in taps):
            raise DomainError("tap gains must be finite")
        object.__setattr__(self, "taps", taps)

    @classmethod
    def flat(cls, gain) -> "MultipathChannel":
        return cls(((0, gain),))

    @property
    def memory(self) -> int:
        return self.taps[-1][0]

    def impulse_response(self, n: int) -> np.ndarray:
        h = np.zeros(n, dtype=complex)
        for d, g in self.taps:
            h[d] += g
        return h

    def frequency_response(self, n: int) -> np.ndarray:
        return np.fft.fft(self.impulse_response(n))

    def as_lagged(self) -> "Lagged":
        h = np.zeros(self.memory + 1, dtype=complex)
        for d, g in self.taps:
            h[d] = g
        return Lagged(0, h)


class Lagged(NamedTuple):
    """Impulse response ``taps[j]`` at lag ``first + j`` (lag may be negative)."""

    first: int
    taps: np.ndarray

    @property
    def last(self) -> int:
        return self.first + len(self.taps) - 1

    def __mul__(self, other: "Lagged") -> "Lagged":
        return Lagged(self.first + other.first, np.convolve(self.taps, other.taps))

    def apply(self, stream: np.ndarray) -> np.ndarray:
        """Filter ``stream`` (zero outside its span), same length out."""
        full = np.convolve(stream, self.taps)
        out = np.zeros(len(stream), dtype=complex)
        # full[m] is output sample m + first
        lo = max(self.first, 0)
        src_lo = lo - self.first
        n = min(len(stream) - lo, len(full) - src_lo)
        if n > 0:
            out[lo:lo + n] = full[src_lo:src_lo + n]
        return out


@dataclass(frozen=True)
class TdinisFilter:
    """Time-domain suppression filter, one tap per subcarrier."""

    taps: np.ndarray

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=complex)
        if taps.ndim != 1 or not np.all(np.isfinite(taps)):
            raise DomainError("filter taps must be a finite 1-D sequence")
        object.__setattr__(self, "taps", taps)

    def frequency_response(self) -> np.ndarray:
        return np.fft.fft(self.taps)

    def as_lagged(self, tol: float = TAP_TOL) -> Lagged:
        """Significant taps with signed lags; all-zero filter gives one zero tap."""
        n = len(self.taps)
        scale = np.max(np.abs(self.taps))
        if scale == 0:
            return Lagged(0, np.zeros(1, dtype=complex))
        idx = np.flatnonzero(np.abs(self.taps) > tol * scale)
        lags = np.where(idx < n // 2, idx, idx - n)
        first, last = int(lags.min()), int(lags.max())
        h = np.zeros(last - first + 1, dtype=complex)
        h[lags - first] = self.taps[idx]
        return Lagged(first, h)

    @property
    def lag_span(self) -> tuple[int, int]:
        lagged = self.as_lagged()
        return lagged.first, lagged.last


class SubcarrierCoefficients(NamedTuple):
    coeffs: np.ndarray
    flagged: tuple  # bins where |H_d| = 0; coefficient forced to 0


def _check_channels(spec: OfdmSpec, *channels: MultipathChannel):
    for ch in channels:
        if ch.memory > spec.cp_length:
            raise DomainError(f"channel memory {ch.memory} exceeds cyclic prefix {spec.cp_length}")


def bin_link(H_u: complex, H_d: complex, H_i: complex, noise_power: float) -> LinkRealization:
    """Narrowband view of one subcarrier."""
    return LinkRealization(H_u, H_d, H_i, 0j, noise_power)


def per_subcarrier_hopt(ch_u: MultipathChannel, ch_d: MultipathChannel, ch_i: MultipathChannel,
                        spec: OfdmSpec, powers: PowerPair, noise_power: float) -> SubcarrierCoefficients:
    """Optimal narrowband coefficient on every subcarrier.

    ``powers`` and ``noise_power`` are per-subcarrier quantities.
    """
    _check_channels(spec, ch_u, ch_d, ch_i)
    n = spec.n_subcarriers
    H_u, H_d, H_i = (ch.frequency_response(n) for ch in (ch_u, ch_d, ch_i))
    scale = max(np.max(np.abs(H_d)), 1.0)
    coeffs = np.zeros(n, dtype=complex)
    flagged = []
    for k in range(n):
        if abs(H_d[k]) <= TAP_TOL * scale:
            flagged.append(k)
            continue
        coeffs[k] = h_opt(bin_link(H_u[k], H_d[k], H_i[k], noise_power), powers)
    return SubcarrierCoefficients(coeffs, tuple(flagged))


def synthesize_tdinis(coeffs: Sequence[complex], spec: OfdmSpec) -> TdinisFilter:
    """Frequency-sampling synthesis: the filter's DFT equals ``coeffs``."""
    c = np.asarray(coeffs, dtype=complex)
    if c.shape != (spec.n_subcarriers,):
        raise DomainError(f"expected {spec.n_subcarriers} coefficients, got shape {c.shape}")
    return TdinisFilter(np.fft.ifft(c))


def path_lags(ch_u: MultipathChannel, ch_d: MultipathChannel, ch_i: MultipathChannel,
              filt: TdinisFilter) -> dict:
    """Lag span of each path reaching the downlink user."""
    f = filt.as_lagged()
    d = ch_d.as_lagged()
    cancel = d * f * ch_u.as_lagged()
    noise = d * f
    i = ch_i.as_lagged()
    return {
        "interference": (i.first, i.last),
        "cancellation": (cancel.first, cancel.last),
        "bs_noise": (noise.first, noise.last),
        "downlink": (d.first, d.last),
    }


def _check_prefix(spans: dict, cp_length: int):
    for name, (lo, hi) in spans.items():
        if lo < 0 or hi > cp_length:
            raise IciError(
                f"{name} path spans lags [{lo}, {hi}], outside the cyclic prefix window [0, {cp_length}]")


def _ofdm_symbol(X: np.ndarray, cp: int) -> np.ndarray:
    x = np.fft.ifft(X)
    return np.concatenate([x[-cp:], x]) if cp else x


def _probe(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 4, n)
    return np.exp(1j * (np.pi / 4 + np.pi / 2 * bits))


def _measure_gain(path: Lagged, spec: OfdmSpec, seed: int) -> np.ndarray:
    """Per-bin gain of ``path`` seen through the OFDM receiver.

    Sends one random QPSK symbol after another (so a too-short prefix
    would leak the previous symbol into the window) and divides the
    received bins by the known probe.
    """
    n, cp = spec.n_subcarriers, spec.cp_length
    prev = _ofdm_symbol(_probe(n, seed + 1), cp)
    X = _probe(n, seed)
    stream = np.concatenate([prev, _ofdm_symbol(X, cp)])
    received = path.apply(stream)
    start = len(prev) + cp
    Y = np.fft.fft(received[start:start + n])
    return Y / X


def residual_iui_per_subcarrier(ch_u: MultipathChannel, ch_d: MultipathChannel, ch_i: MultipathChannel,
                                filt: TdinisFilter, spec: OfdmSpec, powers: PowerPair,
                                noise_power: float, seed: int = 0) -> np.ndarray:
    """Interference power left at the downlink user on each subcarrier.

    Simulates an OFDM frame in the time domain: the uplink symbol reaches
    the downlink user directly through ``ch_i`` and, via the base station,
    through ``ch_u``, the filter and ``ch_d``; the base station's own
    receiver noise rides along the re-sent copy.  The returned value is
    ``|G_iui[k]|^2 P_u + |G_noise[k]|^2 s2``, the INP minus the user's own
    noise floor.
    """
    _check_channels(spec, ch_u, ch_d, ch_i)
    if len(filt.taps) != spec.n_subcarriers:
        raise DomainError("filter length must equal n_subcarriers")
    spans = path_lags(ch_u, ch_d, ch_i, filt)
    _check_prefix(spans, spec.cp_length)
    f = filt.as_lagged()
    d = ch_d.as_lagged()
    direct = _measure_gain(ch_i.as_lagged(), spec, seed)
    via_bs = _measure_gain(d * f * ch_u.as_lagged(), spec, seed)
    bs_noise = _measure_gain(d * f, spec, seed)
    return np.abs(direct + via_bs) ** 2 * powers.p_u + np.abs(bs_noise) ** 2 * noise_power


def subcarrier_sinr(ch_d: MultipathChannel, residual: np.ndarray, spec: OfdmSpec,
                    powers: PowerPair, noise_power: float) -> np.ndarray:
    """Downlink SINR per subcarrier given the residual interference."""
    H_d = ch_d.frequency_response(spec.n_subcarriers)
    return np.abs(H_d) ** 2 * powers.p_d / (residual + noise_power)


def unfiltered_interference(ch_i: MultipathChannel, spec: OfdmSpec, powers: PowerPair) -> np.ndarray:
    """``|H_i[k]|^2 P_u``: interference power with no suppression."""
    return np.abs(ch_i.frequency_response(spec.n_subcarriers)) ** 2 * powers.p_u


def demo_channels() -> tuple[MultipathChannel, MultipathChannel, MultipathChannel]:
    """Frequency-selective example whose optimal filter fits in a short prefix.

    Uplink and downlink are single-tap; the interference channel has two
    taps, so the optimal per-bin coefficient is proportional to ``H_i``
    and the filter has two taps at the same lags.
    """
    ch_u = MultipathChannel.flat(0.9 + 0.3j)
    ch_d = MultipathChannel.flat(0.8 - 0.4j)
    ch_i = MultipathChannel(((1, 0.7 + 0.2j), (3, -0.4 + 0.5j)))
    return ch_u, ch_d, ch_i
