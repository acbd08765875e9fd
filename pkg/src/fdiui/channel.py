"""Channel coefficients for the three-node network and Rayleigh samplers.

Gains are plain Python/numpy complex numbers.  A :class:`LinkRealization`
holds one draw of every link; :class:`LinkBatch` holds many draws as
arrays and is what the Monte Carlo engines consume.

Random draws come from a counter-based generator (Philox) keyed by
``(seed, block)``: trial ``i`` always lands in block ``i // BLOCK_SIZE``
at the same offset, so any split of a trial range across workers
reproduces the same numbers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DomainError, EmptyRequestError

ComplexGain = complex

BLOCK_SIZE = 16384
_LINKS = 3  # h_u, h_d, h_i


def _finite_gain(name: str, value) -> complex:
    try:
        g = complex(value)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} is not a complex number: {value!r}") from exc
    if not cmath.isfinite(g):
        raise DomainError(f"{name} must be finite, got {g!r}")
    return g


@dataclass(frozen=True)
class LinkRealization:
    """One draw of every gain in the network.

    ``residual_si`` is ``h_si - h~_si``, the self-interference left after
    cancellation at the base station; zero means perfect cancellation.
    """

    h_u: complex
    h_d: complex
    h_i: complex
    residual_si: complex = 0j
    noise_power: float = 1.0

    def __post_init__(self):
        for name in ("h_u", "h_d", "h_i", "residual_si"):
            object.__setattr__(self, name, _finite_gain(name, getattr(self, name)))
        noise = float(self.noise_power)
        if not math.isfinite(noise) or noise <= 0.0:
            raise DomainError(f"noise_power must be finite and > 0, got {noise!r}")
        object.__setattr__(self, "noise_power", noise)

    @property
    def g_u(self) -> float:
        return abs(self.h_u) ** 2

    @property
    def g_d(self) -> float:
        return abs(self.h_d) ** 2

    @property
    def g_i(self) -> float:
        return abs(self.h_i) ** 2


def deterministic_link(h_u, h_d, h_i, residual_si=0j, noise_power: float = 1.0) -> LinkRealization:
    """Wrap fixed gains, e.g. for closed-form checks."""
    return LinkRealization(h_u, h_d, h_i, residual_si, noise_power)


@dataclass(frozen=True)
class FadingSpec:
    """Per-link variances of circularly symmetric complex Gaussian gains."""

    variance_u: float = 1.0
    variance_d: float = 1.0
    variance_i: float = 1.0
    seed: int = 0

    def __post_init__(self):
        for name in ("variance_u", "variance_d", "variance_i"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0.0:
                raise DomainError(f"{name} must be finite and > 0, got {v!r}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def variances(self) -> tuple[float, float, float]:
        return (self.variance_u, self.variance_d, self.variance_i)


@dataclass(frozen=True)
class LinkBatch:
    """Many independent draws stored column-wise."""

    h_u: np.ndarray
    h_d: np.ndarray
    h_i: np.ndarray
    residual_si: complex
    noise_power: float

    def __len__(self) -> int:
        return self.h_u.shape[0]

    def __getitem__(self, index: int) -> LinkRealization:
        return LinkRealization(
            complex(self.h_u[index]),
            complex(self.h_d[index]),
            complex(self.h_i[index]),
            self.residual_si,
            self.noise_power,
        )

    def __iter__(self) -> Iterator[LinkRealization]:
        for k in range(len(self)):
            yield self[k]

    @property
    def g_u(self) -> np.ndarray:
        return np.abs(self.h_u) ** 2

    @property
    def g_d(self) -> np.ndarray:
        return np.abs(self.h_d) ** 2

    @property
    def g_i(self) -> np.ndarray:
        return np.abs(self.h_i) ** 2


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Independent Philox stream for one block of trials."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _unit_block(seed: int, block: int) -> np.ndarray:
    # Shape (links, 2, BLOCK_SIZE); always drawn whole so a trial's value
    # does not depend on how many trials were requested.
    return block_generator(seed, block).standard_normal((_LINKS, 2, BLOCK_SIZE))


def unit_gains(seed: int, count: int, start: int = 0) -> np.ndarray:
    """CN(0, 1) draws for all three links, trials ``start .. start+count-1``.

    Returns a complex array of shape ``(3, count)`` in link order
    ``(h_u, h_d, h_i)``.
    """
    if count < 1:
        raise EmptyRequestError("count must be >= 1")
    if start < 0:
        raise DomainError("start must be >= 0")
    stop = start + count
    out = np.empty((_LINKS, count), dtype=complex)
    first, last = start // BLOCK_SIZE, (stop - 1) // BLOCK_SIZE
    pos = 0
    for block in range(first, last + 1):
        z = _unit_block(seed, block)
        lo = max(start - block * BLOCK_SIZE, 0)
        hi = min(stop - block * BLOCK_SIZE, BLOCK_SIZE)
        n = hi - lo
        out[:, pos:pos + n] = (z[:, 0, lo:hi] + 1j * z[:, 1, lo:hi]) * math.sqrt(0.5)
        pos += n
    return out


def sample_rayleigh(spec: FadingSpec, noise_power: float, residual_si=0j, count: int = 1,
                    start: int = 0) -> LinkBatch:
    """Draw ``count`` independent Rayleigh realizations of every link.

    Each gain is CN(0, variance) for its link.  The residual
    self-interference is a fixed capability level, not a faded link.
    ``start`` selects a window of the trial sequence, so disjoint windows
    can be drawn in parallel and concatenated.
    """
    if count < 1:
        raise EmptyRequestError("sample_rayleigh needs count >= 1")
    # Validates noise power and residual SI the same way a single draw would.
    probe = LinkRealization(0j, 0j, 0j, residual_si, noise_power)
    z = unit_gains(spec.seed, count, start)
    scale = np.sqrt(np.asarray(spec.variances))[:, None]
    z *= scale
    return LinkBatch(z[0], z[1], z[2], probe.residual_si, probe.noise_power)
