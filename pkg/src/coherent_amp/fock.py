"""Coherent states in a truncated Fock basis."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy.special import pdtrc

from coherent_amp.errors import (
    DimensionMismatchError,
    DimensionOverflowError,
    InvalidInputError,
)

TWO_PI = 2.0 * math.pi


def normalize_phase(theta: float) -> float:
    """Map an angle into [0, 2*pi)."""
    out = math.fmod(theta, TWO_PI)
    if out < 0.0:
        out += TWO_PI
    # fmod of a tiny negative angle can round up to exactly 2*pi
    if out >= TWO_PI:
        out = 0.0
    return out


@dataclass(frozen=True, eq=False)
class CoherentLabel:
    """A pure coherent state ``|amplitude * exp(i * phase)>``.

    Vacuum labels compare equal whatever their stored phase.
    """

    amplitude: float
    phase: float = 0.0

    def __post_init__(self):
        amp = float(self.amplitude)
        if not math.isfinite(amp) or amp < 0.0:
            raise InvalidInputError(f"amplitude must be finite and >= 0, got {amp}")
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "phase", normalize_phase(float(self.phase)))

    @classmethod
    def from_complex(cls, z: complex) -> "CoherentLabel":
        return cls(abs(z), math.atan2(z.imag, z.real))

    @property
    def value(self) -> complex:
        return self.amplitude * complex(math.cos(self.phase), math.sin(self.phase))

    def scaled(self, gain: float) -> "CoherentLabel":
        """Same phase, amplitude multiplied by ``gain``."""
        return CoherentLabel(self.amplitude * gain, self.phase)

    def _key(self):
        return (0.0, 0.0) if self.amplitude == 0.0 else (self.amplitude, self.phase)

    def __eq__(self, other):
        if not isinstance(other, CoherentLabel):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"CoherentLabel(amplitude={self.amplitude!r}, phase={self.phase!r})"


@dataclass(frozen=True)
class TruncationConfig:
    """How to pick the Fock cutoff.

    ``explicit_dim`` and ``max_dim`` count basis vectors (cutoff + 1).
    """

    tail_epsilon: float = 1e-12
    max_dim: int = 4096
    explicit_dim: Optional[int] = None

    def __post_init__(self):
        if not (0.0 < self.tail_epsilon < 1.0):
            raise InvalidInputError(f"tail_epsilon must lie in (0, 1), got {self.tail_epsilon}")
        if self.max_dim < 1:
            raise InvalidInputError("max_dim must be positive")
        if self.explicit_dim is not None and self.explicit_dim < 1:
            raise InvalidInputError("explicit_dim must be positive")


def truncation_dim(labels: Iterable[CoherentLabel], config: TruncationConfig = TruncationConfig()) -> int:
    """Smallest photon-number cutoff N with Poisson tail P(n > N) < epsilon for every label.

    Vectors built at this cutoff have ``N + 1`` entries; see :func:`fock_dim`.
    """
    labels = list(labels)
    if not labels:
        raise InvalidInputError("at least one label is required")
    if config.explicit_dim is not None:
        if config.explicit_dim > config.max_dim:
            raise DimensionOverflowError(labels[0], config.explicit_dim, config.max_dim)
        return config.explicit_dim - 1

    cutoffs = np.arange(config.max_dim)
    worst = 0
    for label in sorted(labels, key=lambda lab: lab.amplitude, reverse=True):
        mean = label.amplitude**2
        if mean == 0.0:
            continue
        # pdtrc(k, m) = P(n > k) for n ~ Poisson(m)
        ok = np.nonzero(pdtrc(cutoffs, mean) < config.tail_epsilon)[0]
        if ok.size == 0:
            raise DimensionOverflowError(label, _required_dim(mean, config), config.max_dim)
        worst = max(worst, int(ok[0]))
    return worst


def _required_dim(mean, config):
    n = config.max_dim
    while pdtrc(n - 1, mean) >= config.tail_epsilon:
        n *= 2
    return n


def fock_dim(labels: Iterable[CoherentLabel], config: TruncationConfig = TruncationConfig()) -> int:
    """Vector length needed to hold every label: cutoff + 1."""
    return truncation_dim(labels, config) + 1


def coherent_vector(label: CoherentLabel, dim: int) -> np.ndarray:
    """Fock coefficients ``c_n``, n = 0..dim-1, of a coherent state.

    Built by the recurrence ``c_{n+1} = c_n * z / sqrt(n + 1)`` starting from
    ``exp(-|z|^2 / 2)``, so no factorials appear.
    """
    if dim < 1:
        raise InvalidInputError(f"dim must be >= 1, got {dim}")
    z = label.value
    c0 = math.exp(-0.5 * label.amplitude**2)
    if c0 == 0.0 and label.amplitude > 0.0:
        raise OverflowError(f"amplitude {label.amplitude} underflows the vacuum coefficient")
    steps = np.empty(dim, dtype=complex)
    steps[0] = c0
    steps[1:] = z / np.sqrt(np.arange(1, dim))
    return np.cumprod(steps)


def inner_product(u: np.ndarray, v: np.ndarray) -> complex:
    """``<u|v>``, conjugate-linear in ``u``."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise DimensionMismatchError(f"vector shapes differ: {u.shape} vs {v.shape}")
    return complex(np.vdot(u, v))


def state_matrix(labels: Iterable[CoherentLabel], dim: int) -> np.ndarray:
    """Stack coherent vectors as rows, shape (len(labels), dim)."""
    return np.array([coherent_vector(lab, dim) for lab in labels])
