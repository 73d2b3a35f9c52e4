"""Closed-form coherent-state geometry: overlaps, distance, Gram matrices, Wigner grids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from coherent_amp.errors import DimensionMismatchError, InvalidInputError
from coherent_amp.fock import CoherentLabel

DEFAULT_PSD_TOL = 1e-10


def overlap(a: CoherentLabel, b: CoherentLabel) -> complex:
    """``<a|b> = exp(-(|a|^2 + |b|^2)/2 + conj(a) b)``."""
    za, zb = a.value, b.value
    return complex(np.exp(-0.5 * (a.amplitude**2 + b.amplitude**2) + za.conjugate() * zb))


def distance(a: CoherentLabel, b: CoherentLabel) -> float:
    """Squared separation ``|a - b|^2`` in phase space; ``|<a|b>|^2 = exp(-distance)``."""
    return abs(a.value - b.value) ** 2


@dataclass(frozen=True)
class GramMatrix:
    entries: np.ndarray
    labels: tuple

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def gram(labels: Sequence[CoherentLabel]) -> GramMatrix:
    """Pairwise overlaps ``G[i, j] = <labels[i]|labels[j]>``.

    Only the upper triangle is evaluated; the lower one is its conjugate and the
    diagonal is set to exactly 1.
    """
    labels = tuple(labels)
    if not labels:
        raise InvalidInputError("gram needs at least one label")
    z = np.array([lab.value for lab in labels])
    amp2 = np.abs(z) ** 2
    full = np.exp(-0.5 * (amp2[:, None] + amp2[None, :]) + np.conj(z)[:, None] * z[None, :])
    upper = np.triu(full, 1)
    entries = upper + upper.conj().T + np.eye(len(labels), dtype=complex)
    return GramMatrix(entries, labels)


@dataclass(frozen=True)
class PsdVerdict:
    is_psd: bool
    min_eigenvalue: float
    tolerance_used: float
    scale: float = 1.0

    @property
    def scaled_margin(self) -> float:
        """Min eigenvalue divided by the matrix scale behind the tolerance."""
        return self.min_eigenvalue / self.scale


def as_matrix(m) -> np.ndarray:
    return m.entries if isinstance(m, GramMatrix) else np.asarray(m)


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def psd_check(m, tol: float = DEFAULT_PSD_TOL) -> PsdVerdict:
    """Eigenvalue test ``lambda_min >= -tol * max(1, ||m||_2)``.

    The input is symmetrized first, so tiny Hermiticity defects are harmless.
    """
    m = as_matrix(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"psd_check needs a square matrix, got shape {m.shape}")
    w = np.linalg.eigvalsh(hermitian_part(m))
    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    threshold = tol * scale
    lam = float(w[0]) if w.size else 0.0
    return PsdVerdict(lam >= -threshold, lam, threshold, scale)


@dataclass(frozen=True)
class WignerGrid:
    window: tuple
    resolution: int
    values: np.ndarray

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.window[0], self.window[1], self.resolution)

    @property
    def ps(self) -> np.ndarray:
        return np.linspace(self.window[2], self.window[3], self.resolution)

    def integral(self) -> float:
        """Trapezoid-rule integral over the window."""
        inner = np.trapezoid(self.values, self.ps, axis=1)
        return float(np.trapezoid(inner, self.xs))

    def csv_rows(self):
        """(x, p, w) triples, x-major."""
        xs, ps = self.xs, self.ps
        for i, x in enumerate(xs):
            for j, p in enumerate(ps):
                yield float(x), float(p), float(self.values[i, j])

    def to_json(self) -> dict:
        return {
            "window": [float(v) for v in self.window],
            "resolution": self.resolution,
            "values": [float(v) for v in self.values.ravel()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "WignerGrid":
        res = int(data["resolution"])
        values = np.asarray(data["values"], dtype=float).reshape(res, res)
        return cls(tuple(data["window"]), res, values)


# Standard deviation of each quadrature for a coherent state with x = (a + a^dag)/sqrt(2).
WIGNER_SIGMA = 1.0 / math.sqrt(2.0)


def wigner_center(label: CoherentLabel) -> tuple:
    z = label.value
    return math.sqrt(2.0) * z.real, math.sqrt(2.0) * z.imag


def default_window(label: CoherentLabel, n_sigma: float = 6.0) -> tuple:
    x0, p0 = wigner_center(label)
    half = n_sigma * WIGNER_SIGMA
    return (x0 - half, x0 + half, p0 - half, p0 + half)


def wigner_grid(label: CoherentLabel, window=None, resolution: int = 201) -> WignerGrid:
    """Sample ``W(x, p) = exp(-(x - x0)^2 - (p - p0)^2) / pi`` on a uniform grid.

    ``values[i, j]`` is at ``(xs[i], ps[j])``. Peak height is ``1/pi``.
    """
    if resolution < 2:
        raise InvalidInputError("resolution must be >= 2")
    if window is None:
        window = default_window(label)
    x_min, x_max, p_min, p_max = (float(v) for v in window)
    if not (x_max > x_min and p_max > p_min):
        raise InvalidInputError(f"degenerate window {window}")
    x0, p0 = wigner_center(label)
    xs = np.linspace(x_min, x_max, resolution)
    ps = np.linspace(p_min, p_max, resolution)
    values = np.exp(-((xs[:, None] - x0) ** 2) - (ps[None, :] - p0) ** 2) / math.pi
    return WignerGrid((x_min, x_max, p_min, p_max), resolution, values)
