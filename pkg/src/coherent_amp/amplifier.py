"""Analytic amplification conditions for two coherent states.

The exact test is the distance inequality ``D(g1 a1, g2 a2) <= D(a1, a2)``,
expanded as

    2 a1 a2 (g1 g2 - 1) cos(eta) >= (g1^2 - 1) a1^2 + (g2^2 - 1) a2^2.

The gain-only envelope ``cos(eta) >= sqrt((g1^2-1)(g2^2-1)) / (g1 g2 - 1)``
follows from it via AM-GM and is therefore only necessary; it is tight when
``sqrt(g1^2-1) a1 = sqrt(g2^2-1) a2``. Both are exposed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from coherent_amp import _backend
from coherent_amp.errors import InvalidInputError
from coherent_amp.fock import CoherentLabel
from coherent_amp.geometry import gram
from coherent_amp.transform import Binding, FeasibilityReport, Status, make_pi

# Relative tolerance on the slack so that exact boundary points count as feasible.
SLACK_RTOL = 1e-12
MAX_SWEEP_POINTS = 10**8
AXES = ("alpha1", "alpha2", "eta", "g1", "g2")


def fold_phase(delta: float) -> float:
    """Relative phase folded into [0, pi]."""
    d = math.fmod(abs(delta), 2.0 * math.pi)
    return 2.0 * math.pi - d if d > math.pi else d


@dataclass(frozen=True)
class AmplifierInstance:
    state1: CoherentLabel
    state2: CoherentLabel
    gain1: float
    gain2: float

    def __post_init__(self):
        for g in (self.gain1, self.gain2):
            if not (g > 0.0 and math.isfinite(g)):
                raise InvalidInputError(f"gains must be finite and > 0, got {g}")

    @classmethod
    def from_params(cls, alpha1, alpha2, eta, g1, g2) -> "AmplifierInstance":
        return cls(CoherentLabel(alpha1, 0.0), CoherentLabel(alpha2, eta), g1, g2)

    @property
    def eta(self) -> float:
        return fold_phase(self.state1.phase - self.state2.phase)

    @property
    def inputs(self) -> Tuple[CoherentLabel, CoherentLabel]:
        return (self.state1, self.state2)

    @property
    def outputs(self) -> Tuple[CoherentLabel, CoherentLabel]:
        return (self.state1.scaled(self.gain1), self.state2.scaled(self.gain2))


def inequality_terms(a1, a2, eta, g1, g2):
    """Left and right sides of the expanded distance inequality."""
    lhs = 2.0 * a1 * a2 * (g1 * g2 - 1.0) * math.cos(eta)
    rhs = (g1 * g1 - 1.0) * a1 * a1 + (g2 * g2 - 1.0) * a2 * a2
    return lhs, rhs


def slack_scale(a1, a2, g1, g2):
    """Bound on the magnitude of every term in the inequality; works on scalars and arrays."""
    return (g1 * g1 + 1.0) * a1 * a1 + (g2 * g2 + 1.0) * a2 * a2


def exact_feasible(inst: AmplifierInstance) -> FeasibilityReport:
    """Deterministic amplification test for two states; margin = LHS - RHS.

    The witness is the entrywise Gram ratio, attached for downstream Kraus
    construction only; the verdict comes from the inequality alone.
    """
    a1, a2 = inst.state1.amplitude, inst.state2.amplitude
    lhs, rhs = inequality_terms(a1, a2, inst.eta, inst.gain1, inst.gain2)
    margin = lhs - rhs
    ok = margin >= -SLACK_RTOL * slack_scale(a1, a2, inst.gain1, inst.gain2)
    witness = None
    if ok:
        ga = gram(inst.inputs).entries
        gb = gram(inst.outputs).entries
        witness = make_pi(ga / gb)
    return FeasibilityReport(
        Status.FEASIBLE if ok else Status.INFEASIBLE,
        float(margin),
        Binding.ANALYTIC_BOUNDARY,
        witness,
        extra={"lhs": lhs, "rhs": rhs},
    )


def _check_gain_at_least_one(*gains):
    for g in gains:
        if not g >= 1.0:
            raise InvalidInputError(f"envelope needs gains >= 1, got {g}")


def envelope_rhs(g1: float, g2: float) -> float:
    _check_gain_at_least_one(g1, g2)
    if g1 == 1.0 and g2 == 1.0:
        return -1.0
    return math.sqrt((g1 * g1 - 1.0) * (g2 * g2 - 1.0)) / (g1 * g2 - 1.0)


def theorem1_envelope(eta: float, g1: float, g2: float) -> bool:
    """Gain-only necessary condition; both gains equal to 1 counts as true."""
    rhs = envelope_rhs(g1, g2)
    return math.cos(eta) >= rhs - SLACK_RTOL


def equality_locus(g1: float, g2: float) -> float:
    """Amplitude ratio a1/a2 at which the envelope is attained."""
    if not (g1 > 1.0 and g2 > 1.0):
        raise InvalidInputError(f"equality locus needs both gains > 1, got {g1}, {g2}")
    return math.sqrt(g2 * g2 - 1.0) / math.sqrt(g1 * g1 - 1.0)


def corollary1_feasible(alpha1: float, alpha2: float, eta: float, g1: float) -> FeasibilityReport:
    """Equal-output-amplitude case: g2 is forced to ``g1 * alpha1 / alpha2``.

    Decided by :func:`exact_feasible` on the completed instance rather than by
    the rearranged cosine bound, whose denominator changes sign.
    """
    if alpha2 <= 0.0:
        raise InvalidInputError("alpha2 must be > 0 for the equal-output constraint")
    if alpha1 <= 0.0:
        raise InvalidInputError("alpha1 must be > 0 for the equal-output constraint")
    g2 = g1 * alpha1 / alpha2
    rep = exact_feasible(AmplifierInstance.from_params(alpha1, alpha2, eta, g1, g2))
    extra = dict(rep.extra)
    extra["g2"] = g2
    return FeasibilityReport(rep.status, rep.margin, rep.binding, rep.witness, rep.iterations, extra)


@dataclass(frozen=True)
class MaxGain:
    """Largest g1 under the equal-output constraint; ``unbounded`` when eta = 0."""

    g1max: float
    g2: float
    unbounded: bool = False


def max_gain(a1: CoherentLabel, a2: CoherentLabel) -> MaxGain:
    alpha1, alpha2 = a1.amplitude, a2.amplitude
    if alpha1 <= 0.0:
        raise InvalidInputError("max_gain needs alpha1 > 0")
    eta = fold_phase(a1.phase - a2.phase)
    c = math.cos(eta)
    if eta == 0.0 or c >= 1.0:
        return MaxGain(math.inf, math.inf, True)
    g = math.sqrt((alpha1**2 + alpha2**2 - 2.0 * alpha1 * alpha2 * c) / (2.0 * alpha1**2 * (1.0 - c)))
    g2 = g * alpha1 / alpha2 if alpha2 > 0.0 else math.inf
    return MaxGain(g, g2)


@dataclass(frozen=True)
class SweepSpec:
    """Axis ranges ``name -> (min, max, steps)`` plus fixed values for the rest."""

    axes: Dict[str, Tuple[float, float, int]] = field(default_factory=dict)
    fixed: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for name, (lo, hi, steps) in self.axes.items():
            if name not in AXES:
                raise InvalidInputError(f"unknown sweep axis {name!r}")
            if steps < 1 or lo > hi:
                raise InvalidInputError(f"bad range for {name}: {lo}:{hi}:{steps}")
            if name == "eta" and (lo < 0.0 or hi > math.pi):
                raise InvalidInputError("eta axis must lie within [0, pi]")
        eta = self.fixed.get("eta")
        if eta is not None and "eta" not in self.axes and not (0.0 <= eta <= math.pi):
            raise InvalidInputError("fixed eta must lie within [0, pi]")
        for name in AXES:
            if name not in self.axes and name not in self.fixed:
                raise InvalidInputError(f"sweep parameter {name!r} is neither swept nor fixed")
        unknown = set(self.fixed) - set(AXES)
        if unknown:
            raise InvalidInputError(f"unknown fixed parameters {sorted(unknown)}")

    def axis_values(self, name: str) -> np.ndarray:
        if name in self.axes:
            lo, hi, steps = self.axes[name]
            return np.linspace(lo, hi, int(steps)) if steps > 1 else np.array([float(lo)])
        return np.array([float(self.fixed[name])])

    @property
    def size(self) -> int:
        return math.prod(len(self.axis_values(n)) for n in AXES)


@dataclass(frozen=True)
class SweepRow:
    alpha1: float
    alpha2: float
    eta: float
    g1: float
    g2: float
    feasible: bool
    margin: float
    g1max: Optional[float]


def sweep_arrays(spec: SweepSpec, num_threads: Optional[int] = None):
    """Column arrays for every grid point, axis order alpha1, alpha2, eta, g1, g2 (last fastest)."""
    if spec.size > MAX_SWEEP_POINTS:
        raise InvalidInputError(f"sweep has {spec.size} points, limit is {MAX_SWEEP_POINTS}")
    values = [spec.axis_values(n) for n in AXES]
    threads = _backend.thread_count() if num_threads is None else num_threads
    margin, gmax, shape = _backend.kernels.sweep_grid(*values, num_threads=threads)
    grids = np.meshgrid(*values, indexing="ij")
    cols = {n: g.reshape(-1) for n, g in zip(AXES, grids)}
    a1, a2, _, x1, x2 = (cols[n] for n in AXES)
    cols["feasible"] = margin >= -SLACK_RTOL * slack_scale(a1, a2, x1, x2)
    cols["margin"] = margin
    cols["g1max"] = gmax
    return cols


def sweep(spec: SweepSpec, num_threads: Optional[int] = None) -> List[SweepRow]:
    """Evaluate the exact test (and the equal-output max gain) over the grid."""
    cols = sweep_arrays(spec, num_threads)
    rows = []
    for i in range(cols["margin"].size):
        gm = float(cols["g1max"][i])
        rows.append(
            SweepRow(
                *(float(cols[n][i]) for n in AXES),
                feasible=bool(cols["feasible"][i]),
                margin=float(cols["margin"][i]),
                g1max=None if math.isnan(gm) else gm,
            )
        )
    return rows
