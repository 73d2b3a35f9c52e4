"""Coherent states through pure loss, and discrimination with imperfect detectors.

Pure loss with transmissivity ``exp(-gamma t)`` keeps coherent states coherent
(amplitude times ``exp(-gamma t / 2)``), so the phase-space distance stays
meaningful and decays as ``D(t) = exp(-gamma t) D(0)``. One consequence: the
ratio of amplified to unamplified distance is constant in time under this
channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

from coherent_amp.amplifier import AmplifierInstance, exact_feasible
from coherent_amp.errors import InvalidInputError
from coherent_amp.fock import CoherentLabel
from coherent_amp.geometry import distance, overlap


@dataclass(frozen=True)
class LossChannel:
    gamma: float

    def __post_init__(self):
        if not self.gamma >= 0.0:
            raise InvalidInputError(f"decay rate must be >= 0, got {self.gamma}")

    def transmissivity(self, t: float) -> float:
        return math.exp(-self.gamma * t)


def _evolve(label: CoherentLabel, gamma: float, t: float) -> CoherentLabel:
    return CoherentLabel(label.amplitude * math.exp(-0.5 * gamma * t), label.phase)


def loss_evolve(label: CoherentLabel, ch: LossChannel, t: float) -> CoherentLabel:
    if t < 0.0:
        raise InvalidInputError(f"time must be >= 0, got {t}")
    return _evolve(label, ch.gamma, t)


@dataclass(frozen=True)
class DecayReport:
    time: float
    distance: float
    rate: float
    analytic_rate: float
    fd_rate: float


def _fd_step(gamma: float, t: float) -> float:
    # balances O(h^2) truncation against O(eps/h) rounding for exp(-gamma t)
    return 1e-5 * max(1.0, t) / max(1.0, gamma)


def distance_trajectory(a: CoherentLabel, b: CoherentLabel, ch: LossChannel, times: Sequence[float]) -> List[DecayReport]:
    """Distance and its time derivative along the channel.

    ``distance`` is measured between the evolved labels; ``analytic_rate`` is
    ``-gamma * D(t)`` and ``fd_rate`` a central difference of the evolved
    distance (the evolution formula is extended to slightly negative times for
    the stencil at t = 0).
    """
    times = [float(t) for t in times]
    if any(t < 0.0 for t in times):
        raise InvalidInputError("times must be nonnegative")
    if any(t2 < t1 for t1, t2 in zip(times, times[1:])):
        raise InvalidInputError("times must be sorted ascending")
    out = []
    g = ch.gamma
    for t in times:
        d = distance(loss_evolve(a, ch, t), loss_evolve(b, ch, t))
        h = _fd_step(g, t)
        d_plus = distance(_evolve(a, g, t + h), _evolve(b, g, t + h))
        d_minus = distance(_evolve(a, g, t - h), _evolve(b, g, t - h))
        analytic = -g * d
        out.append(DecayReport(t, d, analytic, analytic, (d_plus - d_minus) / (2.0 * h)))
    return out


@dataclass(frozen=True)
class Comparison:
    time: float
    d_plain: float
    d_amp: float
    ratio: float
    sigma_plain: float
    sigma_amp: float
    amplification_feasible: bool


def _ratio(num: float, den: float) -> float:
    if den == 0.0:
        return math.nan if num == 0.0 else math.inf
    return num / den


def compare_amplified(a: CoherentLabel, b: CoherentLabel, g1: float, g2: float, ch: LossChannel, t: float) -> Comparison:
    """Original pair vs. the pair amplified by (g1, g2), both sent through ``ch`` for time ``t``.

    An infeasible gain pair is still evaluated; ``amplification_feasible``
    records the verdict.
    """
    feasible = exact_feasible(AmplifierInstance(a, b, g1, g2)).feasible
    pa, pb = loss_evolve(a, ch, t), loss_evolve(b, ch, t)
    qa, qb = loss_evolve(a.scaled(g1), ch, t), loss_evolve(b.scaled(g2), ch, t)
    d_plain, d_amp = distance(pa, pb), distance(qa, qb)
    return Comparison(t, d_plain, d_amp, _ratio(d_amp, d_plain), -ch.gamma * d_plain, -ch.gamma * d_amp, feasible)


def helstrom_error(a: CoherentLabel, b: CoherentLabel, prior_a: float = 0.5) -> float:
    """Minimum error probability for telling two pure states apart."""
    if not 0.0 <= prior_a <= 1.0:
        raise InvalidInputError(f"prior must lie in [0, 1], got {prior_a}")
    s = abs(overlap(a, b)) ** 2
    return 0.5 * (1.0 - math.sqrt(max(0.0, 1.0 - 4.0 * prior_a * (1.0 - prior_a) * s)))


@dataclass(frozen=True)
class DetectorModel:
    """Gated on/off photodetector with dark-count probability per gate and efficiency."""

    dark_prob: float = 0.0
    efficiency: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.dark_prob < 1.0:
            raise InvalidInputError(f"dark_prob must lie in [0, 1), got {self.dark_prob}")
        if not 0.0 < self.efficiency <= 1.0:
            raise InvalidInputError(f"efficiency must lie in (0, 1], got {self.efficiency}")

    def click_probability(self, label: CoherentLabel) -> float:
        return 1.0 - (1.0 - self.dark_prob) * math.exp(-self.efficiency * label.amplitude**2)


@dataclass(frozen=True)
class ClickDecision:
    p_err: float
    threshold_rule: dict  # outcome ("click" / "no-click") -> "a" or "b"


def click_discrimination_error(
    a: CoherentLabel, b: CoherentLabel, det: DetectorModel, prior_a: float = 0.5
) -> ClickDecision:
    """Maximum-likelihood guess from a single on/off detection.

    For each outcome the hypothesis with the larger joint probability is
    chosen (ties go to ``a``); the error is the summed losing mass.
    """
    if not 0.0 <= prior_a <= 1.0:
        raise InvalidInputError(f"prior must lie in [0, 1], got {prior_a}")
    prior_b = 1.0 - prior_a
    qa, qb = det.click_probability(a), det.click_probability(b)
    rule = {}
    p_err = 0.0
    for outcome, pa, pb in (("click", qa, qb), ("no-click", 1.0 - qa, 1.0 - qb)):
        ja, jb = prior_a * pa, prior_b * pb
        if ja >= jb:
            rule[outcome] = "a"
            p_err += jb
        else:
            rule[outcome] = "b"
            p_err += ja
    return ClickDecision(p_err, rule)
