"""Pure-state set transformations: the Pi-matrix feasibility conditions.

A map sending ``|psi_i>`` to ``|phi_i>`` with success probability ``p_i``
exists iff some Hermitian ``Pi`` has ``Pi >= 0``, ``diag(Pi) = p`` and
``G_A - Pi o G_B >= 0`` (``o`` is the Hadamard product). This module checks
those conditions for a given ``Pi``, searches for one, and factorizes it into
the coefficient matrix used to build Kraus operators.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from coherent_amp import _backend
from coherent_amp.errors import (
    BisectionError,
    DimensionMismatchError,
    InvalidInputError,
    NotPSDError,
)
from coherent_amp.geometry import DEFAULT_PSD_TOL, GramMatrix, PsdVerdict, as_matrix, hermitian_part, psd_check

# Floor for |G_B| when dividing by it.
GB_FLOOR = 1e-300
# Smallest per-entry metric weight in the feasibility search; see _search_scale.
SCALE_FLOOR = 1e-3


class Status(str, enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    INCONCLUSIVE = "inconclusive"


class Binding(str, enum.Enum):
    PI_POSITIVITY = "pi-positivity"
    RESIDUAL_POSITIVITY = "residual-positivity"
    ANALYTIC_BOUNDARY = "analytic-boundary"


@dataclass(frozen=True)
class PiMatrix:
    entries: np.ndarray
    probabilities: np.ndarray
    valid: bool

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def make_pi(entries, tol: float = DEFAULT_PSD_TOL) -> PiMatrix:
    """Wrap a Hermitian matrix, reading probabilities off its diagonal."""
    entries = hermitian_part(np.asarray(entries, dtype=complex))
    probs = np.real(np.diag(entries)).copy()
    valid = bool(psd_check(entries, tol).is_psd and np.all(probs >= -tol) and np.all(probs <= 1 + tol))
    return PiMatrix(entries, probs, valid)


@dataclass(frozen=True)
class CoefficientMatrix:
    entries: np.ndarray

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def gram(self) -> np.ndarray:
        """``C^dagger C``, which reproduces the factorized Pi."""
        return self.entries.conj().T @ self.entries


@dataclass(frozen=True)
class ResidualGram:
    entries: np.ndarray
    verdict: PsdVerdict


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of a feasibility decision.

    ``margin`` is the signed slack of the binding condition: a scaled minimum
    eigenvalue for the matrix checks, the distance-inequality slack for the
    analytic two-state check, or minus the inter-set gap for an infeasible
    search.
    """

    status: Status
    margin: float
    binding: Binding
    witness: Optional[PiMatrix] = None
    iterations: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE

    @property
    def inconclusive(self) -> bool:
        return self.status is Status.INCONCLUSIVE


def _pair(ga, gb):
    a = as_matrix(ga)
    b = as_matrix(gb)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"Gram shapes differ or are not square: {a.shape} vs {b.shape}")
    return a, b


def _entries(pi) -> np.ndarray:
    return pi.entries if isinstance(pi, PiMatrix) else np.asarray(pi, dtype=complex)


def pi_deterministic(ga: GramMatrix, gb: GramMatrix, tol: float = DEFAULT_PSD_TOL):
    """The unique candidate ``Pi = G_A / G_B`` for a success-probability-1 map.

    With every ``p_i = 1`` the residual must vanish, so ``Pi`` is fixed
    entrywise; the map exists iff that ratio is positive semidefinite.
    """
    a, b = _pair(ga, gb)
    if np.any(np.abs(b) == 0.0):
        raise InvalidInputError("G_B has a zero entry; the entrywise ratio is undefined")
    pi = make_pi(a / b, tol)
    report = lemma1_check(a, b, pi, tol)
    return pi, report


def lemma1_check(ga, gb, pi, tol: float = DEFAULT_PSD_TOL) -> FeasibilityReport:
    """Check all three conditions for a given Pi.

    Condition 2 is checked against ``pi.probabilities`` when a :class:`PiMatrix`
    is passed; a diagonal that disagrees by more than ``tol`` makes the report
    infeasible with a negative margin equal to minus the mismatch.
    """
    a, b = _pair(ga, gb)
    m = _entries(pi)
    if m.shape != a.shape:
        raise DimensionMismatchError(f"Pi shape {m.shape} does not match Gram shape {a.shape}")
    probs = pi.probabilities if isinstance(pi, PiMatrix) else np.real(np.diag(m))

    pi_verdict = psd_check(m, tol)
    resid = residual_gram(a, b, m, tol)
    diag_err = float(np.max(np.abs(np.diag(m) - probs), initial=0.0))
    range_err = float(max(np.max(-probs, initial=0.0), np.max(probs - 1.0, initial=0.0)))

    pi_margin = pi_verdict.scaled_margin
    k_margin = resid.verdict.scaled_margin
    if pi_margin <= k_margin:
        margin, binding = pi_margin, Binding.PI_POSITIVITY
    else:
        margin, binding = k_margin, Binding.RESIDUAL_POSITIVITY
    ok = pi_verdict.is_psd and resid.verdict.is_psd
    if diag_err > tol or range_err > tol:
        ok = False
        margin, binding = -max(diag_err, range_err), Binding.PI_POSITIVITY
    witness = pi if isinstance(pi, PiMatrix) else make_pi(m, tol)
    return FeasibilityReport(
        Status.FEASIBLE if ok else Status.INFEASIBLE,
        float(margin),
        binding,
        witness if ok else None,
        extra={"pi_min_eigenvalue": pi_verdict.min_eigenvalue, "residual_min_eigenvalue": resid.verdict.min_eigenvalue},
    )


def residual_gram(ga, gb, pi, tol: float = DEFAULT_PSD_TOL) -> ResidualGram:
    """``K = G_A - Pi o G_B`` with its positivity verdict."""
    a, b = _pair(ga, gb)
    m = _entries(pi)
    if m.shape != a.shape:
        raise DimensionMismatchError(f"Pi shape {m.shape} does not match Gram shape {a.shape}")
    k = hermitian_part(a - m * b)
    return ResidualGram(k, psd_check(k, tol))


def _search_scale(gb: np.ndarray) -> np.ndarray:
    """Per-state weights s with s_i s_j ~ max(|G_B[i,j]|, SCALE_FLOOR).

    Least squares on the logarithms; exact for two states.
    """
    n = gb.shape[0]
    if n == 1:
        return np.ones(1)
    target = np.log(np.maximum(np.abs(gb), SCALE_FLOOR))
    iu = np.triu_indices(n, 1)
    design = np.zeros((len(iu[0]), n))
    design[np.arange(len(iu[0])), iu[0]] = 1.0
    design[np.arange(len(iu[0])), iu[1]] = 1.0
    if n == 2:
        log_s = np.full(2, 0.5 * target[0, 1])
    else:
        log_s = np.linalg.lstsq(design, target[iu], rcond=None)[0]
    return np.exp(log_s)


def dykstra_feasibility(
    ga,
    gb,
    p,
    max_iters: int = 50000,
    tol: float = 1e-9,
    stall_rtol: float = 1e-8,
    stall_window: int = 50,
) -> FeasibilityReport:
    """Search for a Pi meeting all three conditions at success probabilities ``p``.

    Alternates between the cone {Pi >= 0, K >= 0} and the affine set tying
    ``Pi`` and ``K`` to the Gram matrices, with Dykstra's correction on the cone
    step. Verdicts:

    * feasible: an iterate passes :func:`lemma1_check` at ``tol``;
    * infeasible: the inter-set gap stays above ``tol`` while changing by less
      than ``stall_rtol`` (relative) for ``stall_window`` consecutive steps;
    * inconclusive: neither after ``max_iters`` steps.
    """
    a, b = _pair(ga, gb)
    n = a.shape[0]
    p = np.broadcast_to(np.asarray(p, dtype=float), (n,)).copy()
    if np.any(p < 0.0) or np.any(p > 1.0):
        raise InvalidInputError(f"probabilities must lie in [0, 1], got {p}")
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    if np.any(np.abs(b) < GB_FLOOR):
        b = np.where(np.abs(b) < GB_FLOOR, GB_FLOOR, b)

    start = make_pi(np.diag(p).astype(complex), tol)
    first = lemma1_check(a, b, start, tol)
    if first.feasible:
        return FeasibilityReport(Status.FEASIBLE, first.margin, first.binding, first.witness, 0, first.extra)

    status, x_pi, iters, gap, lam_pi, lam_k = _backend.kernels.lifted_dykstra(
        a, b, p, _search_scale(b), int(max_iters), float(tol), float(stall_rtol), int(stall_window)
    )
    binding = Binding.PI_POSITIVITY if lam_pi <= lam_k else Binding.RESIDUAL_POSITIVITY
    extra = {"gap": float(gap), "pi_min_eigenvalue": float(lam_pi), "residual_min_eigenvalue": float(lam_k)}
    if status == _backend.FEASIBLE:
        entries = hermitian_part(x_pi)
        np.fill_diagonal(entries, p)
        witness = PiMatrix(entries, p.copy(), True)
        check = lemma1_check(a, b, witness, tol)
        if check.feasible:
            return FeasibilityReport(Status.FEASIBLE, check.margin, check.binding, witness, int(iters), extra)
        status = _backend.INCONCLUSIVE
    if status == _backend.INFEASIBLE:
        return FeasibilityReport(Status.INFEASIBLE, -float(gap), binding, None, int(iters), extra)
    return FeasibilityReport(Status.INCONCLUSIVE, min(float(lam_pi), float(lam_k)), binding, None, int(iters), extra)


def max_uniform_success(ga, gb, tol: float = 1e-6, **search) -> float:
    """Largest common success probability p (all ``p_i = p``) for which a map exists.

    Bisection on [0, 1]; p = 0 is always feasible (Pi = 0, K = G_A).
    """
    a, b = _pair(ga, gb)
    n = a.shape[0]
    _, det = pi_deterministic(a, b)
    if det.feasible:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        rep = dykstra_feasibility(a, b, np.full(n, mid), **search)
        if rep.feasible:
            lo = mid
        elif rep.status is Status.INFEASIBLE:
            hi = mid
        else:
            raise BisectionError(mid)
    return lo


def factor_coefficients(pi, clip: Optional[float] = None) -> CoefficientMatrix:
    """Factor ``Pi = C^dagger C`` through its eigendecomposition.

    Eigenvalues in ``[-clip, clip]`` are dropped, so ``C`` has one row per
    retained eigenvalue. Each row is phased so its first sizeable entry is real
    and positive. Default ``clip`` is ``1e-10 * max(1, ||Pi||)``.
    """
    m = hermitian_part(_entries(pi))
    w, v = np.linalg.eigh(m)
    if clip is None:
        clip = DEFAULT_PSD_TOL * max(1.0, float(np.max(np.abs(w), initial=0.0)))
    if w.size and w[0] < -clip:
        raise NotPSDError(float(w[0]), clip)
    keep = w > clip
    rows = np.sqrt(w[keep])[:, None] * v[:, keep].conj().T
    rows = np.ascontiguousarray(rows[::-1])
    for r in rows:
        k = int(np.argmax(np.abs(r) > 1e-12 * np.max(np.abs(r))))
        r *= np.exp(-1j * np.angle(r[k]))
    return CoefficientMatrix(rows)
