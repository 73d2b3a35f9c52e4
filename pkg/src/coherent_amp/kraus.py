"""Kraus operators realizing a set transformation, in a truncated Fock basis.

Given coefficients ``C`` with ``C^dagger C = Pi``, the success operators are

    A_k = sum_i c_ki / <dual_i|psi_i> |phi_i><dual_i|

where the duals satisfy ``<dual_s|psi_t> = gamma_s delta_st``. Each ``A_k``
then sends ``|psi_i>`` to ``c_ki |phi_i>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from coherent_amp.errors import CompletionError, ConditioningError, DimensionMismatchError, InvalidInputError
from coherent_amp.fock import CoherentLabel, TruncationConfig, fock_dim, state_matrix
from coherent_amp.geometry import gram
from coherent_amp.transform import (
    CoefficientMatrix,
    FeasibilityReport,
    PiMatrix,
    dykstra_feasibility,
    factor_coefficients,
    pi_deterministic,
)

COND_LIMIT = 1e12
# Eigenvalues of I - sum A^dag A below this are treated as zero when completing.
COMPLETION_CLIP = 1e-9
COMPLETION_OVERSHOOT = 1e-6


@dataclass(frozen=True)
class DualBasis:
    duals: np.ndarray  # (N, dim), row s is |dual_s>
    normalizers: np.ndarray  # gamma_s = <dual_s|psi_s>

    def overlaps(self, vectors: np.ndarray) -> np.ndarray:
        """Matrix of ``<dual_s|psi_t>``."""
        return self.duals.conj() @ vectors.T

    def residuals(self, vectors: np.ndarray) -> np.ndarray:
        return np.abs(self.overlaps(vectors) - np.diag(self.normalizers))


def _gram_numeric(vectors):
    return vectors.conj() @ vectors.T


def reciprocal_states(set_a: Sequence[CoherentLabel], dim: int, convention: str = "gram-inverse") -> DualBasis:
    """Duals of the truncated input vectors.

    ``convention="gram-inverse"`` (default) uses rows of the inverse Gram
    matrix for every N, so every gamma is 1. ``convention="pairwise"``: a single
    state is its own dual; two states use ``|a1>/<a2|a1> - |a2>`` and
    ``|a2>/<a1|a2> - |a1>``; three or more fall back to the inverse Gram
    matrix. Both give the same Kraus operators in exact arithmetic, but the
    two-state formula has gamma ~ 1 - |<a1|a2>|^2, so for nearly parallel
    inputs its rounding error is divided by a small number.

    Overlaps are taken between the truncated vectors, so biorthogonality is
    exact in the truncated space up to rounding.
    """
    if convention not in ("pairwise", "gram-inverse"):
        raise InvalidInputError(f"unknown dual convention {convention!r}")
    psi = state_matrix(set_a, dim)
    g = _gram_numeric(psi)
    cond = float(np.linalg.cond(g))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise ConditioningError(cond, COND_LIMIT)
    n = len(psi)
    if convention == "pairwise" and n == 1:
        duals = psi.copy()
    elif convention == "pairwise" and n == 2 and abs(g[1, 0]) > 1e-300:
        duals = np.array([psi[0] / g[1, 0] - psi[1], psi[1] / g[0, 1] - psi[0]])
    else:
        duals = np.linalg.inv(g).T @ psi
    gamma = np.einsum("sd,sd->s", duals.conj(), psi)
    return DualBasis(duals, gamma)


@dataclass(frozen=True)
class KrausSet:
    operators: np.ndarray  # (M_total, dim, dim)
    set_a: tuple
    set_b: tuple
    coeffs: CoefficientMatrix
    dim: int
    completed: bool = False

    @property
    def m(self) -> int:
        """Number of success operators (completion operator excluded)."""
        return self.coeffs.rows

    @property
    def probabilities(self) -> np.ndarray:
        """Success probability of each input state, the diagonal of ``C^dagger C``."""
        return np.real(np.diag(self.coeffs.gram()))

    @property
    def success_operators(self) -> np.ndarray:
        return self.operators[: self.m]

    def to_json(self, residuals: Optional[dict] = None) -> dict:
        return {
            "dim": self.dim,
            "M": self.m,
            "completed": self.completed,
            "operators": [[[[z.real, z.imag] for z in row] for row in op] for op in self.operators],
            "coefficients": [[[z.real, z.imag] for z in row] for row in self.coeffs.entries],
            "set_a": [[lab.amplitude, lab.phase] for lab in self.set_a],
            "set_b": [[lab.amplitude, lab.phase] for lab in self.set_b],
            "residuals": residuals or {},
        }

    @classmethod
    def from_json(cls, data: dict) -> "KrausSet":
        def cplx(arr):
            a = np.asarray(arr, dtype=float)
            return a[..., 0] + 1j * a[..., 1]

        ops = cplx(data["operators"]) if data["operators"] else np.zeros((0, data["dim"], data["dim"]), complex)
        coeffs = cplx(data["coefficients"]) if data["coefficients"] else np.zeros((0, len(data["set_a"])), complex)
        ks = cls(
            ops.reshape(-1, data["dim"], data["dim"]),
            tuple(CoherentLabel(a, t) for a, t in data["set_a"]),
            tuple(CoherentLabel(a, t) for a, t in data["set_b"]),
            CoefficientMatrix(coeffs.reshape(-1, len(data["set_a"]))),
            int(data["dim"]),
            bool(data.get("completed", False)),
        )
        if ks.m != int(data["M"]):
            raise InvalidInputError("bundle M does not match its coefficient rows")
        return ks


def build_kraus(
    set_a: Sequence[CoherentLabel],
    set_b: Sequence[CoherentLabel],
    coeffs: CoefficientMatrix,
    dim: int,
    convention: str = "gram-inverse",
) -> KrausSet:
    set_a, set_b = tuple(set_a), tuple(set_b)
    if len(set_a) != len(set_b) or coeffs.cols != len(set_a):
        raise DimensionMismatchError(
            f"|A|={len(set_a)}, |B|={len(set_b)}, coefficient columns={coeffs.cols} must agree"
        )
    dual = reciprocal_states(set_a, dim, convention)
    phi = state_matrix(set_b, dim)
    weights = coeffs.entries / dual.normalizers[None, :]
    ops = np.einsum("ki,id,ie->kde", weights, phi, dual.duals.conj())
    return KrausSet(ops, set_a, set_b, coeffs, dim)


@dataclass(frozen=True)
class VerificationReport:
    action_residuals: np.ndarray  # (M, N): ||A_k psi_i - c_ki phi_i||
    completeness_residual: float  # max |P S P - P|, S = sum over success operators
    eq14_residuals: np.ndarray  # (N, N): |<dual_s|psi_t> - gamma_s delta_st|
    span_eigenvalues: np.ndarray  # spectrum of S restricted to span(A)
    full_completeness_residual: Optional[float] = None  # max |sum A^dag A - I| when completed
    gram_transport_residual: float = 0.0  # max |<psi_i|S|psi_j> - (C^dag C o G_B)_ij|

    def summary(self) -> dict:
        return {
            "max_action_residual": float(np.max(self.action_residuals, initial=0.0)),
            "completeness_residual": float(self.completeness_residual),
            "max_biorthogonality_residual": float(np.max(self.eq14_residuals, initial=0.0)),
            "span_eigenvalue_min": float(np.min(self.span_eigenvalues, initial=np.inf)),
            "span_eigenvalue_max": float(np.max(self.span_eigenvalues, initial=-np.inf)),
            "full_completeness_residual": self.full_completeness_residual,
            "gram_transport_residual": float(self.gram_transport_residual),
        }


def span_basis(vectors: np.ndarray) -> np.ndarray:
    """Orthonormal columns spanning the rows of ``vectors``."""
    q, _ = np.linalg.qr(vectors.T)
    return q


def verify_action(ks: KrausSet, convention: str = "gram-inverse") -> VerificationReport:
    psi = state_matrix(ks.set_a, ks.dim)
    phi = state_matrix(ks.set_b, ks.dim)
    c = ks.coeffs.entries
    ops = ks.success_operators

    images = np.einsum("kde,ie->kid", ops, psi)
    action = np.linalg.norm(images - c[:, :, None] * phi[None, :, :], axis=2)

    dual = reciprocal_states(ks.set_a, ks.dim, convention)
    biorth = dual.residuals(psi)

    s = np.einsum("kdi,kdj->ij", ops.conj(), ops)
    q = span_basis(psi)
    proj = q @ q.conj().T
    completeness = float(np.max(np.abs(proj @ s @ proj - proj)))
    span_eigs = np.linalg.eigvalsh(0.5 * (q.conj().T @ s @ q + (q.conj().T @ s @ q).conj().T))

    transported = psi.conj() @ s @ psi.T
    expected = (c.conj().T @ c) * _gram_numeric(phi)
    transport = float(np.max(np.abs(transported - expected)))

    full = None
    if ks.completed:
        total = np.einsum("kdi,kdj->ij", ks.operators.conj(), ks.operators)
        full = float(np.max(np.abs(total - np.eye(ks.dim))))
    return VerificationReport(action, completeness, biorth, span_eigs, full, transport)


def complete_to_identity(ks: KrausSet, clip: float = COMPLETION_CLIP) -> KrausSet:
    """Append ``B = sqrt(I - sum_k A_k^dag A_k)`` so the set sums to the identity.

    Eigenvalues of the remainder at or below ``clip`` are zeroed, which makes
    ``B`` annihilate the input span instead of leaving square-root-amplified
    rounding noise there.
    """
    ops = ks.success_operators
    s = np.einsum("kdi,kdj->ij", ops.conj(), ops)
    rem = np.eye(ks.dim) - s
    rem = 0.5 * (rem + rem.conj().T)
    w, v = np.linalg.eigh(rem)
    if w[0] < -COMPLETION_OVERSHOOT:
        raise CompletionError(
            f"success operators overshoot the identity by {-w[0]:.3e}; Pi is not feasible"
        )
    w = np.where(w > clip, w, 0.0)
    b = (v * np.sqrt(w)) @ v.conj().T
    return KrausSet(np.concatenate([ops, b[None]]), ks.set_a, ks.set_b, ks.coeffs, ks.dim, True)


@dataclass(frozen=True)
class Pipeline:
    """Everything produced on the way from two label sets to verified operators."""

    pi: PiMatrix
    report: FeasibilityReport
    coeffs: Optional[CoefficientMatrix]
    kraus: Optional[KrausSet]
    verification: Optional[VerificationReport]


def run_pipeline(
    set_a: Sequence[CoherentLabel],
    set_b: Sequence[CoherentLabel],
    p: Optional[Sequence[float]] = None,
    config: TruncationConfig = TruncationConfig(),
    complete: bool = True,
    convention: str = "gram-inverse",
) -> Pipeline:
    """Decide feasibility, factor Pi, build and verify the Kraus operators.

    ``p=None`` asks for the deterministic map. With explicit probabilities the
    witness comes from the projection search; completion then adds a failure
    operator, which is valid because ``K >= 0`` bounds the success operators by
    the identity on the input span and they vanish off it.
    """
    set_a, set_b = tuple(set_a), tuple(set_b)
    ga, gb = gram(set_a), gram(set_b)
    dim = fock_dim(set_a + set_b, config)
    if p is None:
        pi, report = pi_deterministic(ga, gb)
        if not report.feasible:
            return Pipeline(pi, report, None, None, None)
        # Build from the truncated overlaps so the operators reproduce the
        # truncated Gram matrix exactly; the analytic ratio differs by the tail
        # mass, which the duals would amplify for nearly parallel inputs.
        ga_t = _gram_numeric(state_matrix(set_a, dim))
        gb_t = _gram_numeric(state_matrix(set_b, dim))
        coeffs = factor_coefficients(ga_t / gb_t)
    else:
        report = dykstra_feasibility(ga, gb, np.asarray(p, dtype=float))
        if not report.feasible:
            return Pipeline(None, report, None, None, None)
        pi = report.witness
        coeffs = factor_coefficients(pi)
    ks = build_kraus(set_a, set_b, coeffs, dim, convention)
    if complete:
        ks = complete_to_identity(ks)
    return Pipeline(pi, report, coeffs, ks, verify_action(ks, convention))
