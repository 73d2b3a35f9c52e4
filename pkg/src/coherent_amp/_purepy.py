"""Pure NumPy implementations of the hot loops.

Used when the compiled ``_kernels`` extension is unavailable, and as the
reference the extension is tested against. Signatures match ``_kernels.pyx``.
"""

import math

import numpy as np

FEASIBLE, INFEASIBLE, INCONCLUSIVE = 0, 1, 2


def _clip_psd(m):
    w, v = np.linalg.eigh(m)
    w = np.maximum(w, 0.0)
    return (v * w) @ v.conj().T


def _min_eig_scaled(m, tol):
    w = np.linalg.eigvalsh(m)
    scale = max(1.0, float(np.max(np.abs(w))))
    return float(w[0]), tol * scale


def lifted_dykstra(ga, gb, p, scale, max_iters, tol, stall_rtol, stall_window, correct=True):
    """Alternating projections with Dykstra correction on the pair (Pi, K).

    Cone: Pi >= 0 and K >= 0. Affine set: diag(Pi) = p, diag(K) = 1 - p and
    Pi o gb + K = ga off the diagonal. A point in both sets is a Pi satisfying
    all three transformation conditions with residual K.

    Both projections are taken in the metric ||S Pi S||_F^2 + ||K||_F^2 with
    S = diag(scale); choosing scale_i * scale_j ~ |gb_ij| balances how far each
    block moves in the affine step. The cone projection stays exact because
    congruence by S preserves positivity.

    Returns ``(status, pi, iterations, gap, lam_pi, lam_k)`` where ``lam_*``
    are the minimum eigenvalues at the final affine iterate.
    """
    ga = np.asarray(ga, dtype=complex)
    gb = np.asarray(gb, dtype=complex)
    p = np.asarray(p, dtype=float)
    s = np.asarray(scale, dtype=float)
    n = ga.shape[0]
    diag = np.diag_indices(n)
    ss = np.outer(s, s)
    w2 = ss * ss
    denom = 1.0 / (w2 + np.abs(gb) ** 2)
    gb_conj = gb.conj()

    x_pi = np.diag(p).astype(complex)
    x_k = ga - x_pi * gb
    x_k[diag] = 1.0 - p
    q_pi = np.zeros_like(x_pi)
    q_k = np.zeros_like(x_k)

    prev_gap = np.inf
    stalled = 0
    gap = np.inf
    lam_pi = lam_k = -np.inf
    for it in range(1, max_iters + 1):
        if correct:
            z_pi = x_pi + q_pi
            z_k = x_k + q_k
        else:
            z_pi, z_k = x_pi, x_k
        y_pi = _clip_psd(z_pi * ss) / ss
        y_k = _clip_psd(z_k)
        q_pi = z_pi - y_pi
        q_k = z_k - y_k

        r = (ga - gb * y_pi - y_k) * denom
        x_pi = y_pi + gb_conj * r
        x_k = y_k + w2 * r
        x_pi[diag] = p
        x_k[diag] = 1.0 - p
        x_pi = 0.5 * (x_pi + x_pi.conj().T)
        x_k = 0.5 * (x_k + x_k.conj().T)

        gap = float(np.sqrt(np.sum(np.abs((x_pi - y_pi) * ss) ** 2) + np.sum(np.abs(x_k - y_k) ** 2)))

        k_exact = ga - x_pi * gb
        lam_pi, thr_pi = _min_eig_scaled(x_pi, tol)
        lam_k, thr_k = _min_eig_scaled(k_exact, tol)
        if lam_pi >= -thr_pi and lam_k >= -thr_k:
            return FEASIBLE, x_pi, it, gap, lam_pi, lam_k

        if gap > tol and abs(prev_gap - gap) <= stall_rtol * gap:
            stalled += 1
            if stalled >= stall_window:
                return INFEASIBLE, x_pi, it, gap, lam_pi, lam_k
        else:
            stalled = 0
        prev_gap = gap
    return INCONCLUSIVE, x_pi, max_iters, gap, lam_pi, lam_k


def inequality_slack(a1, a2, cos_eta, g1, g2):
    """Distance inequality slack: 2 a1 a2 (g1 g2 - 1) cos(eta) - (g1^2-1) a1^2 - (g2^2-1) a2^2."""
    lhs = 2.0 * a1 * a2 * (g1 * g2 - 1.0) * cos_eta
    rhs = (g1 * g1 - 1.0) * a1 * a1 + (g2 * g2 - 1.0) * a2 * a2
    return lhs - rhs


def g1max_formula(a1, a2, cos_eta):
    return np.sqrt((a1 * a1 + a2 * a2 - 2.0 * a1 * a2 * cos_eta) / (2.0 * a1 * a1 * (1.0 - cos_eta)))


def sweep_grid(alpha1, alpha2, eta, g1, g2, num_threads=0):
    """Evaluate slack and g1max on the Cartesian product of the five axes.

    Axis order is (alpha1, alpha2, eta, g1, g2), last axis fastest. g1max is
    NaN where undefined (eta == 0 or alpha1 == 0). ``num_threads`` is ignored.
    """
    axes = [np.asarray(a, dtype=float) for a in (alpha1, alpha2, eta, g1, g2)]
    shape = tuple(a.size for a in axes)
    cos_axis = np.array([math.cos(e) for e in axes[2]])
    a1, a2, et, x1, x2 = np.meshgrid(*axes, indexing="ij")
    c = np.broadcast_to(cos_axis[None, None, :, None, None], et.shape)
    margin = inequality_slack(a1, a2, c, x1, x2).reshape(-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        gmax = g1max_formula(a1, a2, c)
    gmax = np.where((et > 0.0) & (a1 > 0.0), gmax, np.nan).reshape(-1)
    return margin, gmax, shape
