"""Acceptance gate: ten criteria, each printed as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import math
import os
import sys
import tempfile

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from coherent_amp.amplifier import AmplifierInstance, corollary1_feasible, exact_feasible, max_gain, theorem1_envelope
from coherent_amp.channel import LossChannel, distance_trajectory
from coherent_amp.errors import CoherentAmpError
from coherent_amp.fock import CoherentLabel, TruncationConfig
from coherent_amp.geometry import distance, gram, overlap, wigner_grid
from coherent_amp.kraus import run_pipeline
from coherent_amp.transform import Status, dykstra_feasibility, max_uniform_success, pi_deterministic

from cli_scenarios import SCENARIOS, run_subprocess
from oracles import disc_margin, grid_margin

SEED = 20240611
SQRT3 = 1.7320508075688772935
P_STAR = 0.86495487679937551999  # (1 - e^{-2}) / (1 - e^{-8})


def open_interval_upper(rng, hi, size=None):
    """Uniform on (0, hi]."""
    return hi * (1.0 - rng.random(size))


def random_instances(n=10_000, seed=SEED):
    rng = np.random.default_rng(seed)
    a1, a2 = open_interval_upper(rng, 3.0, n), open_interval_upper(rng, 3.0, n)
    eta = open_interval_upper(rng, math.pi, n)
    g1, g2 = open_interval_upper(rng, 2.5, n), open_interval_upper(rng, 2.5, n)
    return list(zip(a1, a2, eta, g1, g2))


_INSTANCES = None


def instances():
    global _INSTANCES
    if _INSTANCES is None:
        rows = []
        for params in random_instances():
            inst = AmplifierInstance.from_params(*params)
            ga, gb = gram(inst.inputs), gram(inst.outputs)
            rows.append((params, inst, exact_feasible(inst), pi_deterministic(ga, gb)[1], ga, gb))
        _INSTANCES = rows
    return _INSTANCES


def criterion_1():
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(1000):
        a = CoherentLabel(rng.uniform(0, 3), rng.uniform(0, 2 * math.pi))
        b = CoherentLabel(rng.uniform(0, 3), rng.uniform(0, 2 * math.pi))
        worst = max(worst, abs(abs(overlap(a, b)) ** 2 - math.exp(-distance(a, b))))
    return worst < 1e-12, f"max | |overlap|^2 - exp(-D) | = {worst:.3e} over 1000 pairs (limit 1e-12)"


def criterion_2():
    compared = disagree = 0
    for _, _, exact, det, _, _ in instances():
        if abs(exact.margin) > 1e-9:
            compared += 1
            disagree += exact.feasible != det.feasible
    return disagree == 0, f"{disagree} disagreements on {compared} of 10000 instances with |margin| > 1e-9"


def criterion_3():
    missed = gap = checked = 0
    for (a1, a2, eta, g1, g2), _, exact, _, _, _ in instances():
        if g1 < 1 or g2 < 1:
            continue
        checked += 1
        env = theorem1_envelope(eta, g1, g2)
        missed += exact.feasible and not env
        gap += env and not exact.feasible
    w = exact_feasible(AmplifierInstance.from_params(1.0, 1.0, math.acos(0.9), 1.2, 1.0))
    lhs, rhs = w.extra["lhs"], w.extra["rhs"]
    witness_ok = abs(lhs - 0.36) < 1e-12 and abs(rhs - 0.44) < 1e-12 and not w.feasible
    ok = missed == 0 and gap >= 1 and witness_ok
    return ok, (
        f"{checked} samples with g>=1: {missed} feasible-but-envelope-false, {gap} envelope-true-but-infeasible; "
        f"witness LHS {lhs:.15g} < RHS {rhs:.15g}"
    )


def criterion_4():
    rng = np.random.default_rng(SEED + 4)
    flips = 0
    for _ in range(100):
        a1, a2 = open_interval_upper(rng, 3.0), open_interval_upper(rng, 3.0)
        eta = rng.uniform(0.01, math.pi)
        g = max_gain(CoherentLabel(a1), CoherentLabel(a2, eta)).g1max
        below = corollary1_feasible(a1, a2, eta, g * (1 - 1e-6)).feasible
        above = corollary1_feasible(a1, a2, eta, g * (1 + 1e-6)).feasible
        flips += below and not above
    g = max_gain(CoherentLabel(1.0), CoherentLabel(2.0, math.acos(0.5))).g1max
    slack = exact_feasible(AmplifierInstance.from_params(1.0, 2.0, math.acos(0.5), SQRT3, SQRT3 / 2)).margin
    ok = flips == 100 and abs(g - SQRT3) <= 1e-12 and abs(slack) <= 1e-12
    return ok, f"{flips}/100 flips at g1max(1 -/+ 1e-6); g1max(1, 2, pi/3) - sqrt3 = {g - SQRT3:.1e}; slack {slack:.1e}"


def criterion_5():
    worst = dict(action=0.0, biorth=0.0, span=0.0, full=0.0)
    used = errors = 0
    cfg = TruncationConfig(tail_epsilon=1e-12)
    for _, inst, exact, _, _, _ in instances():
        if used == 100:
            break
        if not exact.feasible:
            continue
        try:
            pipe = run_pipeline(inst.inputs, inst.outputs, config=cfg)
        except CoherentAmpError:
            errors += 1
            continue
        if pipe.verification is None:
            continue
        used += 1
        s = pipe.verification.summary()
        worst["action"] = max(worst["action"], s["max_action_residual"])
        worst["biorth"] = max(worst["biorth"], s["max_biorthogonality_residual"])
        worst["span"] = max(worst["span"], s["completeness_residual"])
        worst["full"] = max(worst["full"], s["full_completeness_residual"])
    ok = used == 100 and errors == 0 and worst["action"] < 1e-7 and max(worst["biorth"], worst["span"], worst["full"]) < 1e-8
    return ok, (
        f"{used} feasible instances ({errors} errors): action {worst['action']:.1e}, biorthogonality {worst['biorth']:.1e}, "
        f"span {worst['span']:.1e}, full {worst['full']:.1e}"
    )


def criterion_6():
    rng = np.random.default_rng(SEED + 6)
    disagree = band = grid_vs_exact = 0
    for _ in range(200):
        al, th = open_interval_upper(rng, 2.0, 2), rng.uniform(0, 2 * math.pi, 2)
        g, p = open_interval_upper(rng, 2.5, 2), rng.uniform(0, 1, 2)
        la = [CoherentLabel(al[i], th[i]) for i in range(2)]
        lb = [x.scaled(gi) for x, gi in zip(la, g)]
        ga, gb = gram(la).entries, gram(lb).entries
        m = grid_margin(ga[0, 1], gb[0, 1], *p)
        grid_vs_exact = max(grid_vs_exact, disc_margin(ga[0, 1], gb[0, 1], *p) - m)
        if abs(m) <= 1e-6:
            band += 1
            continue
        rep = dykstra_feasibility(ga, gb, p)
        disagree += rep.status is not (Status.FEASIBLE if m > 0 else Status.INFEASIBLE)
    a = [CoherentLabel(1.0, 0.0), CoherentLabel(1.0, math.pi)]
    b = [CoherentLabel(2.0, 0.0), CoherentLabel(2.0, math.pi)]
    p_star = max_uniform_success(gram(a), gram(b))
    ok = disagree == 0 and abs(p_star - P_STAR) < 1e-4
    return ok, (
        f"{disagree} disagreements with the 400x400 grid oracle ({band} in band); "
        f"max grid under-estimate {grid_vs_exact:.1e}; p* = {p_star:.6f} (expected {P_STAR:.6f})"
    )


def criterion_7():
    checked = bad_d = bad_g = 0
    for _, inst, _, det, ga, gb in instances():
        if not det.feasible:
            continue
        checked += 1
        bad_d += distance(*inst.outputs) > distance(*inst.inputs) + 1e-12
        bad_g += bool(np.any(np.abs(ga.entries) > np.abs(gb.entries) + 1e-12))
    return bad_d == 0 and bad_g == 0, f"{checked} feasible instances: {bad_d} distance increases, {bad_g} Gram-modulus violations"


def criterion_8():
    times = np.linspace(0.0, 5.0, 50)
    worst_d = worst_r = 0.0
    positive = 0
    pairs = [
        (CoherentLabel(1.0, 0.0), CoherentLabel(1.0, math.pi)),
        (CoherentLabel(0.3, 1.0), CoherentLabel(2.0, 2.5)),
        (CoherentLabel(1.5, 0.2), CoherentLabel(1.4, 0.3)),
    ]
    for a, b in pairs:
        for gamma in (0.1, 1.0, 3.0):
            d0 = distance(a, b)
            for r in distance_trajectory(a, b, LossChannel(gamma), times):
                worst_d = max(worst_d, abs(r.distance - math.exp(-gamma * r.time) * d0))
                expected = -gamma * r.distance
                worst_r = max(worst_r, abs(r.fd_rate - expected) / max(abs(expected), 1e-300))
                positive += r.rate > 0 or r.fd_rate > 0
    ok = worst_d < 1e-12 and worst_r < 1e-6 and positive == 0
    return ok, f"max |D - e^(-gt)D0| = {worst_d:.1e}; max relative rate error {worst_r:.1e}; {positive} positive rates"


def criterion_9():
    worst_int = worst_peak = 0.0
    for lab in (CoherentLabel(0.0), CoherentLabel(1.0, 0.0), CoherentLabel(2.5, 1.0)):
        grid = wigner_grid(lab, resolution=201)
        worst_int = max(worst_int, abs(grid.integral() - 1.0))
        worst_peak = max(worst_peak, abs(float(np.max(grid.values)) - 1.0 / math.pi))
    ok = worst_int <= 1e-6 and worst_peak <= 1e-9
    return ok, f"max |integral - 1| = {worst_int:.1e}; max |peak - 1/pi| = {worst_peak:.1e}"


def criterion_10():
    with tempfile.TemporaryDirectory() as d1, tempfile.TemporaryDirectory() as d2:
        first, second = run_subprocess(d1), run_subprocess(d2)
    differing = [name for name in first if first[name] != second[name]]
    wrong_code = [name for name, _, code, _ in SCENARIOS if first[name][0] != code]
    ok = not differing and not wrong_code
    return ok, (
        f"{len(SCENARIOS)} invocations run twice: {len(differing)} differ {differing or ''}; "
        f"{len(wrong_code)} unexpected exit codes {wrong_code or ''}"
    )


CRITERIA = [
    (1, "overlap/distance identity", criterion_1),
    (2, "distance inequality agrees with Gram check", criterion_2),
    (3, "gain-only envelope is necessary, not sufficient", criterion_3),
    (4, "equal-output maximum gain boundary", criterion_4),
    (5, "Kraus pipeline residuals", criterion_5),
    (6, "projection search vs grid oracle", criterion_6),
    (7, "distinguishability never increases", criterion_7),
    (8, "pure-loss closed forms", criterion_8),
    (9, "Wigner grid normalization", criterion_9),
    (10, "command-line determinism", criterion_10),
]


def report(number, title, fn):
    ok, detail = fn()
    return ok, f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail}"


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn, capsys):
    ok, line = report(number, title, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [report(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
