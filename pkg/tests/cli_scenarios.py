"""Scripted command-line runs: (name, argv, expected exit code, output file or None).

``{dir}`` is replaced by a scratch directory. Runs are ordered; ``verify``
reads the bundle written by the preceding ``kraus`` run.
"""

import json
import os
import subprocess
import sys

PI_THIRD = "1.0471975511965976"

SCENARIOS = [
    ("feasible-boundary", ["feasible", "--alpha1", "1", "--alpha2", "2", "--eta", PI_THIRD, "--g1", "1.7", "--g2", "0.85"], 0, None),
    ("feasible-equal-gain", ["feasible", "--alpha1", "1", "--alpha2", "1", "--eta", "0.5235987755982988", "--g1", "1.5", "--g2", "1.5", "--format", "json"], 1, None),
    ("feasible-missing-g1", ["feasible", "--alpha1", "1", "--alpha2", "2", "--eta", "1", "--g2", "0.85"], 2, None),
    ("feasible-bad-number", ["feasible", "--alpha1", "1", "--alpha2", "2", "--eta", "1", "--g1", "x", "--g2", "1"], 2, None),
    ("feasible-folded-eta", ["feasible", "--alpha1", "1", "--alpha2", "2", "--eta", "-1", "--g1", "1.2", "--g2", "0.8"], 0, None),
    ("feasible-unknown-flag", ["feasible", "--alpha3", "1"], 2, None),
    ("envelope-gap", ["envelope", "--eta", "0.45102681179626236", "--g1", "1.2", "--g2", "1.0"], 0, None),
    ("envelope-equal-gain", ["envelope", "--eta", "0.3", "--g1", "1.4", "--g2", "1.4", "--format", "json"], 1, None),
    ("envelope-gain-below-one", ["envelope", "--eta", "0.3", "--g1", "0.9", "--g2", "1.4"], 2, None),
    ("max-gain", ["max-gain", "--alpha1", "1", "--alpha2", "2", "--eta", PI_THIRD], 0, None),
    ("max-gain-collinear", ["max-gain", "--alpha1", "1", "--alpha2", "2", "--eta", "0", "--format", "json"], 0, None),
    ("pi-deamplify", ["pi", "--alpha1", "1", "--alpha2", "1", "--eta", "3.141592653589793", "--g1", "0.5", "--g2", "0.5", "--format", "json"], 0, None),
    ("pi-amplify", ["pi", "--alpha1", "0.5", "--alpha2", "0.5", "--eta", "3.141592653589793", "--g1", "2", "--g2", "2"], 1, None),
    ("dykstra-feasible", ["dykstra", "--alpha1", "1", "--alpha2", "1", "--eta", "3.141592653589793", "--g1", "2", "--g2", "2", "--p", "0.85"], 0, None),
    ("dykstra-infeasible", ["dykstra", "--alpha1", "1", "--alpha2", "1", "--eta", "3.141592653589793", "--g1", "2", "--g2", "2", "--p", "0.87", "--format", "json"], 1, None),
    ("dykstra-boundary-band", ["dykstra", "--alpha1", "1", "--alpha2", "1", "--eta", "3.141592653589793", "--g1", "2", "--g2", "2", "--p", "0.8649", "--max-iters", "5"], 3, None),
    ("dykstra-bad-p", ["dykstra", "--alpha1", "1", "--alpha2", "1", "--eta", "1", "--g1", "2", "--g2", "2", "--p", "0.5,x"], 2, None),
    ("kraus-bundle", ["kraus", "--alpha1", "1", "--alpha2", "1", "--eta", "3.141592653589793", "--g1", "0.5", "--g2", "0.5", "--format", "json", "--output", "{dir}/bundle.json"], 0, "bundle.json"),
    ("verify-bundle", ["verify", "--bundle", "{dir}/bundle.json", "--format", "json"], 0, None),
    ("kraus-infeasible", ["kraus", "--alpha1", "0.5", "--alpha2", "0.5", "--eta", "3.141592653589793", "--g1", "2", "--g2", "2"], 1, None),
    ("kraus-probabilistic", ["kraus", "--alpha1", "1", "--alpha2", "1", "--eta", "3.141592653589793", "--g1", "2", "--g2", "2", "--p", "0.8"], 0, None),
    ("kraus-coalescing", ["kraus", "--alpha1", "1", "--alpha2", "1", "--eta", "1e-9", "--g1", "1", "--g2", "1"], 4, None),
    ("verify-missing-bundle", ["verify", "--bundle", "{dir}/absent.json"], 2, None),
    ("wigner", ["wigner", "--alpha1", "1", "--theta", "0.5", "--resolution", "9", "--output", "{dir}/wigner.csv"], 0, "wigner.csv"),
    ("wigner-json", ["wigner", "--alpha1", "0", "--resolution", "5", "--format", "json"], 0, None),
    ("wigner-unwritable", ["wigner", "--alpha1", "1", "--resolution", "5", "--output", "{dir}/no/such/dir/w.csv"], 4, None),
    ("channel", ["channel", "--alpha1", "1", "--alpha2", "1", "--eta", "2.5", "--g1", "1.1", "--g2", "0.6", "--gamma", "0.5", "--time", "4", "--steps", "9"], 0, None),
    ("channel-missing-gamma", ["channel", "--alpha1", "1", "--alpha2", "1", "--eta", "2.5", "--g1", "1.1", "--g2", "0.6", "--time", "4"], 2, None),
    ("detector", ["detector", "--alpha1", "0", "--alpha2", "1", "--dark-prob", "0.05", "--efficiency", "0.8", "--g2", "1.5"], 0, None),
    ("sweep", ["sweep", "--grid", "g1:0.5:2:7", "--grid", "eta:0:3.141592653589793:5", "--alpha1", "1", "--alpha2", "2", "--g2", "0.8"], 0, None),
    ("sweep-config", ["sweep", "--config", "{dir}/sweep.json", "--g2", "0.9", "--format", "json"], 0, None),
    ("sweep-bad-axis", ["sweep", "--grid", "beta:0:1:3", "--alpha1", "1", "--alpha2", "1", "--eta", "1", "--g2", "1"], 2, None),
    ("sweep-config-unknown-key", ["sweep", "--config", "{dir}/bad.json"], 2, None),
]

CONFIGS = {
    "sweep.json": {"grid": ["alpha1:0.5:2:4"], "alpha2": 1.5, "eta": 2.0, "g1": 1.1, "g2": 0.5},
    "bad.json": {"alpha1": 1, "colour": "blue"},
}


def prepare(directory):
    for name, data in CONFIGS.items():
        with open(os.path.join(directory, name), "w", encoding="utf-8") as fh:
            json.dump(data, fh)


def expand(argv, directory):
    return [a.replace("{dir}", directory) for a in argv]


def run_subprocess(directory, env=None):
    """Run every scenario in a fresh interpreter; returns {name: (code, stdout, stderr, file bytes)}."""
    prepare(directory)
    out = {}
    for name, argv, _, fname in SCENARIOS:
        proc = subprocess.run(
            [sys.executable, "-m", "coherent_amp", *expand(argv, directory)],
            capture_output=True, env=env, check=False,
        )
        data = None
        if fname is not None and os.path.exists(os.path.join(directory, fname)):
            with open(os.path.join(directory, fname), "rb") as fh:
                data = fh.read()
        stderr = proc.stderr.replace(directory.encode(), b"{dir}")
        stdout = proc.stdout.replace(directory.encode(), b"{dir}")
        out[name] = (proc.returncode, stdout, stderr, data)
    return out
