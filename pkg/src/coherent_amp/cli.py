"""Command-line front end.

Exit codes: 0 computed and feasible/true, 1 computed and infeasible/false,
2 invalid input, 3 inconclusive search, 4 numeric failure or unwritable output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from coherent_amp import __version__
from coherent_amp.amplifier import (
    AXES,
    AmplifierInstance,
    SweepSpec,
    envelope_rhs,
    exact_feasible,
    fold_phase,
    max_gain,
    sweep_arrays,
    theorem1_envelope,
)
from coherent_amp.channel import (
    DetectorModel,
    LossChannel,
    click_discrimination_error,
    compare_amplified,
    helstrom_error,
)
from coherent_amp.errors import CoherentAmpError, DimensionOverflowError, InvalidInputError, NumericalError
from coherent_amp.fock import CoherentLabel, TruncationConfig
from coherent_amp.geometry import gram, wigner_grid
from coherent_amp.kraus import KrausSet, run_pipeline, verify_action
from coherent_amp.transform import Status, dykstra_feasibility, pi_deterministic

EXIT_OK, EXIT_FALSE, EXIT_INVALID, EXIT_INCONCLUSIVE, EXIT_NUMERIC = 0, 1, 2, 3, 4
SCHEMA_VERSION = 1

# Residual limits used by `verify` to turn a bundle check into an exit code.
ACTION_LIMIT = 1e-7
RESIDUAL_LIMIT = 1e-8

SUBCOMMANDS = ("feasible", "envelope", "max-gain", "pi", "dykstra", "kraus", "verify", "wigner", "channel", "detector", "sweep")
AMP_PARAMS = ("alpha1", "alpha2", "eta", "g1", "g2")
HELP = {
    "feasible": "exact deterministic test for one gain pair",
    "envelope": "gain-only necessary condition on the relative phase",
    "max-gain": "largest g1 when both outputs have equal amplitude",
    "pi": "witness matrix of the deterministic map",
    "dykstra": "projection search at given success probabilities",
    "kraus": "build and verify Kraus operators",
    "verify": "re-check a saved Kraus bundle",
    "wigner": "Wigner function on a phase-space grid",
    "channel": "distance decay under pure loss, with and without gain",
    "detector": "error rates with an on/off detector",
    "sweep": "feasibility over a parameter grid",
}
REQUIRED = {
    "feasible": AMP_PARAMS,
    "envelope": ("eta", "g1", "g2"),
    "max-gain": ("alpha1", "alpha2", "eta"),
    "pi": AMP_PARAMS,
    "dykstra": AMP_PARAMS + ("p",),
    "kraus": AMP_PARAMS,
    "verify": ("bundle",),
    "wigner": ("alpha1",),
    "channel": AMP_PARAMS + ("gamma", "time"),
    "detector": ("alpha1", "alpha2"),
    "sweep": (),
}
SWEEP_HEADER = ["alpha1", "alpha2", "eta", "g1", "g2", "feasible", "margin", "g1max"]
CHANNEL_HEADER = ["t", "d_plain", "d_amp", "ratio", "sigma_plain", "sigma_amp"]

# name -> (type, default); None default means "not given"
PARAMS: Dict[str, tuple] = {
    "alpha1": (float, None),
    "alpha2": (float, None),
    "eta": (float, None),
    "g1": (float, None),
    "g2": (float, None),
    "gamma": (float, None),
    "time": (float, None),
    "epsilon": (float, 1e-12),
    "p": (str, None),
    "grid": (list, None),
    "format": (str, "csv"),
    "output": (str, None),
    "seed": (int, 0),
    "theta": (float, 0.0),
    "resolution": (int, 201),
    "steps": (int, 50),
    "max_iters": (int, 50000),
    "tol": (float, 1e-9),
    "dark_prob": (float, 0.0),
    "efficiency": (float, 1.0),
    "prior": (float, 0.5),
    "complete": (bool, True),
    "bundle": (str, None),
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    subcommand: str
    parameters: Dict[str, Any]
    output: Optional[str] = None
    format: str = "csv"


@dataclass
class RunResult:
    exit_code: int
    header: List[str] = field(default_factory=list)
    rows: List[list] = field(default_factory=list)
    document: Dict[str, Any] = field(default_factory=dict)


# ---------------------------------------------------------------- formatting


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x + 0.0, ".17g")  # + 0.0 turns -0.0 into 0.0


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "" if math.isnan(v) else fmt_float(v)
    return str(v)


def to_json(obj) -> str:
    """Deterministic JSON: insertion-ordered keys, floats at 17 significant digits, NaN/inf as null."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    if isinstance(obj, (complex, np.complexfloating)):
        return to_json([obj.real, obj.imag])
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render(result: RunResult, fmt: str) -> str:
    if fmt == "json":
        return to_json({"schema_version": SCHEMA_VERSION, **result.document}) + "\n"
    lines = [",".join(result.header)]
    lines += [",".join(_csv_cell(v) for v in row) for row in result.rows]
    return "\n".join(lines) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(result: RunResult, fmt: str, output: Optional[str]) -> None:
    text = render(result, fmt)
    if output is None or output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        write_atomic(output, text)
    except OSError as exc:
        raise CliError(EXIT_NUMERIC, f"cannot write {output}: {exc.strerror or exc}") from exc


# ---------------------------------------------------------------- parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_INVALID, message)


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coherent-amp", description="Noiseless amplification of coherent-state sets.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    sub.required = True
    for name in SUBCOMMANDS:
        required = " ".join(_flag(k) for k in REQUIRED.get(name, ()))
        sp = sub.add_parser(name, help=HELP[name], description=f"{HELP[name]}; requires {required or 'no flags'}")
        sp.add_argument("--config", metavar="PATH", help="JSON file with the same keys as the flags")
        for key, (typ, _) in PARAMS.items():
            flag = _flag(key)
            if typ is list:
                sp.add_argument(flag, action="append", metavar="AXIS:MIN:MAX:STEPS", default=None)
            elif typ is bool:
                sp.add_argument(flag, action=argparse.BooleanOptionalAction, default=None)
            elif key == "format":
                sp.add_argument(flag, choices=("csv", "json"), default=None)
            else:
                sp.add_argument(flag, type=typ, default=None)
    return parser


def _coerce(key: str, value, source: str):
    typ = PARAMS[key][0]
    flag = _flag(key)
    try:
        if typ is list:
            if isinstance(value, str):
                return [value]
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise ValueError
            return list(value)
        if typ is bool:
            if not isinstance(value, bool):
                raise ValueError
            return value
        if typ is str:
            if isinstance(value, (list, tuple)):
                return ",".join(fmt_float(float(v)) for v in value)
            return str(value)
        if isinstance(value, bool):
            raise ValueError
        if typ is int:
            f = float(value)
            if f != int(f):
                raise ValueError
            return int(f)
        return float(value)
    except (TypeError, ValueError):
        raise CliError(EXIT_INVALID, f"{flag}: cannot parse {value!r} from {source}") from None


def _load_config(path: str) -> Dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_INVALID, f"--config: cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INVALID, f"--config: invalid JSON in {path}: {exc}") from None
    if not isinstance(data, dict):
        raise CliError(EXIT_INVALID, "--config: top level must be an object")
    out = {}
    for raw, value in data.items():
        key = raw.replace("-", "_").lstrip("_")
        if key not in PARAMS:
            raise CliError(EXIT_INVALID, f"--config: unknown key {raw!r}")
        out[key] = _coerce(key, value, "config")
    return out


def parse_args(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(list(argv))
    params = {k: v for k, (_, v) in PARAMS.items()}
    if ns.config:
        params.update(_load_config(ns.config))
    for key in PARAMS:
        v = getattr(ns, key)
        if v is not None:
            params[key] = v
    for key in REQUIRED[ns.subcommand]:
        if params.get(key) is None:
            raise CliError(EXIT_INVALID, f"{ns.subcommand} needs {_flag(key)}")
    fmt = params.pop("format")
    if fmt not in ("csv", "json"):
        raise CliError(EXIT_INVALID, f"--format: expected csv or json, got {fmt!r}")
    output = params.pop("output")
    eta = params.get("eta")
    if eta is not None and math.isfinite(eta) and not 0.0 <= eta <= math.pi:
        folded = fold_phase(eta)
        print(f"warning: --eta {fmt_float(eta)} folded into [0, pi] as {fmt_float(folded)}", file=sys.stderr)
        params["eta"] = folded
    for key, value in params.items():
        if isinstance(value, float) and not math.isfinite(value):
            raise CliError(EXIT_INVALID, f"{_flag(key)}: must be finite, got {value}")
    return RunConfig(ns.subcommand, params, output, fmt)


# ---------------------------------------------------------------- dispatch


def _instance(p) -> AmplifierInstance:
    return AmplifierInstance.from_params(p["alpha1"], p["alpha2"], p["eta"], p["g1"], p["g2"])


def _verdict_code(status: Status) -> int:
    return {Status.FEASIBLE: EXIT_OK, Status.INFEASIBLE: EXIT_FALSE, Status.INCONCLUSIVE: EXIT_INCONCLUSIVE}[status]


def _g1max_or_none(a1: float, a2: float, eta: float) -> Optional[float]:
    if eta == 0.0 or a1 <= 0.0:
        return None
    return max_gain(CoherentLabel(a1, 0.0), CoherentLabel(a2, eta)).g1max


def _cmplx_matrix(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _params_doc(p, keys) -> dict:
    return {k: p[k] for k in keys}


def _run_feasible(p):
    rep = exact_feasible(_instance(p))
    g1max = _g1max_or_none(p["alpha1"], p["alpha2"], p["eta"])
    row = [p[k] for k in AMP_PARAMS] + [rep.feasible, rep.margin, g1max]
    doc = {
        "command": "feasible",
        "parameters": _params_doc(p, AMP_PARAMS),
        "status": rep.status.value,
        "margin": rep.margin,
        "lhs": rep.extra["lhs"],
        "rhs": rep.extra["rhs"],
        "g1max": g1max,
    }
    return RunResult(_verdict_code(rep.status), SWEEP_HEADER, [row], doc)


def _run_envelope(p):
    ok = theorem1_envelope(p["eta"], p["g1"], p["g2"])
    rhs = envelope_rhs(p["g1"], p["g2"])
    header = ["eta", "g1", "g2", "cos_eta", "bound", "passes"]
    row = [p["eta"], p["g1"], p["g2"], math.cos(p["eta"]), rhs, ok]
    doc = {"command": "envelope", "parameters": _params_doc(p, ("eta", "g1", "g2")), "cos_eta": row[3], "bound": rhs, "passes": ok}
    return RunResult(EXIT_OK if ok else EXIT_FALSE, header, [row], doc)


def _run_max_gain(p):
    mg = max_gain(CoherentLabel(p["alpha1"], 0.0), CoherentLabel(p["alpha2"], p["eta"]))
    header = ["alpha1", "alpha2", "eta", "g1max", "g2", "unbounded"]
    row = [p["alpha1"], p["alpha2"], p["eta"], mg.g1max, mg.g2, mg.unbounded]
    doc = {
        "command": "max-gain",
        "parameters": _params_doc(p, ("alpha1", "alpha2", "eta")),
        "g1max": None if mg.unbounded else mg.g1max,
        "g2": None if mg.unbounded else mg.g2,
        "unbounded": mg.unbounded,
    }
    return RunResult(EXIT_OK, header, [row], doc)


def _run_pi(p):
    inst = _instance(p)
    ga, gb = gram(inst.inputs), gram(inst.outputs)
    pi, rep = pi_deterministic(ga, gb)
    header = ["i", "j", "re", "im"]
    rows = [[i, j, z.real, z.imag] for i, r in enumerate(pi.entries) for j, z in enumerate(r)]
    doc = {
        "command": "pi",
        "parameters": _params_doc(p, AMP_PARAMS),
        "status": rep.status.value,
        "margin": rep.margin,
        "binding": rep.binding.value,
        "pi": _cmplx_matrix(pi.entries),
        "pi_min_eigenvalue": rep.extra["pi_min_eigenvalue"],
        "residual_min_eigenvalue": rep.extra["residual_min_eigenvalue"],
    }
    return RunResult(_verdict_code(rep.status), header, rows, doc)


def _parse_probs(text: str) -> np.ndarray:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise CliError(EXIT_INVALID, f"--p: cannot parse {text!r}") from None
    if len(vals) not in (1, 2):
        raise CliError(EXIT_INVALID, f"--p: expected one or two probabilities, got {len(vals)}")
    return np.broadcast_to(np.array(vals), (2,)).copy()


def _run_dykstra(p):
    inst = _instance(p)
    probs = _parse_probs(p["p"])
    ga, gb = gram(inst.inputs), gram(inst.outputs)
    rep = dykstra_feasibility(ga, gb, probs, max_iters=p["max_iters"], tol=p["tol"])
    header = ["status", "margin", "binding", "iterations", "pi12_re", "pi12_im"]
    w = rep.witness.entries[0, 1] if rep.witness is not None else None
    row = [rep.status.value, rep.margin, rep.binding.value, rep.iterations, None if w is None else w.real, None if w is None else w.imag]
    doc = {
        "command": "dykstra",
        "parameters": {**_params_doc(p, AMP_PARAMS), "p": list(probs), "max_iters": p["max_iters"], "tol": p["tol"]},
        "status": rep.status.value,
        "margin": rep.margin,
        "binding": rep.binding.value,
        "iterations": rep.iterations,
        "pi": None if rep.witness is None else _cmplx_matrix(rep.witness.entries),
        **{k: float(v) for k, v in rep.extra.items()},
    }
    return RunResult(_verdict_code(rep.status), header, [row], doc)


def _summary_rows(summary: dict):
    return [[k, v] for k, v in summary.items()]


def _run_kraus(p):
    inst = _instance(p)
    probs = None if p["p"] is None else _parse_probs(p["p"])
    cfg = TruncationConfig(tail_epsilon=p["epsilon"])
    pipe = run_pipeline(inst.inputs, inst.outputs, probs, cfg, complete=p["complete"])
    if pipe.kraus is None:
        doc = {
            "command": "kraus",
            "parameters": _params_doc(p, AMP_PARAMS),
            "status": pipe.report.status.value,
            "margin": pipe.report.margin,
        }
        rows = [["status", pipe.report.status.value], ["margin", pipe.report.margin]]
        return RunResult(_verdict_code(pipe.report.status), ["key", "value"], rows, doc)
    summary = pipe.verification.summary()
    doc = {"command": "kraus", **pipe.kraus.to_json(summary)}
    doc["gains"] = [p["g1"], p["g2"]]
    rows = [["dim", pipe.kraus.dim], ["M", pipe.kraus.m], ["completed", pipe.kraus.completed]] + _summary_rows(summary)
    return RunResult(EXIT_OK, ["key", "value"], rows, doc)


def _run_verify(p):
    path = p["bundle"]
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        ks = KrausSet.from_json(data)
    except OSError as exc:
        raise CliError(EXIT_INVALID, f"--bundle: cannot read {path}: {exc.strerror or exc}") from None
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_INVALID, f"--bundle: malformed bundle {path}: {exc}") from None
    summary = verify_action(ks).summary()
    ok = summary["max_action_residual"] < ACTION_LIMIT and summary["max_biorthogonality_residual"] < RESIDUAL_LIMIT
    ok = ok and summary["gram_transport_residual"] < RESIDUAL_LIMIT
    # the success operators only reproduce the identity on the span when every p_i = 1
    if np.all(np.abs(ks.probabilities - 1.0) < RESIDUAL_LIMIT):
        ok = ok and summary["completeness_residual"] < RESIDUAL_LIMIT
    if ks.completed:
        ok = ok and summary["full_completeness_residual"] < RESIDUAL_LIMIT
    doc = {"command": "verify", "bundle": os.path.basename(path), "passes": ok, "residuals": summary}
    rows = _summary_rows(summary) + [["passes", ok]]
    return RunResult(EXIT_OK if ok else EXIT_FALSE, ["key", "value"], rows, doc)


def _run_wigner(p):
    if p["resolution"] < 2:
        raise CliError(EXIT_INVALID, "--resolution: must be at least 2")
    grid = wigner_grid(CoherentLabel(p["alpha1"], p["theta"]), resolution=p["resolution"])
    doc = {"command": "wigner", "parameters": {"alpha1": p["alpha1"], "theta": p["theta"]}, **grid.to_json()}
    return RunResult(EXIT_OK, ["x", "p", "w"], [list(r) for r in grid.csv_rows()], doc)


def _run_channel(p):
    if p["steps"] < 1:
        raise CliError(EXIT_INVALID, "--steps: must be at least 1")
    if p["time"] < 0:
        raise CliError(EXIT_INVALID, "--time: must be >= 0")
    inst = _instance(p)
    ch = LossChannel(p["gamma"])
    times = np.linspace(0.0, p["time"], p["steps"]) if p["steps"] > 1 else np.array([p["time"]])
    rows, feasible = [], True
    for t in times:
        c = compare_amplified(inst.state1, inst.state2, p["g1"], p["g2"], ch, float(t))
        feasible = c.amplification_feasible
        rows.append([c.time, c.d_plain, c.d_amp, c.ratio, c.sigma_plain, c.sigma_amp])
    if not feasible:
        print("warning: gains are not feasible for this pair; comparison computed anyway", file=sys.stderr)
    doc = {
        "command": "channel",
        "parameters": {**_params_doc(p, AMP_PARAMS), "gamma": p["gamma"], "time": p["time"], "steps": p["steps"]},
        "amplification_feasible": feasible,
        "columns": CHANNEL_HEADER,
        "rows": rows,
    }
    return RunResult(EXIT_OK, CHANNEL_HEADER, rows, doc)


def _run_detector(p):
    eta = p["eta"] if p["eta"] is not None else 0.0
    det = DetectorModel(p["dark_prob"], p["efficiency"])
    pairs = [("plain", CoherentLabel(p["alpha1"], 0.0), CoherentLabel(p["alpha2"], eta))]
    if p["g1"] is not None or p["g2"] is not None:
        g1 = p["g1"] if p["g1"] is not None else 1.0
        g2 = p["g2"] if p["g2"] is not None else 1.0
        pairs.append(("amplified", pairs[0][1].scaled(g1), pairs[0][2].scaled(g2)))
    header = ["case", "alpha1", "alpha2", "p_err", "click", "no_click", "helstrom"]
    rows = []
    for name, a, b in pairs:
        d = click_discrimination_error(a, b, det, p["prior"])
        rows.append([name, a.amplitude, b.amplitude, d.p_err, d.threshold_rule["click"], d.threshold_rule["no-click"], helstrom_error(a, b, p["prior"])])
    doc = {
        "command": "detector",
        "parameters": {"dark_prob": p["dark_prob"], "efficiency": p["efficiency"], "prior": p["prior"]},
        "cases": [dict(zip(header, r)) for r in rows],
    }
    return RunResult(EXIT_OK, header, rows, doc)


def _parse_grid(items) -> Dict[str, tuple]:
    axes = {}
    for item in items or []:
        parts = item.split(":")
        if len(parts) != 4:
            raise CliError(EXIT_INVALID, f"--grid: expected axis:min:max:steps, got {item!r}")
        name = parts[0]
        if name not in AXES:
            raise CliError(EXIT_INVALID, f"--grid: unknown axis {name!r}")
        if name in axes:
            raise CliError(EXIT_INVALID, f"--grid: axis {name!r} given twice")
        try:
            lo, hi, steps = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError:
            raise CliError(EXIT_INVALID, f"--grid: cannot parse {item!r}") from None
        axes[name] = (lo, hi, steps)
    return axes


def _run_sweep(p):
    axes = _parse_grid(p["grid"])
    fixed = {k: p[k] for k in AXES if k not in axes and p.get(k) is not None}
    missing = [k for k in AXES if k not in axes and k not in fixed]
    if missing:
        raise CliError(EXIT_INVALID, f"sweep needs {_flag(missing[0])} or a --grid for it")
    cols = sweep_arrays(SweepSpec(axes, fixed))
    n = cols["margin"].size
    rows = [
        [float(cols[k][i]) for k in AXES] + [bool(cols["feasible"][i]), float(cols["margin"][i]), float(cols["g1max"][i])]
        for i in range(n)
    ]
    doc = {
        "command": "sweep",
        "axes": {k: list(v) for k, v in axes.items()},
        "fixed": fixed,
        "columns": SWEEP_HEADER,
        "rows": rows,
    }
    return RunResult(EXIT_OK, SWEEP_HEADER, rows, doc)


HANDLERS = {
    "feasible": _run_feasible,
    "envelope": _run_envelope,
    "max-gain": _run_max_gain,
    "pi": _run_pi,
    "dykstra": _run_dykstra,
    "kraus": _run_kraus,
    "verify": _run_verify,
    "wigner": _run_wigner,
    "channel": _run_channel,
    "detector": _run_detector,
    "sweep": _run_sweep,
}


def dispatch(config: RunConfig) -> RunResult:
    try:
        result = HANDLERS[config.subcommand](config.parameters)
    except CliError:
        raise
    except (NumericalError, DimensionOverflowError) as exc:
        raise CliError(EXIT_NUMERIC, str(exc)) from exc
    except (InvalidInputError, ValueError) as exc:
        raise CliError(EXIT_INVALID, str(exc)) from exc
    except (CoherentAmpError, FloatingPointError, np.linalg.LinAlgError, OverflowError) as exc:
        raise CliError(EXIT_NUMERIC, str(exc)) from exc
    if config.parameters.get("seed"):
        result.document.setdefault("seed", config.parameters["seed"])
    return result


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_args(argv)
        result = dispatch(config)
        emit(result, config.format, config.output)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
