"""Command-line interface.

Five subcommands (spectrum, abscissa, check, sweep, fem) driven by a JSON
config with strict key validation. Delimited data (CSV or JSON) is the
canonical output and is byte-deterministic for identical configs; when an
output path is given, a PNG figure is rendered next to it unless disabled.

Exit codes: 0 success, 2 validation error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .abscissa import (
    check_hypotheses,
    compute_spectrum,
    modified_abscissa,
    run_algorithm,
    signed_indices,
)
from .analysis import fem_table, fem_to_csv, fmt12, sweep, sweep_to_csv
from .damping import build_profile, family_names
from .eig import EigenSolverError
from .operators import get_model
from . import plots

__all__ = ["main", "app", "validate_config"]

logger = logging.getLogger(__name__)

_COMMON_KEYS = {"command", "out", "format", "plot"}
_COMMAND_KEYS = {
    "spectrum": {"model", "profile", "N", "r"},
    "abscissa": {"model", "profile", "eps", "N0"},
    "check": {"model", "profile", "N", "p_list", "r1_list"},
    "sweep": {"model", "family", "fixed", "vary", "N", "eps", "r", "r_policy"},
    "fem": {"k", "eps"},
}
_ALLOWED_FORMATS = {
    "spectrum": ("csv",),
    "abscissa": ("json",),
    "check": ("json",),
    "sweep": ("csv",),
    "fem": ("csv",),
}


def _as_int(value, name, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def _as_float(value, name, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{name} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite")
    if positive and value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def validate_config(raw, command: str) -> dict:
    """Normalize and strictly validate a config mapping for a command.

    Returns a dict with parsed objects under model_obj / profile_obj and all
    numeric parameters type-checked. Unknown keys are rejected.
    """
    if command not in _COMMAND_KEYS:
        raise ValueError(f"unknown command {command!r}")
    if not isinstance(raw, dict):
        raise ValueError("config must be a JSON object")
    allowed = _COMMON_KEYS | _COMMAND_KEYS[command]
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ValueError(f"unknown config keys for {command}: {', '.join(unknown)}")
    if "command" in raw and raw["command"] != command:
        raise ValueError(f"config command {raw['command']!r} does not match {command!r}")

    cfg: dict = {"command": command}

    fmt = raw.get("format", _ALLOWED_FORMATS[command][0])
    if fmt not in _ALLOWED_FORMATS[command]:
        raise ValueError(
            f"format {fmt!r} not supported for {command}; "
            f"allowed: {', '.join(_ALLOWED_FORMATS[command])}"
        )
    cfg["format"] = fmt

    plot = raw.get("plot", True)
    if not isinstance(plot, bool):
        raise ValueError(f"plot must be a boolean, got {plot!r}")
    cfg["plot"] = plot

    if "out" in raw:
        if not isinstance(raw["out"], str) or not raw["out"]:
            raise ValueError("out must be a nonempty string path")
        cfg["out"] = raw["out"]

    if command in ("spectrum", "abscissa", "check", "sweep"):
        if "model" not in raw:
            raise ValueError(f"{command} requires a model")
        cfg["model_obj"] = get_model(raw["model"])
        cfg["model"] = raw["model"]

    if command in ("spectrum", "abscissa", "check"):
        if "profile" not in raw:
            raise ValueError(f"{command} requires a profile")
        cfg["profile_obj"] = build_profile(raw["profile"])
        if cfg["profile_obj"].dim != cfg["model_obj"].dim:
            raise ValueError(
                f"profile dimension {cfg['profile_obj'].dim} does not match "
                f"model {raw['model']!r}"
            )

    if command == "spectrum":
        if "N" not in raw:
            raise ValueError("spectrum requires N")
        cfg["N"] = _as_int(raw["N"], "N", minimum=1)
        cfg["r"] = _as_int(raw.get("r", 0), "r", minimum=0)

    elif command == "abscissa":
        if "eps" not in raw:
            raise ValueError("abscissa requires eps")
        cfg["eps"] = _as_float(raw["eps"], "eps", positive=True)
        cfg["N0"] = _as_int(raw.get("N0", 50), "N0", minimum=4)

    elif command == "check":
        if "N" not in raw:
            raise ValueError("check requires N")
        cfg["N"] = _as_int(raw["N"], "N", minimum=1)
        if "p_list" in raw:
            if not isinstance(raw["p_list"], list):
                raise ValueError("p_list must be a list of integers")
            cfg["p_list"] = tuple(_as_int(p, "p_list entry", minimum=1) for p in raw["p_list"])
        else:
            cfg["p_list"] = None
        if "r1_list" in raw:
            if not isinstance(raw["r1_list"], list):
                raise ValueError("r1_list must be a list of integers")
            cfg["r1_list"] = tuple(
                _as_int(r1, "r1_list entry", minimum=1) for r1 in raw["r1_list"]
            )
        else:
            cfg["r1_list"] = None

    elif command == "sweep":
        if "family" not in raw:
            raise ValueError("sweep requires a family")
        if raw["family"] not in family_names():
            raise ValueError(
                f"unknown family {raw['family']!r}; expected one of: "
                f"{', '.join(family_names())}"
            )
        cfg["family"] = raw["family"]
        fixed = raw.get("fixed", {})
        if not isinstance(fixed, dict):
            raise ValueError("fixed must be a mapping of parameter names to numbers")
        vary = raw.get("vary")
        if not isinstance(vary, list) or not vary:
            raise ValueError("sweep requires a nonempty vary list")
        names = []
        values_lists = []
        for entry in vary:
            if not isinstance(entry, dict) or set(entry) != {"name", "values"}:
                raise ValueError("each vary entry must be {name, values}")
            name = entry["name"]
            if not isinstance(name, str):
                raise ValueError(f"vary name must be a string, got {name!r}")
            if name in names or name in fixed:
                raise ValueError(f"parameter {name!r} appears more than once")
            if not isinstance(entry["values"], list) or not entry["values"]:
                raise ValueError(f"vary values for {name!r} must be a nonempty list")
            names.append(name)
            values_lists.append(entry["values"])
        grid = []
        for combo in itertools.product(*values_lists):
            point = dict(zip(names, combo))
            point.update(fixed)
            grid.append(point)
        cfg["grid"] = grid
        cfg["N"] = _as_int(raw.get("N", 100), "N", minimum=8)
        cfg["eps"] = _as_float(raw.get("eps", 0.1), "eps", positive=True)
        cfg["r"] = _as_int(raw["r"], "r", minimum=0) if "r" in raw else None
        policy = raw.get("r_policy", "fixed")
        if policy not in ("fixed", "per-point"):
            raise ValueError(f"r_policy must be 'fixed' or 'per-point', got {policy!r}")
        cfg["r_policy"] = policy

    elif command == "fem":
        if "k" not in raw or "eps" not in raw:
            raise ValueError("fem requires k and eps")
        ks = raw["k"] if isinstance(raw["k"], list) else [raw["k"]]
        if not ks:
            raise ValueError("k list must be nonempty")
        cfg["k"] = [_as_int(k, "k", minimum=1) for k in ks]
        cfg["eps"] = _as_float(raw["eps"], "eps", positive=True)

    return cfg


def _roundtrip_check(report: dict, command: str, keys) -> None:
    # Emitted reports must re-validate as configs; a failure here is a bug.
    subset = {"command": command}
    subset.update({k: report[k] for k in keys})
    try:
        validate_config(subset, command)
    except ValueError as exc:  # pragma: no cover - internal invariant
        raise RuntimeError(f"internal error: report does not re-validate: {exc}") from exc


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _cmd_spectrum(cfg):
    model = cfg["model_obj"]
    profile = cfg["profile_obj"]
    spectrum = compute_spectrum(model, profile, cfg["N"])
    _, argmax = modified_abscissa(spectrum, cfg["r"])
    indices = signed_indices(len(spectrum), spectrum.sides)
    lines = ["k,re,im,argmax"]
    argmax_value = None
    for k, v in zip(indices, spectrum.values):
        flag = 1 if int(k) == argmax else 0
        if flag:
            argmax_value = complex(v)
        lines.append(f"{int(k)},{fmt12(v.real)},{fmt12(v.imag)},{flag}")
    text = "\n".join(lines) + "\n"

    def paint(path):
        plots.save_spectrum_figure(
            spectrum.values, path, argmax_value=argmax_value,
            title=f"{model.kind}, N={cfg['N']}",
        )

    return text, paint


def _cmd_abscissa(cfg):
    report = run_algorithm(cfg["model_obj"], cfg["profile_obj"], cfg["eps"], cfg["N0"])
    payload = report.to_dict()
    _roundtrip_check(payload, "abscissa", ("model", "profile", "eps", "N0"))
    argmax_value = None
    for row in payload["spectrum"]:
        if row["k"] == report.argmax_index:
            argmax_value = complex(row["re"], row["im"])

    def paint(path):
        plots.save_spectrum_figure(
            report.spectrum.values, path, argmax_value=argmax_value,
            alpha_hat=report.alpha_hat,
            title=f"{report.model.kind}, N={report.N_final}, mu_r={report.mu_r:.6g}",
        )

    return _json_text(payload), paint


def _cmd_check(cfg):
    N = cfg["N"]
    p_list = cfg["p_list"]
    r1_list = cfg["r1_list"]
    if p_list is None:
        p_list = tuple(p for p in (5, 10, 20) if p <= N // 2) if N >= 30 else ()
    if r1_list is None:
        r1_list = (1, 2, 5, 10) if N >= 30 else ()
    report = check_hypotheses(cfg["model_obj"], cfg["profile_obj"], N, p_list, r1_list)
    payload = {
        "model": report.model.kind,
        "profile": report.profile.to_spec(),
        "N": report.N,
        "p_list": list(p_list),
        "r1_list": list(r1_list),
        "b_norm_bound": report.b_norm_bound,
        "h1_simple": report.h1_simple,
        "h2_margin": report.h2_margin,
        "h3_margin": report.h3_margin,
        "h5_table": [
            {"p": p, "r1": r1, "value": value} for p, r1, value in report.h5_table
        ],
        "delta": [float(d) for d in report.delta],
        # degenerate levels give infinite ratios; emit null to keep JSON strict
        "delta_ratio": [float(d) if math.isfinite(d) else None for d in report.delta_ratio],
        "profile_total_mass": report.profile.total_mass,
        "profile_sup_norm": report.profile.sup_norm,
        "warnings": list(report.warnings),
    }
    _roundtrip_check(payload, "check", ("model", "profile", "N", "p_list", "r1_list"))

    def paint(path):
        plots.save_gap_figure(report.delta, report.delta_ratio, path)

    return _json_text(payload), paint


def _cmd_sweep(cfg):
    result = sweep(
        cfg["model_obj"],
        cfg["family"],
        cfg["grid"],
        N=cfg["N"],
        eps=cfg["eps"],
        r=cfg["r"],
        r_policy=cfg["r_policy"],
    )

    def paint(path):
        plots.save_sweep_figure(result, path)

    return sweep_to_csv(result), paint


def _cmd_fem(cfg):
    rows = fem_table(cfg["k"], cfg["eps"])

    def paint(path):
        plots.save_fem_figure(rows, path)

    return fem_to_csv(rows), paint


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "abscissa": _cmd_abscissa,
    "check": _cmd_check,
    "sweep": _cmd_sweep,
    "fem": _cmd_fem,
}

_OVERRIDES = {
    "spectrum": ("model", "N", "r"),
    "abscissa": ("model", "eps", "N0"),
    "check": ("model", "N"),
    "sweep": ("model", "N", "eps", "r"),
    "fem": ("eps",),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dampspec",
        description="Spectral projection toolkit for decay rates of damped wave-type systems.",
    )
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "spectrum": "compute one ordered spectrum (CSV)",
        "abscissa": "run the three-step decay-rate algorithm (JSON report)",
        "check": "quantitative hypothesis diagnostics (JSON report)",
        "sweep": "modified abscissa over a damping-family parameter grid (CSV)",
        "fem": "uniform-mesh dispersion table (CSV)",
    }
    types = {"model": str, "N": int, "eps": float, "N0": int, "r": int}
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--config", required=True, help="path to the JSON config")
        sp.add_argument("--out", help="output path (stdout when omitted)")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--no-plot", action="store_true", help="skip the PNG figure")
        for override in _OVERRIDES[name]:
            sp.add_argument(f"--{override}", type=types[override])
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return 2

    if isinstance(raw, dict):
        for override in _OVERRIDES[args.command]:
            value = getattr(args, override, None)
            if value is not None:
                raw[override] = value
        if args.format:
            raw["format"] = args.format
        if args.no_plot:
            raw["plot"] = False

    try:
        cfg = validate_config(raw, args.command)
        text, paint = _COMMANDS[args.command](cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EigenSolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3

    out = args.out or cfg.get("out")
    if out:
        out_path = Path(out)
        out_path.write_text(text, encoding="utf-8")
        if cfg["plot"]:
            figure_path = out_path.with_suffix(".png")
            paint(figure_path)
            logger.info("figure written to %s", figure_path)
    else:
        sys.stdout.write(text)
    return 0


def app() -> None:
    raise SystemExit(main())
