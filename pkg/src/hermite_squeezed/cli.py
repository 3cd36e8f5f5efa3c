"""Command-line driver for single values, parameter sweeps and figure presets.

Usage pattern:

    hsqz --quantity mandel_q --set mu=1 --set nu=1 --set n=2 \
         --axis r:0.05:1.5:30 --out q.csv
    hsqz --preset fig7a --out fig7a.csv

Sweeps expand as an outer product: series (from presets) x axis values in the
order given.  Bulk data always lands in a CSV at full round-trip precision
(17 significant digits) with a JSON metadata header at <out>.json; the
``json`` format is reserved for single-point results and carries no bulk
samples.  Re-running an identical spec reproduces byte-identical files: no
timestamps, fixed row order, fixed float formatting.

Exit codes: 0 success, 2 spec validation failure, 3 numerical error (the
failing error type is printed).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from importlib import resources
from itertools import product

import numpy as np

from . import __version__
from .errors import HermiteSqueezedError
from .measures import g2, mandel_q, pnd, quadrature_dist, quadrature_norm_report, squeezing_degree
from .oracle import build_state, evolve_master_equation, oracle_moment, oracle_pnd, oracle_quadrature, oracle_wigner, oracle_wigner_state
from .phasespace import PhaseGrid
from .reservoir import (
    ReservoirParams,
    critical_time,
    evolved_negative_volume,
    evolved_wigner_grid,
)
from .state import StateParams
from .wigner import negative_volume, optimize_delta, wigner_grid

QUANTITIES = (
    "mandel_q",
    "g2",
    "pnd",
    "quadrature_dist",
    "squeezing",
    "wigner_grid",
    "delta",
    "delta_opt",
    "evolved_wigner",
    "evolved_delta",
    "critical_time",
)

_INT_PARAMS = {"n", "m", "nq", "np", "nu_samples", "oracle_cutoff", "steps"}
_STATE_PARAMS = ("n", "mu", "nu", "r")

# parameters each quantity consumes (beyond tol / oracle_cutoff)
_REQUIRED = {
    "mandel_q": {"n", "mu", "nu", "r"},
    "g2": {"n", "mu", "nu", "r"},
    "pnd": {"n", "mu", "nu", "r", "m"},
    "quadrature_dist": {"n", "mu", "nu", "r", "p"},
    "squeezing": {"n", "mu", "nu", "r"},
    "wigner_grid": {"n", "mu", "nu", "r", "q_half", "nq", "np"},
    "delta": {"n", "mu", "nu", "r"},
    "delta_opt": {"n", "r", "nu_samples"},
    "evolved_wigner": {"n", "mu", "nu", "r", "kappa_t", "nbar", "M", "q_half", "nq", "np"},
    "evolved_delta": {"n", "mu", "nu", "r", "kappa_t", "nbar", "M"},
    "critical_time": {"nbar", "M"},
}

_ORACLE_SUPPORTED = {"mandel_q", "g2", "pnd", "quadrature_dist", "squeezing", "wigner_grid", "evolved_wigner"}

_GRID_QUANTITIES = {"wigner_grid", "evolved_wigner"}


class SpecError(Exception):
    """Sweep-spec validation failure (maps to exit code 2)."""


@dataclass
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def values(self):
        if self.count < 2:
            raise SpecError(f"axis {self.name} needs at least 2 points")
        vals = np.linspace(self.start, self.stop, self.count)
        if self.name in _INT_PARAMS:
            ints = np.round(vals).astype(int)
            if np.max(np.abs(vals - ints)) > 1e-9:
                raise SpecError(f"axis {self.name} must hit integer values")
            return [int(v) for v in ints]
        return [float(v) for v in vals]

    def as_dict(self):
        return {"name": self.name, "start": self.start, "stop": self.stop, "count": self.count}


@dataclass
class SweepSpec:
    quantity: str
    axes: list = field(default_factory=list)
    fixed: dict = field(default_factory=dict)
    series: list = field(default_factory=lambda: [{}])
    constraint: str | None = None
    out: str = "sweep.csv"
    fmt: str = "csv"
    oracle: bool = False
    tol: float = 1e-4

    def validate(self):
        if self.quantity not in QUANTITIES:
            raise SpecError(f"unknown quantity {self.quantity!r}")
        if self.fmt not in ("csv", "json"):
            raise SpecError(f"unknown format {self.fmt!r}")
        if self.oracle and self.quantity not in _ORACLE_SUPPORTED:
            raise SpecError(f"oracle column not supported for {self.quantity}")
        if self.constraint not in (None, "mu_from_nu_circle"):
            raise SpecError(f"unknown constraint {self.constraint!r}")
        axis_names = [a.name for a in self.axes]
        if len(set(axis_names)) != len(axis_names):
            raise SpecError("duplicate axis names")
        if self.quantity in _GRID_QUANTITIES and self.axes:
            raise SpecError(f"{self.quantity} defines its own grid; drop --axis")
        if self.quantity in _GRID_QUANTITIES and len(self.series) > 1:
            raise SpecError(f"{self.quantity} supports a single series per run")
        provided = set(self.fixed) | set(axis_names)
        for s in self.series:
            provided |= set(s)
        if self.constraint == "mu_from_nu_circle":
            provided |= {"mu"}
        missing = _REQUIRED[self.quantity] - provided - {"tol"}
        if missing:
            raise SpecError(f"{self.quantity} is missing parameters: {sorted(missing)}")
        for a in self.axes:
            a.values()  # validates count and integrality

    def echo(self) -> dict:
        return {
            "quantity": self.quantity,
            "axes": [a.as_dict() for a in self.axes],
            "fixed": _jsonable(self.fixed),
            "series": [_jsonable(s) for s in self.series],
            "constraint": self.constraint,
            "oracle": self.oracle,
            "tol": self.tol,
            "format": self.fmt,
        }


def _jsonable(d: dict) -> dict:
    out = {}
    for k in sorted(d):
        v = d[k]
        if isinstance(v, complex):
            out[k] = {"re": v.real, "im": v.imag}
        else:
            out[k] = v
    return out


def _coerce(name: str, raw: str, allow_complex: bool):
    if name in _INT_PARAMS:
        return int(raw)
    if name == "M" and allow_complex:
        return complex(raw)
    return float(raw)


def _state_from(params: dict) -> StateParams:
    return StateParams(
        n=int(params["n"]), mu=float(params["mu"]), nu=float(params["nu"]), r=float(params["r"])
    )


def _reservoir_from(params: dict) -> ReservoirParams:
    return ReservoirParams(
        kappa_t=float(params["kappa_t"]), nbar=float(params["nbar"]), M=complex(params["M"])
    )


def _oracle_state(params: dict, diagnostics: dict):
    cutoff = int(params.get("oracle_cutoff", 80))
    state = build_state(_state_from(params), cutoff)
    diagnostics.setdefault("oracle_cutoff", cutoff)
    return state


def _point_value(spec: SweepSpec, params: dict, diagnostics: dict) -> dict:
    """Evaluate a scalar quantity at one parameter point."""
    q = spec.quantity
    tol = float(params.get("tol", spec.tol))
    if q == "mandel_q":
        out = {"value": mandel_q(_state_from(params))}
        if spec.oracle:
            st = _oracle_state(params, diagnostics)
            nbar = oracle_moment(st, 1, 1).real
            out["oracle"] = oracle_moment(st, 2, 2).real / nbar - nbar
        return out
    if q == "g2":
        out = {"value": g2(_state_from(params))}
        if spec.oracle:
            st = _oracle_state(params, diagnostics)
            nbar = oracle_moment(st, 1, 1).real
            out["oracle"] = oracle_moment(st, 2, 2).real / nbar**2
        return out
    if q == "squeezing":
        out = {"value": squeezing_degree(_state_from(params))}
        if spec.oracle:
            st = _oracle_state(params, diagnostics)
            out["oracle"] = 2.0 * (oracle_moment(st, 1, 1).real - abs(oracle_moment(st, 2, 0)))
        return out
    if q == "pnd":
        m = int(params["m"])
        state = _state_from(params)
        out = {"value": float(pnd(state, m).probabilities[m])}
        if spec.oracle:
            out["oracle"] = float(oracle_pnd(_oracle_state(params, diagnostics))[m])
        return out
    if q == "quadrature_dist":
        state = _state_from(params)
        out = {"value": quadrature_dist(state, float(params["p"]))}
        if spec.oracle:
            out["oracle"] = float(oracle_quadrature(_oracle_state(params, diagnostics), float(params["p"])))
        if "quadrature_norm" not in diagnostics:
            diagnostics["quadrature_norm"] = quadrature_norm_report(state)
        return out
    if q == "delta":
        return {"value": negative_volume(_state_from(params), tol)}
    if q == "delta_opt":
        nu_opt, delta_opt = optimize_delta(
            int(params["n"]), float(params["r"]), int(params["nu_samples"]), tol
        )
        return {"nu_opt": nu_opt, "delta_opt": delta_opt}
    if q == "evolved_delta":
        return {"value": evolved_negative_volume(_state_from(params), _reservoir_from(params), tol)}
    if q == "critical_time":
        return {"value": critical_time(float(params["nbar"]), complex(params["M"]))}
    raise SpecError(f"quantity {q} is not a point quantity")


def _apply_constraint(spec: SweepSpec, params: dict) -> dict:
    if spec.constraint == "mu_from_nu_circle":
        nu = float(params["nu"])
        if not 0.0 <= nu <= 1.0:
            raise SpecError("mu_from_nu_circle needs nu in [0, 1]")
        params = dict(params)
        params["mu"] = math.sqrt(1.0 - nu * nu)
    return params


def _run_grid(spec: SweepSpec) -> tuple[list[str], list[list], dict]:
    params = _apply_constraint(spec, {**spec.fixed, **spec.series[0]})
    half = float(params["q_half"])
    grid = PhaseGrid.symmetric(half, nq=int(params["nq"]), np=int(params["np"]))
    diagnostics: dict = {}
    if spec.quantity == "wigner_grid":
        field_ = wigner_grid(_state_from(params), grid)
    else:
        field_ = evolved_wigner_grid(_state_from(params), _reservoir_from(params), grid)
    diagnostics.update(field_.header(version=__version__)["diagnostics"])
    header = ["q", "p", "w"]
    oracle_vals = None
    if spec.oracle:
        header.append("w_oracle")
        cutoff = int(params.get("oracle_cutoff", 80))
        diagnostics["oracle_cutoff"] = cutoff
        state = build_state(_state_from(params), cutoff)
        if spec.quantity == "evolved_wigner":
            res = _reservoir_from(params)
            steps = int(params.get("steps", max(1, math.ceil(res.kappa_t / 1e-4))))
            rho = evolve_master_equation(state.density(), res, steps)
            oracle_vals = lambda a: oracle_wigner(rho, a)  # noqa: E731
        else:
            oracle_vals = lambda a: oracle_wigner_state(state, a)  # noqa: E731
    rows = []
    qs, ps = grid.q_values, grid.p_values
    for i, qv in enumerate(qs):
        for j, pv in enumerate(ps):
            row = [qv, pv, field_.samples[i, j]]
            if oracle_vals is not None:
                row.append(oracle_vals((qv + 1j * pv) / math.sqrt(2.0)))
            rows.append(row)
    return header, rows, diagnostics


def _run_points(spec: SweepSpec) -> tuple[list[str], list[list], dict]:
    axis_values = [a.values() for a in spec.axes]
    diagnostics: dict = {}
    header: list[str] = ["series"] + [a.name for a in spec.axes]
    value_cols: list[str] | None = None
    rows = []
    for si, overrides in enumerate(spec.series):
        base = {**spec.fixed, **overrides}
        for combo in product(*axis_values) if axis_values else [()]:
            params = dict(base)
            params.update({a.name: v for a, v in zip(spec.axes, combo)})
            params = _apply_constraint(spec, params)
            outputs = _point_value(spec, params, diagnostics)
            if value_cols is None:
                value_cols = list(outputs)
                header = header + value_cols
            rows.append([si, *combo, *[outputs[c] for c in value_cols]])
    return header, rows, diagnostics


def _format_cell(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def run(spec: SweepSpec) -> int:
    """Validate and execute a sweep spec; returns the process exit code."""
    try:
        spec.validate()
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return 2

    try:
        if spec.quantity in _GRID_QUANTITIES:
            header, rows, diagnostics = _run_grid(spec)
        else:
            header, rows, diagnostics = _run_points(spec)
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return 2
    except (HermiteSqueezedError, OverflowError, FloatingPointError, AssertionError) as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3

    meta = {
        "version": __version__,
        "spec": spec.echo(),
        "diagnostics": _jsonable(diagnostics) if diagnostics else {},
        "rows": len(rows),
        "columns": header,
    }
    if spec.fmt == "json":
        if len(rows) != 1:
            print("spec error: json format carries no bulk samples; use csv", file=sys.stderr)
            return 2
        meta["result"] = {c: (_format_cell(v) if isinstance(v, float) else v) for c, v in zip(header, rows[0])}
        with open(spec.out, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return 0

    with open(spec.out, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_format_cell(v) for v in row) + "\n")
    with open(spec.out + ".json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


def load_preset(name: str) -> SweepSpec:
    """Load a checked-in figure preset by name (e.g. ``fig1a``)."""
    ref = resources.files("hermite_squeezed").joinpath(f"presets/{name}.json")
    if not ref.is_file():
        raise SpecError(f"unknown preset {name!r}")
    data = json.loads(ref.read_text(encoding="utf-8"))
    return SweepSpec(
        quantity=data["quantity"],
        axes=[Axis(**a) for a in data.get("axes", [])],
        fixed=data.get("fixed", {}),
        series=data.get("series", [{}]),
        constraint=data.get("constraint"),
        tol=data.get("tol", 1e-4),
    )


def preset_manifest(name: str) -> dict:
    """Raw preset JSON, including its figure-caption parameter record."""
    ref = resources.files("hermite_squeezed").joinpath(f"presets/{name}.json")
    if not ref.is_file():
        raise SpecError(f"unknown preset {name!r}")
    return json.loads(ref.read_text(encoding="utf-8"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsqz",
        description="Closed-form measures and reservoir dynamics of Hermite-excited squeezed vacua",
    )
    parser.add_argument("--quantity", choices=QUANTITIES, help="quantity to evaluate")
    parser.add_argument(
        "--set",
        dest="assignments",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="fix a parameter (repeatable)",
    )
    parser.add_argument(
        "--axis",
        dest="axes",
        action="append",
        default=[],
        metavar="NAME:START:STOP:COUNT",
        help="sweep axis (repeatable)",
    )
    parser.add_argument("--preset", help="run a checked-in figure preset (fig1a..fig9b)")
    parser.add_argument("--oracle", action="store_true", help="emit a Fock-oracle column alongside")
    parser.add_argument("--out", default="sweep.csv", help="output data path")
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    parser.add_argument("--tol", type=float, default=1e-4, help="quadrature tolerance")
    parser.add_argument(
        "--complex-m",
        action="store_true",
        help="allow complex reservoir correlation M in --set (default: real only)",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.preset:
            spec = load_preset(args.preset)
            if args.quantity or args.assignments or args.axes:
                raise SpecError("--preset cannot be combined with --quantity/--set/--axis")
        else:
            if not args.quantity:
                raise SpecError("either --quantity or --preset is required")
            fixed = {}
            for item in args.assignments:
                if "=" not in item:
                    raise SpecError(f"bad --set {item!r}; expected KEY=VALUE")
                key, raw = item.split("=", 1)
                try:
                    fixed[key] = _coerce(key, raw, args.complex_m)
                except ValueError as exc:
                    raise SpecError(f"bad value for {key}: {exc}") from exc
            axes = []
            for item in args.axes:
                parts = item.split(":")
                if len(parts) != 4:
                    raise SpecError(f"bad --axis {item!r}; expected NAME:START:STOP:COUNT")
                axes.append(Axis(parts[0], float(parts[1]), float(parts[2]), int(parts[3])))
            spec = SweepSpec(quantity=args.quantity, axes=axes, fixed=fixed)
        spec.out = args.out
        spec.fmt = args.fmt
        spec.oracle = args.oracle
        if args.tol is not None:
            spec.tol = args.tol
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return 2
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
