"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
Energy arguments (``--E``, ``--E-min``, ``--E-max``) are read in units of
``m`` unless ``--units raw`` is given.  The well itself (``--m``, ``--V``,
``--a``) is always given in raw units.  Every output is in raw units and
echoes the convention used for input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, DiracWellError, NoKleinZone, Tolerances, WellParams, classify, ROW_LABELS
from .matching import NoBoundState, solve_left_incidence, solve_regime, solve_right_incidence
from .observables import current, density, flux_balance, wall_current_quench
from .spectrum import (
    Branch,
    conventional_spectrum,
    klein_bound_states,
    klein_energy,
    n_max,
    nonrelativistic_limit,
)
from .table import COLUMNS, ansatz_string, sweep
from .verify import run_battery

SCHEMA_VERSION = 1
WAVEFUNCTION_COLUMNS = ("x", "re_psi_plus", "im_psi_plus", "re_psi_minus", "im_psi_minus", "density", "J")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: WellParams
    units: str
    fmt: str
    output: str | None
    tol: Tolerances
    args: argparse.Namespace

    def energy(self, value: float) -> float:
        return value * self.params.m if self.units == "m" else value


def _fmt_float(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, (bool, str, int)) and not isinstance(v, float):
        return str(v)
    return format(float(v), ".17g")


def _clean(obj):
    """Make a structure JSON-safe: NaN -> null, numpy scalars -> Python."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return None if math.isnan(v) else v
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _header(cfg: RunConfig) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": cfg.command,
        "units": {"input_energies": cfg.units, "output": "raw"},
        "params": cfg.params.to_dict(),
    }


def _csv(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt_float(row.get(c)) for c in columns])
    return buf.getvalue()


def _emit(cfg: RunConfig, payload: dict, rows: list[dict] | None = None, columns=None, text: str | None = None):
    if cfg.fmt == "json":
        out = json.dumps(_clean({**_header(cfg), **payload}), indent=2, allow_nan=False) + "\n"
    elif cfg.fmt == "csv":
        if rows is None:
            raise UsageError(f"{cfg.command} has no CSV form")
        out = _csv(rows, columns)
    else:
        if text is None:
            raise UsageError(f"{cfg.command} has no text form")
        out = text
    if cfg.output:
        with open(cfg.output, "w", newline="", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _check_edge(cfg: RunConfig, E: float) -> bool:
    """True if E is an edge (and allowed); raises if not allowed."""
    regime = classify(E, cfg.params, cfg.tol.edge)
    if not regime.is_edge:
        return False
    if getattr(cfg.args, "allow_edge", False):
        return True
    raise UsageError(f"E={E!r} is the zone edge {regime}; pass --allow-edge to accept it")


def _edge_payload(cfg, E):
    return {"E": E, "regime": str(classify(E, cfg.params)), "note": "zone edge: no solution evaluated"}


def cmd_spectrum(cfg: RunConfig) -> int:
    p = cfg.params
    args = cfg.args
    if args.klein_only and not p.has_klein_zone:
        raise NoKleinZone("no Klein zone (V ≤ 2m)")
    states = []
    if p.has_klein_zone:
        states += [s.to_dict() for s in klein_bound_states(p)]
    if not args.klein_only:
        states += [s.to_dict() for s in conventional_spectrum(p)]
    states.sort(key=lambda s: s["E"])
    payload = {"n_max": n_max(p) if p.has_klein_zone else None, "states": states}
    if args.nonrel_check:
        if not p.has_klein_zone:
            raise NoKleinZone("no Klein zone (V ≤ 2m)")
        rows = []
        for n in range(1, n_max(p) + 1):
            binding, e_nr, rel = nonrelativistic_limit(p, n)
            rows.append({"n": n, "E_binding": binding, "E_NR": e_nr, "rel_error": rel})
        payload["nonrelativistic"] = rows
    columns = ("n", "E", "branch", "parity", "k", "p", "edge", "selected_by", "coincident_with")
    text = "".join(
        f"{s['branch']:>12} n={s['n']:<4d} E={s['E']:+.12f} parity={s['parity']:+d}{' edge' if s['edge'] else ''}\n"
        for s in states
    )
    _emit(cfg, payload, states, columns, text)
    return 0


def _scatter_record(cfg: RunConfig, E: float) -> dict:
    p = cfg.params
    left = solve_left_incidence(E, p)
    c = left.coefficients
    rec = {
        "E": E,
        "regime": str(left.regime),
        "R2": abs(c["R"]) ** 2,
        "T2": abs(c["T"]) ** 2,
    }
    rec["sum"] = rec["R2"] + rec["T2"]
    right = solve_right_incidence(E, p).coefficients
    rec["R_hat2"] = abs(right["R_hat"]) ** 2
    rec["T_hat2"] = abs(right["T_hat"]) ** 2
    for name in ("R", "T"):
        rec[name] = [c[name].real, c[name].imag]
    return rec


def cmd_scatter(cfg: RunConfig) -> int:
    E = cfg.energy(cfg.args.E)
    if _check_edge(cfg, E):
        _emit(cfg, _edge_payload(cfg, E), [], ("E",), f"E={E!r}: zone edge\n")
        return 0
    rec = _scatter_record(cfg, E)
    flat = {k: v for k, v in rec.items() if not isinstance(v, list)}
    text = f"|R|^2={rec['R2']:.12f} |T|^2={rec['T2']:.12f} sum={rec['sum']:.12f}\n"
    _emit(cfg, {"scatter": rec}, [flat], tuple(flat), text)
    return 0


def _bound_energy(cfg: RunConfig) -> float:
    args = cfg.args
    if args.branch is not None:
        if args.n is None:
            raise UsageError("--branch needs --n")
        return klein_energy(args.n, cfg.params, Branch(args.branch))
    if args.E is None:
        raise UsageError("give --E or --branch/--n")
    return cfg.energy(args.E)


def cmd_wavefunction(cfg: RunConfig) -> int:
    p = cfg.params
    args = cfg.args
    E = _bound_energy(cfg)
    if _check_edge(cfg, E):
        _emit(cfg, _edge_payload(cfg, E), [], WAVEFUNCTION_COLUMNS, f"E={E!r}: zone edge\n")
        return 0
    sol = solve_regime(E, p)
    if isinstance(sol, NoBoundState):
        raise UsageError(f"E={E!r} is not a bound state of {sol.regime} (residual {sol.residual:.2e})")
    L = 2 * p.a if args.L is None else args.L
    n = args.points
    x = np.concatenate([np.linspace(-L, 0, n)[:-1], np.linspace(0, p.a, n), np.linspace(p.a, p.a + L, n)[1:]])
    psi = sol(x)
    dens = density(psi)
    J = current(psi)
    rows = [
        {
            "x": x[i],
            "re_psi_plus": psi[0, i].real,
            "im_psi_plus": psi[0, i].imag,
            "re_psi_minus": psi[1, i].real,
            "im_psi_minus": psi[1, i].imag,
            "density": dens[i],
            "J": J[i],
        }
        for i in range(len(x))
    ]
    payload = {
        "E": E,
        "regime": str(sol.regime),
        "incidence": sol.incidence,
        "coefficients": {k: [v.real, v.imag] for k, v in sol.coefficients.items()},
        "samples": rows,
    }
    if "AA" in sol.coefficients and sol.regime.row == 4:
        lhs, rhs, balanced = flux_balance(sol, cfg.tol.flux)
        J0, Ja = wall_current_quench(sol)
        payload.update(flux={"AA2": lhs, "BB2": rhs, "balanced": balanced}, wall_current=[J0, Ja])
    _emit(cfg, payload, rows, WAVEFUNCTION_COLUMNS)
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    args = cfg.args
    res = sweep(cfg.params, cfg.energy(args.E_min), cfg.energy(args.E_max), args.points, args.include_edges)
    records = res.records()
    _emit(cfg, {"metadata": res.metadata, "columns": list(COLUMNS), "rows": records}, records, COLUMNS)
    return 0


def cmd_table(cfg: RunConfig) -> int:
    E = cfg.energy(cfg.args.E)
    regime = classify(E, cfg.params, cfg.tol.edge)
    if regime.is_edge and not cfg.args.allow_edge:
        raise UsageError(f"E={E!r} is the zone edge {regime}; pass --allow-edge to accept it")
    ans = ansatz_string(E, cfg.params)
    rec = {
        "E": E,
        "regime": str(regime),
        "row": regime.row,
        "range": ROW_LABELS.get(regime.tag),
        "ansatz": ans,
    }
    _emit(cfg, rec, [rec], tuple(rec), ans + "\n")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    args = cfg.args
    rows = [args.row] if args.row else None
    results = run_battery(cfg.params, cfg.tol, rows=rows, samples=args.samples, perturb_beta=args.perturb_beta)
    ok = all(r.passed for r in results)
    recs = [{"check": r.name, "status": "PASS" if r.passed else "FAIL", "detail": r.detail} for r in results]
    width = max(len(r.name) for r in results)
    text = "".join(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}\n" for r in results)
    text += f"{'all checks passed' if ok else 'verification FAILED'}\n"
    _emit(cfg, {"passed": ok, "checks": recs}, recs, ("check", "status", "detail"), text)
    return 0 if ok else 1


COMMANDS = {
    "spectrum": (cmd_spectrum, "json"),
    "scatter": (cmd_scatter, "json"),
    "wavefunction": (cmd_wavefunction, "csv"),
    "sweep": (cmd_sweep, "json"),
    "table": (cmd_table, "text"),
    "verify": (cmd_verify, "text"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=float, default=1.0, help="rest mass")
    common.add_argument("--V", type=float, default=5.0, help="well depth (raw)")
    common.add_argument("--a", type=float, default=1.0, help="well width (raw length units)")
    common.add_argument("--units", choices=("m", "raw"), default="m", help="unit of --E, --E-min, --E-max")
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default=None)
    common.add_argument("--output", "-o", default=None, help="write to file instead of stdout")
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE", help="tolerance override")

    parser = argparse.ArgumentParser(prog="diracwell", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", parents=[common], help="bound-state energies")
    sp.add_argument("--klein-only", action="store_true")
    sp.add_argument("--nonrel-check", action="store_true")

    sc = sub.add_parser("scatter", parents=[common], help="reflection and transmission at one energy")
    sc.add_argument("--E", type=float, required=True)
    sc.add_argument("--allow-edge", action="store_true")

    wf = sub.add_parser("wavefunction", parents=[common], help="sample the spinor on [-L, a+L]")
    wf.add_argument("--E", type=float)
    wf.add_argument("--branch", choices=("10a", "10b"))
    wf.add_argument("--n", type=int)
    wf.add_argument("--L", type=float, default=None, help="outside length (default 2a)")
    wf.add_argument("--points", type=int, default=1001, help="samples per region")
    wf.add_argument("--allow-edge", action="store_true")

    sw = sub.add_parser("sweep", parents=[common], help="per-energy summary on a uniform grid")
    sw.add_argument("--E-min", type=float, required=True)
    sw.add_argument("--E-max", type=float, required=True)
    sw.add_argument("--points", type=int, default=1001)
    sw.add_argument("--include-edges", action="store_true")

    tb = sub.add_parser("table", parents=[common], help="ansatz used at one energy")
    tb.add_argument("--E", type=float, required=True)
    tb.add_argument("--allow-edge", action="store_true")

    vf = sub.add_parser("verify", parents=[common], help="run the property battery")
    vf.add_argument("--row", type=int, choices=range(1, 8))
    vf.add_argument("--samples", type=int, default=3)
    vf.add_argument("--perturb-beta", type=float, default=0.0, help="fault injection: scale beta by 1+x")
    return parser


def _tolerances(overrides: list[str]) -> Tolerances:
    tol = DEFAULT_TOL
    env = os.environ.get("DIRACWELL_TOL")
    if env:
        tol = tol.override(env)
    for item in overrides:
        tol = tol.override(item)
    return tol


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func, default_fmt = COMMANDS[args.command]
    try:
        params = WellParams(args.m, args.V, args.a)
        cfg = RunConfig(args.command, params, args.units, args.fmt or default_fmt, args.output, _tolerances(args.tol), args)
        return func(cfg)
    except (UsageError, DiracWellError, ValueError) as exc:
        print(f"diracwell {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
