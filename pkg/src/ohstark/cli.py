"""Command-line interface: ``ohstark {sweep,eigen,evolve,verify}``.

Exit codes: 0 success, 1 verification failure (including an analytic/oracle
mismatch during a sweep), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
from pathlib import Path
import sys

import numpy as np

from .core_model import ENERGY_UNITS, FieldPoint, MolecularParameters, build_hamiltonian
from .dynamics import doublet_bloch_vector, evolve, normalize, partial_trace_rotor, density_matrix, purity
from .exceptions import ConfigError, MismatchAtPoint, OHStarkError
from .sweep import SweepConfig, eigen_point, run_sweep, sweep_to_csv, sweep_to_json
from .verify import verify_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _add_physics_args(parser, with_unit=True):
    parser.add_argument("--e-kvcm", type=float, default=2.0, help="electric field in kV/cm (default 2)")
    parser.add_argument("--theta-deg", type=float, default=90.0, help="angle between E and B in degrees (default 90)")
    parser.add_argument("--delta-ghz", type=float, default=1.667, help="lambda doubling Delta/2pi in GHz (default 1.667)")
    parser.add_argument("--mu-e-debye", type=float, default=1.66, help="electric dipole moment in debye (default 1.66)")
    if with_unit:
        parser.add_argument("--unit", choices=ENERGY_UNITS, default="K", help="energy output unit (default K)")


def _add_output_args(parser):
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", type=Path, default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ohstark", description="Stark-Zeeman spectrum of ground-state OH")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="spectrum along a magnetic-field sweep")
    p.add_argument("--b-start", type=float, default=0.0, help="first B in tesla (default 0)")
    p.add_argument("--b-stop", type=float, default=0.5, help="last B in tesla (default 0.5)")
    p.add_argument("--b-steps", type=int, default=501, help="number of grid points (default 501)")
    p.add_argument("--track-branches", action="store_true", help="label branches by eigenvector continuity")
    _add_physics_args(p)
    _add_output_args(p)

    p = sub.add_parser("eigen", help="labelled spectrum and diagnostics at one field point")
    p.add_argument("--b", type=float, default=0.0, help="magnetic field in tesla (default 0)")
    _add_physics_args(p)

    p = sub.add_parser("evolve", help="coherent evolution from an initial state")
    p.add_argument("--b", type=float, default=0.0, help="magnetic field in tesla (default 0)")
    p.add_argument("--t-stop", type=float, default=None, help="final time in seconds (default two doublet periods)")
    p.add_argument("--t-steps", type=int, default=201)
    p.add_argument(
        "--initial", default="1,0,0,0,1,0,0,0",
        help="comma-separated real amplitudes in basis order (normalized automatically)",
    )
    _add_physics_args(p, with_unit=False)
    _add_output_args(p)

    p = sub.add_parser("verify", help="randomized check of every invariant")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--corrupt-entry", default=None, metavar="I,J",
                   help="test hook: scale H[I,J] (0-based) by --corrupt-factor before checking")
    p.add_argument("--corrupt-factor", type=float, default=1.01)
    _add_physics_args(p, with_unit=False)
    return parser


def _params(args) -> MolecularParameters:
    return MolecularParameters.from_lab_units(args.delta_ghz, args.mu_e_debye)


def _field(args, b) -> FieldPoint:
    return FieldPoint.from_lab_units(b, args.e_kvcm, args.theta_deg)


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def cmd_sweep(args) -> int:
    f = _field(args, args.b_start)
    cfg = SweepConfig(
        b_start=args.b_start, b_stop=args.b_stop, b_steps=args.b_steps,
        e_field=f.e, theta=f.theta, params=_params(args),
        unit=args.unit, track_branches=args.track_branches,
    )
    try:
        result = run_sweep(cfg)
    except MismatchAtPoint as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(sweep_to_csv(result) if args.format == "csv" else sweep_to_json(result), args.out)
    return EXIT_OK


def cmd_eigen(args) -> int:
    f = _field(args, args.b)
    report = eigen_point(f.b, f.e, f.theta, _params(args), args.unit)
    print(report.format())
    return EXIT_OK if report.max_deviation <= 1e-9 else EXIT_FAIL


def cmd_evolve(args) -> int:
    p = _params(args)
    f = _field(args, args.b)
    try:
        amps = [float(x) for x in args.initial.split(",")]
    except ValueError:
        raise ConfigError(f"--initial must be 8 comma-separated numbers, got {args.initial!r}")
    if len(amps) != 8:
        raise ConfigError(f"--initial needs 8 amplitudes, got {len(amps)}")
    if args.t_steps < 1:
        raise ConfigError("--t-steps must be >= 1")
    psi0 = normalize(amps)
    t_stop = 2 * (2 * math.pi / p.delta) if args.t_stop is None else args.t_stop
    times = np.linspace(0.0, t_stop, args.t_steps)
    states = evolve(p, f, psi0, times)
    h = build_hamiltonian(p, f)

    rows = []
    for t, psi in zip(times, states):
        bloch = doublet_bloch_vector(psi)
        rows.append({
            "t_s": float(t),
            "populations": [float(x) for x in np.abs(psi) ** 2],
            "sigma": [float(x) for x in bloch],
            "doublet_purity": purity(partial_trace_rotor(density_matrix(psi))),
            "energy_j": float(np.vdot(psi, h @ psi).real),
        })

    if args.format == "json":
        text = json.dumps(rows, indent=1)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t_s"] + [f"pop{k}" for k in range(1, 9)]
                   + ["sigma_x", "sigma_y", "sigma_z", "doublet_purity", "energy_j"])
        for r in rows:
            w.writerow([f"{v:.17g}" for v in
                        [r["t_s"], *r["populations"], *r["sigma"], r["doublet_purity"], r["energy_j"]]])
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    hook = None
    if args.corrupt_entry:
        try:
            i, j = (int(x) for x in args.corrupt_entry.split(","))
        except ValueError:
            raise ConfigError(f"--corrupt-entry must look like I,J, got {args.corrupt_entry!r}")
        factor = args.corrupt_factor

        def hook(h):
            h[i, j] *= factor
            return h

    report = verify_all(seed=args.seed, samples=args.samples, params=_params(args), hamiltonian_hook=hook)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {"sweep": cmd_sweep, "eigen": cmd_eigen, "evolve": cmd_evolve, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except OHStarkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
