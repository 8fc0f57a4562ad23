"""Magnetic-field sweeps, single-point reports and their file formats."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
import io
import json
import math
from pathlib import Path
import warnings

import numpy as np
from scipy.optimize import linear_sum_assignment

from .analytic_solver import solve_spectra, solve_spectrum
from .core_model import (
    ENERGY_UNITS,
    FieldPoint,
    MolecularParameters,
    build_hamiltonian,
    convert_energy,
)
from .exceptions import ConfigError, MismatchAtPoint, RefineGridWarning
from .numeric_oracle import collinear_spectrum, jacobi_eigen, jacobi_eigen_batch
from .symmetry import anticommutation_residual

AGREEMENT_TOL = 1e-9
OVERLAP_MIN = 0.9
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class SweepConfig:
    b_start: float = 0.0
    b_stop: float = 0.5
    b_steps: int = 501
    e_field: float = 2.0e5
    theta: float = math.pi / 2
    params: MolecularParameters = field(default_factory=MolecularParameters.oh)
    unit: str = "K"
    track_branches: bool = False

    def __post_init__(self):
        if not isinstance(self.b_steps, (int, np.integer)) or self.b_steps < 1:
            raise ConfigError(f"b_steps must be a positive integer, got {self.b_steps!r}")
        if self.b_start < 0 or self.b_stop < self.b_start:
            raise ConfigError(f"need 0 <= b_start <= b_stop, got {self.b_start!r}, {self.b_stop!r}")
        if self.unit not in ENERGY_UNITS:
            raise ConfigError(f"unit must be one of {ENERGY_UNITS}, got {self.unit!r}")
        # validates e_field and theta
        FieldPoint(self.b_start, self.e_field, self.theta)

    def b_grid(self) -> np.ndarray:
        if self.b_steps == 1:
            return np.array([float(self.b_start)])
        return np.linspace(self.b_start, self.b_stop, self.b_steps)


@dataclass
class SweepRecord:
    b: float
    e: float
    theta: float
    eigenvalues: np.ndarray
    branches: np.ndarray | None = None


@dataclass
class SweepResult:
    records: list
    unit: str = "K"
    deviations: np.ndarray | None = None

    def eigenvalue_table(self) -> np.ndarray:
        return np.array([r.eigenvalues for r in self.records])

    def branch_table(self) -> np.ndarray | None:
        if not self.records or self.records[0].branches is None:
            return None
        return np.array([r.branches for r in self.records])

    def branch_curves(self) -> np.ndarray:
        """Eigenvalues re-ordered so column k follows branch k + 1 through the sweep."""
        ids = self.branch_table()
        if ids is None:
            raise ValueError("sweep was run without branch tracking")
        values = self.eigenvalue_table()
        out = np.empty_like(values)
        for row, (vals, bid) in enumerate(zip(values, ids)):
            out[row, bid - 1] = vals
        return out


def _clusters(values, tol):
    """Index groups of (ascending) values closer than ``tol`` to a neighbour."""
    groups, current = [], [0]
    for k in range(1, len(values)):
        if values[k] - values[k - 1] <= tol:
            current.append(k)
        else:
            groups.append(current)
            current = [k]
    groups.append(current)
    return groups


def _cluster_overlap(prev_vecs, prev_vals, cur_vecs, cur_vals, tol):
    """Overlap matrix, using subspace overlaps inside degenerate clusters."""
    n = len(prev_vals)
    out = np.empty((n, n))
    pc = _clusters(prev_vals, tol)
    cc = _clusters(cur_vals, tol)
    for gi in pc:
        for gj in cc:
            block = prev_vecs[:, gi].T @ cur_vecs[:, gj]
            if len(gi) == 1 and len(gj) == 1:
                value = abs(block[0, 0])
            else:
                value = np.linalg.norm(block, 2)
            out[np.ix_(gi, gj)] = value
    return out


def track_branches(bs, values, vectors, overlap_min: float = OVERLAP_MIN) -> np.ndarray:
    """Branch ids (1..8) per grid point by maximal eigenvector overlap.

    ``values`` (n, 8) ascending and ``vectors`` (n, 8, 8) with eigenvectors in
    columns. Emits a :class:`RefineGridWarning` for every point where a matched
    pair has overlap below ``overlap_min``.
    """
    n_pts, dim = values.shape
    ids = np.empty((n_pts, dim), dtype=int)
    ids[0] = np.arange(1, dim + 1)
    for k in range(1, n_pts):
        scale = max(np.abs(values[k]).max(), np.abs(values[k - 1]).max())
        ov = _cluster_overlap(vectors[k - 1], values[k - 1], vectors[k], values[k], DEGENERACY_TOL * scale)
        rows, cols = linear_sum_assignment(-ov)
        ids[k, cols] = ids[k - 1, rows]
        worst = ov[rows, cols].min()
        if worst < overlap_min:
            warnings.warn(
                f"branch overlap {worst:.3f} < {overlap_min} between B={float(bs[k - 1]):.6g} T and B={float(bs[k]):.6g} T; refine the grid",
                RefineGridWarning,
                stacklevel=2,
            )
    return ids


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Analytic spectrum along the B grid, each point checked against Jacobi."""
    p = cfg.params
    bs = cfg.b_grid()
    es_, th = np.full_like(bs, cfg.e_field), np.full_like(bs, cfg.theta)
    analytic = solve_spectra(p, bs, es_, th)
    hams = np.array([build_hamiltonian(p, FieldPoint(b, cfg.e_field, cfg.theta)) for b in bs])
    oracle = jacobi_eigen_batch(hams)

    dev = np.abs(analytic - oracle.values).max(axis=1) / np.abs(oracle.values).max(axis=1)
    bad = np.flatnonzero(dev > AGREEMENT_TOL)
    if len(bad):
        k = int(bad[0])
        raise MismatchAtPoint(float(bs[k]), float(dev[k]), AGREEMENT_TOL)

    branches = None
    if cfg.track_branches:
        branches = track_branches(bs, oracle.values, oracle.vectors)

    converted = convert_energy(analytic, cfg.unit)
    records = [
        SweepRecord(
            b=float(b), e=float(cfg.e_field), theta=float(cfg.theta),
            eigenvalues=converted[k],
            branches=None if branches is None else branches[k],
        )
        for k, b in enumerate(bs)
    ]
    return SweepResult(records=records, unit=cfg.unit, deviations=dev)


# --- file formats -----------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def csv_header(with_branches: bool) -> list:
    cols = ["b_tesla", "e_vpm", "theta_rad"] + [f"ev{k}" for k in range(1, 9)]
    if with_branches:
        cols += [f"branch{k}" for k in range(1, 9)]
    return cols


def sweep_to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    with_branches = result.branch_table() is not None
    writer.writerow(csv_header(with_branches))
    for r in result.records:
        row = [_fmt(r.b), _fmt(r.e), _fmt(r.theta)] + [_fmt(v) for v in r.eigenvalues]
        if with_branches:
            row += [str(int(i)) for i in r.branches]
        writer.writerow(row)
    return buf.getvalue()


def sweep_from_csv(text: str, unit: str = "K") -> SweepResult:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    with_branches = len(header) == 19
    if header != csv_header(with_branches):
        raise ValueError(f"unexpected sweep CSV header: {header}")
    records = []
    for row in reader:
        if not row:
            continue
        vals = [float(x) for x in row[:11]]
        records.append(SweepRecord(
            b=vals[0], e=vals[1], theta=vals[2],
            eigenvalues=np.array(vals[3:11]),
            branches=np.array([int(x) for x in row[11:19]]) if with_branches else None,
        ))
    return SweepResult(records=records, unit=unit)


def sweep_to_json(result: SweepResult) -> str:
    payload = [
        {
            "b": r.b,
            "eigenvalues": [float(v) for v in r.eigenvalues],
            "branches": None if r.branches is None else [int(i) for i in r.branches],
        }
        for r in result.records
    ]
    return json.dumps(payload, indent=1)


def sweep_from_json(text: str, e: float = float("nan"), theta: float = float("nan"), unit: str = "K") -> SweepResult:
    """Parse JSON sweep records; the format does not carry E or theta."""
    records = [
        SweepRecord(
            b=float(item["b"]), e=e, theta=theta,
            eigenvalues=np.array(item["eigenvalues"], dtype=float),
            branches=None if item.get("branches") is None else np.array(item["branches"], dtype=int),
        )
        for item in json.loads(text)
    ]
    return SweepResult(records=records, unit=unit)


def write_sweep(result: SweepResult, path, fmt: str = "csv") -> None:
    text = sweep_to_csv(result) if fmt == "csv" else sweep_to_json(result)
    Path(path).write_text(text)


# --- single point report ----------------------------------------------------

@dataclass
class EigenReport:
    field: FieldPoint
    unit: str
    labels: tuple
    eigenvalues: np.ndarray
    oracle: np.ndarray
    pairing: tuple
    max_deviation: float
    anticommutation: float
    collinear: np.ndarray | None = None

    def format(self) -> str:
        f = self.field
        lines = [
            f"B = {f.b:.6g} T, E = {f.e:.6g} V/m, theta = {math.degrees(f.theta):.6g} deg, unit = {self.unit}",
        ]
        partner = {}
        for i, j in self.pairing:
            partner[i], partner[j] = j, i
        head = f"{'#':>2}  {'label':<12}{'analytic':>24}{'oracle':>24}  partner"
        if self.collinear is not None:
            head += f"{'2x2 block':>26}"
        lines.append(head)
        for k in range(8):
            line = (
                f"{k + 1:>2}  {str(self.labels[k]):<12}{self.eigenvalues[k]:>24.15g}"
                f"{self.oracle[k]:>24.15g}  {partner[k] + 1:>7}"
            )
            if self.collinear is not None:
                line += f"{self.collinear[k]:>26.15g}"
            lines.append(line)
        lines.append(f"max relative deviation analytic vs oracle: {self.max_deviation:.3e}")
        lines.append(f"anticommutation residual |HC + CH|/|H|:   {self.anticommutation:.3e}")
        return "\n".join(lines)


def eigen_point(b: float, e: float, theta: float, params: MolecularParameters, unit: str = "K") -> EigenReport:
    f = FieldPoint(b, e, theta)
    spec = solve_spectrum(params, f)
    h = build_hamiltonian(params, f)
    oracle = jacobi_eigen(h).values
    dev = float(np.abs(spec.eigenvalues - oracle).max() / np.abs(oracle).max())
    collinear = None
    if math.sin(theta) == 0.0 or theta in (0.0, math.pi):
        collinear = convert_energy(collinear_spectrum(params, f), unit)
    return EigenReport(
        field=f,
        unit=unit,
        labels=spec.labels,
        eigenvalues=convert_energy(spec.eigenvalues, unit),
        oracle=convert_energy(oracle, unit),
        pairing=spec.pairing,
        max_deviation=dev,
        anticommutation=anticommutation_residual(h),
        collinear=collinear,
    )
