"""Command-line front end.

    spin-tradeoff curve    --two-j 2 --points 101 [--ho-overlay]
    spin-tradeoff point    --two-j 4 --g 0.5
    spin-tradeoff verify   --two-j 1 --samples 100000 --seed 42
    spin-tradeoff cg-table --two-j 3

Exit codes: 0 success, 2 usage error, 3 numeric or verification failure,
4 I/O error.  The Monte Carlo seed falls back to ``$SPIN_TRADEOFF_SEED`` and
then to :data:`DEFAULT_SEED`.
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
from typing import Callable

import numpy as np

from .angular import SpinJ, cg_table, compose, rotation_matrices
from .coherent import make_rng, sample_quaternions
from .errors import DomainError, NumericError
from .instrument import (
    CovariantInstrument,
    DensityMatrix,
    covariance_residual,
    density_monte_carlo,
    fidelities_bilinear,
    fidelities_monte_carlo,
    fidelities_quadrature,
)
from .tradeoff import XiDiagonal, g_max, g_min, ho_tradeoff, solve_for_G, sweep_curve, tradeoff_point
from . import verify as oracles

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
DEFAULT_SEED = 20070101
SEED_ENV = "SPIN_TRADEOFF_SEED"
CURVE_FIELDS = ["p", "G", "F", "I", "D", "trace_xi", "lambda_max"]


@dataclass
class RunConfig:
    command: str
    two_j: int
    points: int = 101
    g: float | None = None
    samples: int = 50_000
    seed: int = DEFAULT_SEED
    tol: float = 1e-8
    fmt: str = "csv"
    out: str | None = None
    ho_overlay: bool = False

    def __post_init__(self):
        if self.two_j < 0:
            raise DomainError("--two-j must be nonnegative")
        if self.fmt not in ("csv", "json"):
            raise DomainError(f"unknown format {self.fmt!r}")
        if self.samples < 100:
            raise DomainError("--samples must be at least 100")
        if self.points < 2:
            raise DomainError("--points must be at least 2")

    @property
    def spin(self) -> SpinJ:
        return SpinJ(self.two_j)


class UsageError(Exception):
    pass


def fmt_num(x: float) -> str:
    return f"{x:.12g}"


def _round(x: float) -> float:
    return float(fmt_num(x))


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _two_m_label(two_m: int) -> str:
    return str(two_m // 2) if two_m % 2 == 0 else f"{two_m}/2"


def cmd_curve(cfg: RunConfig) -> tuple[int, str]:
    if cfg.two_j < 1:
        raise UsageError("curve needs --two-j >= 1")
    grid = np.linspace(0.0, 1.0, cfg.points)
    points = sweep_curve(cfg.spin, grid)
    fields = CURVE_FIELDS + (["D_ho"] if cfg.ho_overlay else [])
    records = []
    for pt in points:
        rec = {k: pt.as_dict()[k] for k in CURVE_FIELDS}
        if cfg.ho_overlay:
            rec["D_ho"] = ho_tradeoff(pt.I)
        records.append(rec)
    if cfg.fmt == "json":
        body = [{k: _round(v) for k, v in r.items()} for r in records]
        return EXIT_OK, json.dumps({"two_j": cfg.two_j, "rows": body}, indent=1) + "\n"
    return EXIT_OK, _csv_text(fields, [[fmt_num(r[k]) for k in fields] for r in records])


def cmd_point(cfg: RunConfig) -> tuple[int, str]:
    if cfg.two_j < 1:
        raise UsageError("point needs --two-j >= 1")
    if cfg.g is None:
        raise UsageError("point needs --g")
    lo, hi = g_min(cfg.spin), g_max(cfg.spin)
    if not lo - cfg.tol <= cfg.g <= hi + cfg.tol:
        raise UsageError(f"--g {cfg.g} outside [{lo:.12g}, {hi:.12g}] for two_j={cfg.two_j}")
    pt = solve_for_G(cfg.spin, cfg.g, tol=cfg.tol)
    rec = pt.as_dict()
    if cfg.fmt == "json":
        out = {k: ([_round(a) for a in v] if k == "a" else _round(v)) for k, v in rec.items()}
        out["two_j"] = cfg.two_j
        out["m"] = [_two_m_label(m) for m in cfg.spin.two_ms()]
        return EXIT_OK, json.dumps(out, indent=1) + "\n"
    a_cols = [f"a[{_two_m_label(m)}]" for m in cfg.spin.two_ms()]
    row = [fmt_num(rec[k]) for k in CURVE_FIELDS] + [fmt_num(a) for a in rec["a"]]
    return EXIT_OK, _csv_text(CURVE_FIELDS + a_cols, [row])


def cmd_cg_table(cfg: RunConfig) -> tuple[int, str]:
    c = cg_table(cfg.spin)
    labels = [_two_m_label(m) for m in cfg.spin.two_ms()]
    if cfg.fmt == "json":
        body = {"two_j": cfg.two_j, "m": labels, "c": [[_round(x) for x in row] for row in c]}
        return EXIT_OK, json.dumps(body, indent=1) + "\n"
    return EXIT_OK, _csv_text(labels, [[fmt_num(x) for x in row] for row in c])


@dataclass
class CheckResult:
    name: str
    status: str  # PASS, FAIL or SKIPPED
    residual: float | None = None
    tolerance: float | None = None
    note: str = ""

    def line(self) -> str:
        parts = [f"{self.status:7s} {self.name}"]
        if self.residual is not None:
            parts.append(f"residual={self.residual:.3e}")
        if self.tolerance is not None:
            parts.append(f"tol={self.tolerance:.1e}")
        if self.note:
            parts.append(self.note)
        return " ".join(parts)


def _check(name: str, residual: float, tol: float, note: str = "") -> CheckResult:
    ok = bool(np.isfinite(residual)) and residual <= tol
    return CheckResult(name, "PASS" if ok else "FAIL", float(residual), tol, note)


def _mc_excess(estimate: float, exact: float, stderr: float) -> float:
    """``|estimate - exact|`` in units of ``4 stderr`` (<= 1 passes); zero-variance safe."""
    return abs(estimate - exact) / (4.0 * stderr + 1e-12)


def run_checks(cfg: RunConfig) -> list[CheckResult]:
    """The oracle suite behind ``verify``; deterministic for a fixed seed."""
    spin = cfg.spin
    d = spin.dim
    rng = make_rng(cfg.seed)
    streams = rng.spawn(8)
    results: list[CheckResult] = []

    c = cg_table(spin)
    results.append(_check("cg.symmetry", float(np.abs(c - c.T).max()), 1e-14))
    col_norm = max(
        abs(sum(c[k, big - k] ** 2 for k in range(max(0, big - d + 1), min(big, d - 1) + 1)) - 1.0)
        for big in range(2 * d - 1)
    )
    results.append(_check("cg.column_normalization", col_norm, 1e-12))

    quats = sample_quaternions(streams[0], 40)
    us = rotation_matrices(spin, quats)
    unit = max(float(np.abs(u @ u.conj().T - np.eye(d)).max()) for u in us)
    results.append(_check("rotation.unitarity", unit, 1e-10))
    homo = 0.0
    for q1, q2, u1, u2 in zip(quats[::2], quats[1::2], us[::2], us[1::2]):
        u12 = rotation_matrices(spin, compose(q1, q2).q[None, :])[0]
        homo = max(homo, float(np.abs(u12 - u1 @ u2).max()))
    results.append(_check("rotation.homomorphism", homo, 1e-10))

    if spin.two_j == 0:
        results.append(CheckResult("tradeoff.*", "SKIPPED", note="two_j=0 has no tradeoff"))
        return results

    instruments = [
        ("identity", CovariantInstrument.identity(spin)),
        ("estimation", CovariantInstrument.optimal_estimation(spin)),
        ("optimal_p0.5", CovariantInstrument(tradeoff_point(spin, 0.5).xi)),
    ]
    for i in range(3):
        a = np.abs(streams[1].standard_normal(d))
        instruments.append((f"random{i}", CovariantInstrument(XiDiagonal.normalized(spin, a))))
    det_err, mc_err = 0.0, 0.0
    for label, inst in instruments:
        fb, gb = fidelities_bilinear(inst)
        fq, gq = fidelities_quadrature(inst)
        det_err = max(det_err, abs(fb - fq), abs(gb - gq))
        fm, gm, sf, sg = fidelities_monte_carlo(inst, cfg.samples, streams[2])
        mc_err = max(mc_err, _mc_excess(fm, fq, sf), _mc_excess(gm, gq, sg))
    results.append(_check("fidelity.bilinear_vs_quadrature", det_err, 1e-9))
    results.append(_check("fidelity.monte_carlo_vs_quadrature", mc_err, 1.0, "(units of 4 stderr)"))

    cov = 0.0
    cov_rng = streams[3]
    for _, inst in instruments:
        for _ in range(8):
            g, h = sample_quaternions(cov_rng, 2)
            rho = DensityMatrix.random(spin, cov_rng)
            cov = max(cov, covariance_residual(inst, g, h, rho))
    results.append(_check("instrument.covariance", cov, 1e-10))

    rho = DensityMatrix.random(spin, streams[4])
    dens = 0.0
    for _, inst in instruments[1:]:
        mean, err = density_monte_carlo(inst, rho, cfg.samples, streams[4])
        dens = max(dens, _mc_excess(mean, 1.0, err))
    results.append(_check("instrument.trace_preservation", dens, 1.0, "(units of 4 stderr)"))

    lowest = np.zeros((d, d))
    lowest[0, 0] = 1.0
    avg = oracles.schur_average(spin, lowest, cfg.samples, streams[5])
    results.append(_check("schur.average", float(np.abs(avg - np.eye(d) / d).max()), 5 / math.sqrt(cfg.samples)))

    pts = sweep_curve(spin, np.linspace(0.0, 1.0, 21))
    lo, hi = math.sqrt(d), float(d)
    bound = max(max(lo - p.trace_xi, p.trace_xi - hi, 0.0) for p in pts)
    ends = max(abs(pts[0].trace_xi - hi), abs(pts[-1].trace_xi - lo))
    results.append(_check("tradeoff.trace_xi_bounds", max(bound, ends), 1e-9))
    phi = max(abs(p.trace_xi - oracles.trace_xi_from_choi(p.xi)) for p in pts)
    results.append(_check("tradeoff.trace_xi_choi_projection", phi, 1e-10))

    if spin.two_j > oracles.FULL_SPACE_MAX_TWO_J:
        results.append(
            CheckResult("full_space.*", "SKIPPED", note=f"two_j={spin.two_j} > {oracles.FULL_SPACE_MAX_TWO_J}")
        )
        return results

    ops = oracles.build_RF_RG(spin)
    P = ops.P_2j
    results.append(_check("projector.idempotent", float(np.abs(P @ P - P).max()), 1e-10))
    results.append(_check("projector.rank", abs(float(np.trace(P)) - (2 * spin.two_j + 1)), 1e-10))
    inv = max(float(np.abs(np.kron(u, u) @ P - P @ np.kron(u, u)).max()) for u in us[:5])
    results.append(_check("projector.invariance", inv, 1e-10))
    rf_res, rg_res = oracles.restriction_residuals(spin, ops)
    results.append(_check("choi.R_F_restriction", rf_res, 1e-12))
    results.append(_check("choi.R_G_restriction", rg_res, 1e-12))
    rf_mc = oracles.monte_carlo_RF(spin, cfg.samples, streams[6])
    results.append(_check("choi.R_F_monte_carlo", float(np.abs(rf_mc - ops.R_F).max()), 5 / math.sqrt(cfg.samples)))
    worst = 0.0
    for p in np.round(np.arange(10) * 0.1, 10):
        overlap, _ = oracles.full_space_eigencheck(spin, float(p), ops)
        worst = max(worst, 1.0 - overlap)
    results.append(_check("full_space.ansatz_overlap", worst, 1e-9))
    return results


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    results = run_checks(cfg)
    failed = [r for r in results if r.status == "FAIL"]
    if cfg.fmt == "json":
        body = {
            "two_j": cfg.two_j,
            "seed": cfg.seed,
            "samples": cfg.samples,
            "passed": not failed,
            "checks": [r.__dict__ for r in results],
        }
        text = json.dumps(body, indent=1) + "\n"
    else:
        header = f"# verify two_j={cfg.two_j} seed={cfg.seed} samples={cfg.samples}\n"
        text = header + "".join(r.line() + "\n" for r in results)
        text += f"# {len(results) - len(failed)}/{len(results)} checks passed or skipped\n"
    return (EXIT_NUMERIC if failed else EXIT_OK), text


COMMANDS: dict[str, Callable[[RunConfig], tuple[int, str]]] = {
    "curve": cmd_curve,
    "point": cmd_point,
    "verify": cmd_verify,
    "cg-table": cmd_cg_table,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spin-tradeoff",
        description="Information-disturbance tradeoff for spin coherent state estimation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("curve", "sweep the optimal frontier on a uniform p grid"),
        ("point", "minimum-disturbing instrument at a fixed estimation fidelity"),
        ("verify", "run the numerical oracle suite"),
        ("cg-table", "emit the stretched Clebsch-Gordan table"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--two-j", type=int, required=True, help="twice the spin (integer)")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--tol", type=float, default=1e-8, help="tolerance on G for `point`")
        if name == "curve":
            p.add_argument("--points", type=int, default=101)
            p.add_argument("--ho-overlay", action="store_true", help="add harmonic-oscillator D_ho column")
        if name == "point":
            p.add_argument("--g", type=float, required=True, help="target estimation fidelity")
        if name == "verify":
            p.add_argument("--samples", type=int, default=50_000)
            p.add_argument("--seed", type=int, default=None)
    return parser


def _resolve_seed(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"${SEED_ENV}={env!r} is not an integer") from None
    return DEFAULT_SEED


def config_from_args(args: argparse.Namespace) -> RunConfig:
    kwargs = {k: v for k, v in vars(args).items() if v is not None}
    kwargs["seed"] = _resolve_seed(getattr(args, "seed", None))
    return RunConfig(**kwargs)


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        status, text = COMMANDS[cfg.command](cfg)
    except (UsageError, DomainError) as exc:
        print(f"spin-tradeoff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"spin-tradeoff: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        _write(text, cfg.out)
    except OSError as exc:
        print(f"spin-tradeoff: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return status


if __name__ == "__main__":
    sys.exit(main())
