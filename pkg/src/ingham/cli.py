"""Command line: constants, gram, verify and sweep over radius grids.

Exit status is 0 iff every certificate passes and no record errored; 2 on
configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .ball import ball_transform_g, dirichlet_mu, eigen_profile, fourier_h
from .constants import exponent, theorem_constants
from .gram import HypothesisError, KahaneAssembly, dual_family, gram_matrix, gram_entry_quadrature
from .spectra import FamilyError, PartitionedFamily, family_from_dict, family_to_dict, geometry, residue_partition

log = logging.getLogger("ingham")

REPORT_SCHEMA = "ingham.report/1"
DEFAULT_GUARD = 1e-9
GRID_SPAN = 1e-2


class ConfigError(ValueError):
    pass


def guard_band() -> float:
    raw = os.environ.get("INGHAM_TOL")
    if raw is None:
        return DEFAULT_GUARD
    try:
        val = float(raw)
    except ValueError:
        raise ConfigError(f"INGHAM_TOL={raw!r} is not a number") from None
    if not val >= 0:
        raise ConfigError("INGHAM_TOL must be nonnegative")
    return val


@dataclass
class ExperimentConfig:
    family: PartitionedFamily
    radii: list[float] | None = None
    grid_count: int | None = None
    paper_uniform: bool = False
    dump_matrix: bool = False
    check_quadrature: bool = False
    out: Path | None = None
    csv_out: Path | None = None
    source: str = ""

    def __post_init__(self):
        if self.radii is None and self.grid_count is None:
            self.grid_count = 8
        if self.grid_count is not None and self.grid_count < 1:
            raise ConfigError("grid count must be >= 1")

    @property
    def geometry(self):
        return geometry(self.family, dirichlet_mu(self.family.family.dimension))

    def radius_list(self) -> list[float]:
        if self.radii is not None:
            return sorted(self.radii)
        return radius_grid(self.family, self.grid_count)


def radius_grid(pf: PartitionedFamily, count: int, span: float = GRID_SPAN) -> list[float]:
    """Radii R0 + 2 m r with r geometric in [span * R0/(2m), R0/(2m)]."""
    R0 = geometry(pf, dirichlet_mu(pf.family.dimension)).critical_radius
    m = pf.m
    r_max = R0 / (2 * m)
    if count == 1:
        rs = [r_max]
    else:
        rs = r_max * np.geomspace(span, 1.0, count)
    radii = [R0 + 2 * m * r for r in rs]
    radii[-1] = 2 * R0
    return radii


@dataclass
class Report:
    records: list[dict]
    metadata: dict
    summary: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(rec.get("error") is None and rec["cert_lower"] and rec["cert_upper"] for rec in self.records)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_dict(self) -> dict:
        return {"schema": REPORT_SCHEMA, "metadata": self.metadata, "summary": self.summary, "records": self.records}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=True) + "\n"


def family_hash(pf: PartitionedFamily) -> str:
    blob = json.dumps(family_to_dict(pf), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def _metadata(config: ExperimentConfig, guard: float) -> dict:
    geo = config.geometry
    return {
        "tool_version": __version__,
        "family_hash": family_hash(config.family),
        "dimension": config.family.family.dimension,
        "size": len(config.family.family),
        "m": config.family.m,
        "gamma": geo.gamma,
        "R0": geo.critical_radius,
        "exponent": exponent(config.family.m, config.family.family.dimension),
        "paper_uniform": config.paper_uniform,
        "tolerances": {"guard_band": guard, "biorthogonality": 1e-8, "interpolation": 1e-7},
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }


def _dump_matrix(config: ExperimentConfig, gram, R: float) -> str:
    base = config.out.parent if config.out else Path(".")
    path = base / f"gram_R{R:.10g}.csv"
    np.savetxt(path, gram.entries, delimiter=",", fmt="%.17g")
    return str(path)


def _quadrature_check(pf: PartitionedFamily, R: float, gram) -> float:
    pts = pf.family.points
    K = len(pts)
    idx = [(0, n) for n in range(1, min(K, 6))]
    worst = 0.0
    for k, n in idx:
        worst = max(worst, abs(gram_entry_quadrature(pts[k] - pts[n], R) - gram.entries[k, n]))
    return worst


def evaluate_radius(config: ExperimentConfig, R: float, guard: float) -> dict:
    pf = config.family
    rec: dict = {"R": R, "error": None}
    try:
        chain = theorem_constants(pf, R, paper_uniform=config.paper_uniform)
    except HypothesisError as exc:
        rec.update(error=f"hypothesis violation: {exc}", cert_lower=False, cert_upper=False)
        return rec
    gram = gram_matrix(pf.family, R)
    dual = dual_family(gram)
    lo, hi = dual.bounds.lambda_min, dual.bounds.lambda_max
    rec.update(chain.to_dict())
    rec.pop("extra", None)
    rec.update(
        lambda_min=lo,
        lambda_max=hi,
        eigen_residual=dual.bounds.residual,
        cert_lower=bool(chain.L <= lo * (1 + guard)),
        cert_upper=bool(hi <= chain.c2 * (1 + guard)),
        dual_norm_max=float(dual.dual_norms.max()),
        biorthogonality_residual=dual.biorthogonality_residual,
    )
    ka = KahaneAssembly(pf, R)
    rec["kahane_interpolation_residual"] = ka.interpolation_residual()
    rec["kahane_l1_bound_max"] = max(ka.l1_bound(k) for k in pf.family.labels)
    rec["chain_l1_bound_max"] = max(chain.p_factors.values())
    if config.dump_matrix:
        rec["matrix_csv"] = _dump_matrix(config, gram, R)
    if config.check_quadrature:
        rec["quadrature_max_error"] = _quadrature_check(pf, R, gram)
    return rec


def run_verify(config: ExperimentConfig) -> Report:
    guard = guard_band()
    records = []
    for R in config.radius_list():
        try:
            records.append(evaluate_radius(config, R, guard))
        except ArithmeticError as exc:
            log.error("R=%s: %s", R, exc)
            records.append({"R": R, "error": f"{type(exc).__name__}: {exc}", "cert_lower": False, "cert_upper": False})
    records.sort(key=lambda rec: rec["R"])
    report = Report(records=records, metadata=_metadata(config, guard))
    report.summary = {
        "records": len(records),
        "passed": sum(1 for rec in records if rec.get("error") is None and rec["cert_lower"] and rec["cert_upper"]),
        "ok": report.ok,
    }
    return report


def fit_slope(r, L) -> float:
    x, y = np.log(np.asarray(r)), np.log(np.asarray(L))
    return float(np.polyfit(x, y, 1)[0])


SWEEP_COLUMNS = ("R", "r", "L", "lambda_min", "lambda_max", "c1", "c2")


def run_sweep(config: ExperimentConfig) -> tuple[Report, str]:
    if config.radii is None and config.grid_count < 5:
        raise ConfigError("sweep needs a grid count >= 5")
    report = run_verify(config)
    good = [rec for rec in report.records if rec.get("error") is None]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for rec in good:
        writer.writerow([repr(float(rec[c])) for c in SWEEP_COLUMNS])
    target = exponent(config.family.m, config.family.family.dimension)
    if len(good) >= 2:
        report.summary["slope_all"] = fit_slope([g["r"] for g in good], [g["L"] for g in good])
        small = good[:4]
        report.summary["slope_smallest4"] = fit_slope([g["r"] for g in small], [g["L"] for g in small])
    report.summary["slope_target"] = target
    return report, buf.getvalue()


# -- argument handling --------------------------------------------------------


def _read_json(text_or_path: str, what: str):
    text = text_or_path
    if not text_or_path.lstrip().startswith(("{", "[")):
        path = Path(text_or_path)
        if not path.exists():
            raise ConfigError(f"{what}: no such file {text_or_path}")
        text = path.read_text()
        if not text.strip():
            raise ConfigError(f"{what}: {text_or_path} is empty")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def build_config(args) -> ExperimentConfig:
    if not args.family:
        raise ConfigError("--family is required")
    doc = _read_json(args.family, "family")
    try:
        pf = family_from_dict(doc)
        if args.classes:
            cdoc = _read_json(args.classes, "classes")
            classes = cdoc.get("classes") if isinstance(cdoc, dict) else cdoc
            if not isinstance(classes, list):
                raise ConfigError("classes: expected a list or an object with field 'classes'")
            pf = PartitionedFamily(pf.family, tuple(classes))
        elif args.m is not None:
            pf = residue_partition(pf.family, args.m)
    except FamilyError as exc:
        raise ConfigError(str(exc)) from None
    if len(pf.family) < 2:
        raise ConfigError("family needs at least two points for a positive critical radius")
    radii = [float(args.R)] if args.R is not None else None
    return ExperimentConfig(
        family=pf,
        radii=radii,
        grid_count=args.R_grid if radii is None else None,
        paper_uniform=args.paper_uniform,
        dump_matrix=args.dump_matrix,
        check_quadrature=args.check_quadrature,
        out=Path(args.out) if args.out else None,
        csv_out=Path(args.csv) if getattr(args, "csv", None) else None,
        source=args.family,
    )


def dump_profile(N: int, out) -> None:
    w = eigen_profile(N)
    rho = np.linspace(0.0, 4.0, 401)
    H = w.profile(rho)
    h = fourier_h(w, rho)
    g = ball_transform_g(N, rho)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["rho", "H", "h", "g"])
    for row in zip(rho, H, h, g):
        writer.writerow([repr(float(v)) for v in row])


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _summary_line(rec: dict) -> str:
    if rec.get("error"):
        return f"R={rec['R']:.6g}: {rec['error']}"
    line = f"R={rec['R']:.6g} r={rec['r']:.4g} L={rec['L']:.4e} c1={rec['c1']:.4e} c2={rec['c2']:.4e}"
    if "lambda_min" in rec:
        line += f" lambda=[{rec['lambda_min']:.4e}, {rec['lambda_max']:.4e}]"
        line += " PASS" if rec["cert_lower"] and rec["cert_upper"] else " FAIL"
    return line


def cmd_constants(config: ExperimentConfig) -> int:
    records, status = [], 0
    for R in config.radius_list():
        try:
            chain = theorem_constants(config.family, R, paper_uniform=config.paper_uniform)
            rec = chain.to_dict()
            rec.pop("extra", None)
            rec["error"] = None
        except HypothesisError as exc:
            rec, status = {"R": R, "error": f"hypothesis violation: {exc}"}, 1
        records.append(rec)
        print(_summary_line(rec), file=sys.stderr)
    doc = {"schema": "ingham.constants/1", "family_hash": family_hash(config.family), "records": records}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", config.out)
    return status


def cmd_gram(config: ExperimentConfig) -> int:
    if config.radii is None:
        raise ConfigError("gram needs --R")
    R = config.radii[0]
    gram = gram_matrix(config.family.family, R)
    doc = {"schema": "ingham.gram/1", "radius": R, "size": gram.size, "entries": gram.entries.tolist()}
    try:
        dual = dual_family(gram)
        doc.update(
            lambda_min=dual.bounds.lambda_min,
            lambda_max=dual.bounds.lambda_max,
            eigen_residual=dual.bounds.residual,
            dual_norms=dual.dual_norms.tolist(),
            biorthogonality_residual=dual.biorthogonality_residual,
        )
    except ArithmeticError as exc:
        doc["error"] = f"{type(exc).__name__}: {exc}"
    if config.dump_matrix:
        doc["matrix_csv"] = _dump_matrix(config, gram, R)
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", config.out)
    return 0 if "error" not in doc else 1


def cmd_verify(config: ExperimentConfig) -> int:
    report = run_verify(config)
    for rec in report.records:
        print(_summary_line(rec), file=sys.stderr)
    _emit(report.to_json(), config.out)
    return report.exit_code


def cmd_sweep(config: ExperimentConfig) -> int:
    report, table = run_sweep(config)
    s = report.summary
    if "slope_smallest4" in s:
        print(f"slope(log L vs log r), 4 smallest r: {s['slope_smallest4']:.4f}  target {s['slope_target']}", file=sys.stderr)
    _emit(report.to_json(), config.out)
    if config.csv_out:
        config.csv_out.write_text(table)
    elif config.out is None:
        sys.stdout.write(table)
    else:
        config.out.with_suffix(".csv").write_text(table)
    return report.exit_code


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help="family JSON file or inline JSON object")
    part = p.add_mutually_exclusive_group()
    part.add_argument("--m", type=int, help="residue partition into m classes (1-D)")
    part.add_argument("--classes", help="JSON file with a class index per point")
    rad = p.add_mutually_exclusive_group()
    rad.add_argument("--R", type=float, help="single ball radius")
    rad.add_argument("--R-grid", dest="R_grid", type=int, help="number of radii in (R0, 2R0], geometric in r")
    p.add_argument("--paper-uniform", action="store_true", help="r-free constants (worst case over r)")
    p.add_argument("--dump-matrix", action="store_true", help="write Gram matrices as CSV next to --out")
    p.add_argument("--check-quadrature", action="store_true", help="cross-check Gram entries by quadrature")
    p.add_argument("--out", help="output path (default stdout)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ingham", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--dump-profile", type=int, metavar="N", help="print rho,H,h,g table for dimension N as CSV")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command")
    for name, helptext in [
        ("constants", "explicit constant chain for each radius"),
        ("gram", "Gram matrix, extreme eigenvalues and dual norms"),
        ("verify", "certify the two-sided inequality against the Gram spectrum"),
        ("sweep", "radius sweep with CSV table and log-log slope"),
    ]:
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        if name == "sweep":
            p.add_argument("--csv", help="CSV table path (default: --out with .csv suffix)")
    return parser


COMMANDS = {"constants": cmd_constants, "gram": cmd_gram, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.dump_profile is not None:
        try:
            dump_profile(args.dump_profile, sys.stdout)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        if args.command is None:
            return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        config = build_config(args)
        return COMMANDS[args.command](config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
