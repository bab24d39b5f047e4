"""Command-line entry point: ``cwlap <command> [options]``.

Exit status is 0 on success, 1 when a certificate suite or convergence check
fails, and 2 on usage errors (bad flags, invalid bodies, unknown config keys).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import bessel
from .certify import (
    appendix_c_suite,
    certificates_csv,
    certificates_json,
    certify_c_sign,
    classification_csv,
    classify,
    lemma6_suite,
)
from .disk_spectrum import enumerate_spectrum
from .errors import DomainError, InvalidBodyError, SuiteViolation
from .oracle_solver import convergence_study, solve_index
from .perturbation import predict
from .width_body import ConstantWidthBody, parse_coeffs

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    """Settings shared by all commands; a config file holds ``key = value`` lines."""

    cache_path: str = str(bessel.DEFAULT_CACHE)
    output_format: str = "csv"
    output_path: str | None = None
    basis_size: int | None = None
    scan_step: float = 0.01
    solver_tol: float = 1e-10
    min_order: float = 2.7

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "RunConfig":
        known = {f.name: f.type for f in dataclasses.fields(cls)}
        values: dict = {}
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in known:
                raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value
        return cls()._with(values)

    def _with(self, values: dict) -> "RunConfig":
        out = dataclasses.replace(self)
        for key, value in values.items():
            if value is None:
                continue
            if key in ("basis_size",):
                value = int(value)
            elif key in ("scan_step", "solver_tol", "min_order"):
                value = float(value)
            setattr(out, key, value)
        if out.output_format not in ("csv", "json"):
            raise DomainError(f"output_format must be csv or json, got {out.output_format!r}")
        return out

    def solver_overrides(self) -> dict:
        extra = {"scan_step": self.scan_step, "tol": self.solver_tol}
        if self.basis_size is not None:
            extra["basis_size"] = self.basis_size
        return extra


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of 'key = value' lines (flags override it)")
    common.add_argument("--cache", help=f"zero cache file (default {bessel.DEFAULT_CACHE}, env CWLAP_CACHE)")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    common.add_argument("--output", help="write the table here instead of stdout")

    parser = argparse.ArgumentParser(prog="cwlap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="disk eigenvalues in index order")
    p.add_argument("--count", type=int, required=True)

    p = sub.add_parser("body", parents=[common], help="geometry of a constant-width body")
    p.add_argument("--coeff", required=True, action="append", help="e.g. a3=0.1,a5=0.02+0.01i,b3=-0.05")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--svg", help="write the boundary as SVG")
    p.add_argument("--radius-csv", help="write theta, exact and second-order radius")

    p = sub.add_parser("expand", parents=[common], help="second-order eigenvalue prediction")
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--coeff", required=True, action="append")
    p.add_argument("--eps", type=float, required=True)

    p = sub.add_parser("certify", parents=[common], help="sign certificates")
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--suite", choices=("lemma6", "appendix-c"))
    p.add_argument("--m-cap", type=int, default=20)
    p.add_argument("--p-cap", type=int, default=10)

    p = sub.add_parser("classify", parents=[common], help="local-minimality verdict per index")
    p.add_argument("--max-kappa", type=int, default=50)

    p = sub.add_parser("solve", parents=[common], help="numerical eigenvalue of a body")
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--coeff", required=True, action="append")
    p.add_argument("--eps", type=float, required=True)

    p = sub.add_parser("verify", parents=[common], help="convergence of the expansion")
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--coeff", required=True, action="append")
    p.add_argument("--eps", required=True, help="comma-separated, descending")
    p.add_argument("--min-order", type=float, help="fitted order below this exits 1 (default 2.7)")
    return parser


def _table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(float(v)) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def _emit(text: str, config: RunConfig) -> None:
    if config.output_path:
        Path(config.output_path).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _run(args: argparse.Namespace, config: RunConfig) -> int:
    fmt = config.output_format
    cmd = args.command
    if cmd == "spectrum":
        table = enumerate_spectrum(args.count)
        _emit(table.to_json() + "\n" if fmt == "json" else table.to_csv(), config)
        return EXIT_OK

    if cmd == "body":
        body = ConstantWidthBody(parse_coeffs(args.coeff), args.eps)
        wmin, wmax, diam = body.width_and_diameter()
        row = {
            "coeffs": body.coeffs.format(),
            "eps": body.epsilon,
            "epsilon_max": body.epsilon_max,
            "width_min": wmin,
            "width_max": wmax,
            "diameter": diam,
            "area": body.area(),
        }
        if args.svg:
            Path(args.svg).write_text(body.to_svg(), encoding="utf-8", newline="\n")
        if args.radius_csv:
            Path(args.radius_csv).write_text(body.radius_csv(), encoding="utf-8", newline="\n")
        _emit(_table([row], fmt), config)
        return EXIT_OK

    if cmd == "expand":
        pred = predict(args.kappa, parse_coeffs(args.coeff), args.eps)
        _emit(_table([pred.to_dict()], fmt), config)
        return EXIT_OK

    if cmd == "certify":
        single = (args.k, args.m, args.p)
        if args.suite is None and None in single:
            raise DomainError("certify needs --k, --m and --p, or --suite")
        if args.suite is not None and any(v is not None for v in single):
            raise DomainError("--suite cannot be combined with --k/--m/--p")
        status = EXIT_OK
        if args.suite is None:
            certs = [certify_c_sign(args.k, args.m, args.p)]
        else:
            run = lemma6_suite if args.suite == "lemma6" else appendix_c_suite
            kwargs = {} if args.suite == "lemma6" else {"m_cap": args.m_cap, "p_cap": args.p_cap}
            try:
                certs = run(**kwargs)
            except SuiteViolation as exc:
                print(str(exc), file=sys.stderr)
                certs = run(strict=False, **kwargs)
                status = EXIT_VIOLATION
        _emit(certificates_json(certs) + "\n" if fmt == "json" else certificates_csv(certs), config)
        return status

    if cmd == "classify":
        rows = classify(args.max_kappa)
        text = json.dumps([r.to_dict() for r in rows], indent=2) + "\n" if fmt == "json" else classification_csv(rows)
        _emit(text, config)
        return EXIT_OK

    if cmd == "solve":
        coeffs = parse_coeffs(args.coeff)
        body = ConstantWidthBody(coeffs, args.eps)
        lam = solve_index(body, args.kappa, **config.solver_overrides())
        pred = predict(args.kappa, coeffs, args.eps)
        row = {
            "kappa": args.kappa,
            "eps": args.eps,
            "lambda_num": lam,
            "lambda_pred": pred.lambda_pred,
            "residual": abs(lam - pred.lambda_pred),
            "lambda_disk": pred.omega0**2,
        }
        _emit(_table([row], fmt), config)
        return EXIT_OK

    if cmd == "verify":
        try:
            eps = [float(e) for e in args.eps.split(",") if e.strip()]
        except ValueError:
            raise DomainError(f"bad --eps list {args.eps!r}") from None
        study = convergence_study(parse_coeffs(args.coeff), args.kappa, eps, **config.solver_overrides())
        if fmt == "json":
            rows = [dataclasses.asdict(r) for r in study.rows]
            text = json.dumps({"kappa": study.kappa, "slope": study.slope, "rows": rows}, indent=2) + "\n"
        else:
            text = study.to_csv()
        _emit(text, config)
        min_order = args.min_order if args.min_order is not None else config.min_order
        if study.slope is not None and study.slope < min_order:
            print(f"fitted order {study.slope:.3f} below {min_order}", file=sys.stderr)
            return EXIT_VIOLATION
        return EXIT_OK
    raise DomainError(f"unknown command {cmd!r}")


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        config = RunConfig.from_file(args.config) if args.config else RunConfig()
        config = config._with(
            {
                "cache_path": args.cache or os.environ.get("CWLAP_CACHE") or None,
                "output_format": args.format,
                "output_path": args.output,
            }
        )
        bessel.configure_cache(config.cache_path)
        return _run(args, config)
    except (DomainError, InvalidBodyError, OSError) as exc:
        print(f"cwlap {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
