"""Command-line front end.

Subcommands: spectrum (single-point solve, both sectors), sweep (families
over a/d or (alpha0, alpha1)), wavefunction (sample one bound state on a
grid), oracle (finite-difference cross-check table), existence
(variational test report).  Every subcommand accepts --config FILE plus
flag overrides; exit codes are 0 on success, 2 for configuration errors,
3 for numerical failures.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from .config import (MatchingParams, OracleSpec, OutputSpec, RunConfig,
                     SweepSpec, load_config)
from .errors import ConfigError, ContractError, NumericalError
from .fdoracle import oracle_bound_states
from .modematch import (BoundState, ParitySector, WellConfig,
                        bound_state_energies, minimax_brackets, wavefunction)
from .outputs import (SweepResult, SweepRow, sweep_csv, write_sweep_csv,
                      write_sweep_json, write_wavefunction)
from .svg import write_sweep_svg
from .transverse import transversal_eigenvalues
from .variational import BumpProfile, existence_test

_WELL_FLAGS = ("alpha0", "alpha1", "a", "d")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML run configuration")
    for name in _WELL_FLAGS:
        p.add_argument(f"--{name}", type=float, help=f"override well.{name}")
    p.add_argument("--N", type=int, help="override matching.N")
    p.add_argument("--scan-points", type=int, help="override matching.scan_points")
    p.add_argument("--tol", type=float, help="override matching.tol")
    p.add_argument("--out-dir", help="override output.dir")
    p.add_argument("--formats", help="override output.formats (comma separated)")


def _resolve(args: argparse.Namespace) -> RunConfig:
    if args.config:
        cfg = load_config(args.config)
    else:
        missing = [n for n in _WELL_FLAGS if getattr(args, n) is None]
        if missing:
            raise ConfigError(
                f"without --config the well must be fully specified; missing: {missing}"
            )
        cfg = RunConfig(well=WellConfig(args.alpha0, args.alpha1, args.a, args.d))
    well_over = {n: getattr(args, n) for n in _WELL_FLAGS if getattr(args, n) is not None}
    if well_over and args.config:
        cfg = dataclasses.replace(cfg, well=dataclasses.replace(cfg.well, **well_over))
    match_over = {}
    if args.N is not None:
        match_over["N"] = args.N
    if args.scan_points is not None:
        match_over["scan_points"] = args.scan_points
    if args.tol is not None:
        match_over["tol"] = args.tol
    if match_over:
        cfg = dataclasses.replace(cfg, matching=dataclasses.replace(cfg.matching, **match_over))
    out_over = {}
    if args.out_dir is not None:
        out_over["dir"] = args.out_dir
    if args.formats is not None:
        out_over["formats"] = tuple(f.strip() for f in args.formats.split(",") if f.strip())
    if out_over:
        cfg = dataclasses.replace(cfg, output=OutputSpec(**{
            "dir": cfg.output.dir, "formats": cfg.output.formats, **out_over}))
    return cfg


def _merged_states(well: WellConfig, matching: MatchingParams) -> list[BoundState]:
    states = []
    for parity in ParitySector:
        states.extend(bound_state_energies(well, parity, matching.N,
                                           scan_points=matching.scan_points,
                                           tol=matching.tol))
    return sorted(states, key=lambda s: s.lam)


def _point_rows(well: WellConfig, matching: MatchingParams,
                sweep_value: float) -> list[SweepRow]:
    states = _merged_states(well, matching)
    if not states:
        return []
    E1_out = float(transversal_eigenvalues(well.outer, 1)[0])
    unit = (well.d / np.pi) ** 2
    gap1 = (states[1].lam - states[0].lam if len(states) >= 2
            else E1_out - states[0].lam)
    rows = []
    for i, s in enumerate(states, start=1):
        lo, hi = minimax_brackets(well, i)
        rows.append(SweepRow(sweep_value=sweep_value, sector=s.parity.value, n=i,
                             lam=s.lam, lam_pi2=s.lam * unit, sigma_min=s.sigma_min,
                             bracket_lo=lo, bracket_hi=hi, gap1=gap1))
    return rows


def _write_result(result: SweepResult, cfg: RunConfig, stem: str) -> list[str]:
    os.makedirs(cfg.output.dir, exist_ok=True)
    written = []
    for fmt in cfg.output.formats:
        path = os.path.join(cfg.output.dir, f"{stem}.{fmt}")
        if fmt == "csv":
            write_sweep_csv(result, path)
        elif fmt == "json":
            write_sweep_json(result, path)
        elif fmt == "svg":
            write_sweep_svg(result, path)
        written.append(path)
    return written


def _cmd_spectrum(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    rows = _point_rows(cfg.well, cfg.matching, cfg.well.a / cfg.well.d)
    result = SweepResult(rows=tuple(rows))
    written = _write_result(result, cfg, "spectrum")
    print(sweep_csv(result), end="")
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    if cfg.sweep is None:
        raise ConfigError("sweep requires a 'sweep' section in the config")
    rows: list[SweepRow] = []
    for v in cfg.sweep.values:
        if cfg.sweep.parameter == "a":
            well = dataclasses.replace(cfg.well, a=v * cfg.well.d)
            sweep_value = v
        else:
            a0, a1 = v
            well = dataclasses.replace(cfg.well, alpha0=a0, alpha1=a1)
            sweep_value = a0
        rows.extend(_point_rows(well, cfg.matching, sweep_value))
    rows.sort(key=lambda r: (r.sweep_value, r.lam))
    result = SweepResult(rows=tuple(rows))
    written = _write_result(result, cfg, f"sweep_{cfg.sweep.parameter}")
    print(f"{len(result.rows)} rows over {len(cfg.sweep.values)} sweep points")
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_wavefunction(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    states = _merged_states(cfg.well, cfg.matching)
    if args.ordinal < 1 or args.ordinal > len(states):
        raise NumericalError(
            f"no bound state with ordinal {args.ordinal}: found {len(states)}"
        )
    state = states[args.ordinal - 1]
    xmax = args.xmax if args.xmax is not None else cfg.well.a + 3.0 * cfg.well.d
    x = np.linspace(-xmax, xmax, args.nx)
    y = np.linspace(0.0, cfg.well.d, args.ny)
    grid = wavefunction(cfg.well, state, x, y)
    os.makedirs(cfg.output.dir, exist_ok=True)
    path = os.path.join(cfg.output.dir, f"wavefunction_{args.ordinal}.txt")
    write_wavefunction(grid, path)
    wy = np.trapezoid(grid.values**2, y, axis=1)
    moment = float(np.trapezoid(x**2 * wy, x))
    print(f"lambda={state.lam!r} parity={state.parity.value} x_second_moment={moment!r}")
    print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    oracle_over = {}
    if args.L is not None:
        oracle_over["L"] = args.L
    if args.refinements is not None:
        oracle_over["refinements"] = args.refinements
    if args.closure is not None:
        oracle_over["closure"] = args.closure
    spec = dataclasses.replace(cfg.oracle, **oracle_over) if oracle_over else cfg.oracle
    states = _merged_states(cfg.well, cfg.matching)
    ref = oracle_bound_states(cfg.well, spec.resolve_L(cfg.well.d),
                              spec.refinements, closure=spec.closure)
    lines = ["index,lambda_matching,lambda_oracle,abs_diff"]
    for i in range(max(len(states), len(ref))):
        lm = repr(states[i].lam) if i < len(states) else ""
        lo = repr(ref[i]) if i < len(ref) else ""
        diff = repr(abs(states[i].lam - ref[i])) if i < len(states) and i < len(ref) else ""
        lines.append(f"{i + 1},{lm},{lo},{diff}")
    table = "\n".join(lines) + "\n"
    os.makedirs(cfg.output.dir, exist_ok=True)
    path = os.path.join(cfg.output.dir, "oracle_compare.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(table)
    print(table, end="")
    print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_existence(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    bump = BumpProfile(plateau=args.plateau, support=args.support)
    report = existence_test(cfg.well, bump, args.n_max)
    payload = {
        "n_values": list(report.n_values),
        "q_values": list(report.q_values),
        "first_negative_n": report.first_negative_n,
        "well_hypothesis": report.well_hypothesis,
        "well": dataclasses.asdict(report.config),
    }
    os.makedirs(cfg.output.dir, exist_ok=True)
    path = os.path.join(cfg.output.dir, "existence.json")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    if not report.well_hypothesis:
        verdict = "hypothesis false (alpha1 >= alpha0): no claim"
    elif report.first_negative_n is None:
        verdict = f"inconclusive up to n_max={args.n_max}"
    else:
        verdict = f"bound state certified: Q < 0 at n={report.first_negative_n}"
    print(verdict)
    print(f"wrote {path}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robinstrip",
        description="Spectrum of the Robin strip with a rectangular coupling well",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="bound states at a single configuration")
    _add_common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("sweep", help="spectrum along a parameter family")
    _add_common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("wavefunction", help="sample one bound state on a grid")
    _add_common(p)
    p.add_argument("--ordinal", type=int, default=1,
                   help="1-based ordinal in the merged spectrum (default 1)")
    p.add_argument("--xmax", type=float, help="half-width of the x grid (default a + 3d)")
    p.add_argument("--nx", type=int, default=241)
    p.add_argument("--ny", type=int, default=81)
    p.set_defaults(func=_cmd_wavefunction)

    p = sub.add_parser("oracle", help="finite-difference cross-check")
    _add_common(p)
    p.add_argument("--L", type=float, help="override oracle.L")
    p.add_argument("--refinements", type=int, help="override oracle.refinements")
    p.add_argument("--closure", choices=("dirichlet", "neumann"),
                   help="override oracle.closure")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("existence", help="variational existence test")
    _add_common(p)
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--plateau", type=float, default=0.125)
    p.add_argument("--support", type=float, default=0.25)
    p.set_defaults(func=_cmd_existence)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ContractError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
