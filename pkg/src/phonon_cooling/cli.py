"""Command-line entry point: coefficient tables, single points, sweeps and oracles."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import coeffs, moments
from .config import (FORMATS, SweepConfig, dump_text, fig23_preset, load_config,
                     parse_models)
from .errors import ConfigError, CoolingError
from .liouville.operators import FockConfig
from .params import SystemParams, derive_dressed
from .sweep import COLUMNS, Row, _point, format_rows, run_sweep


def _g(x: float) -> str:
    return f"{x + 0.0:.12g}"


def coeffs_report(p: SystemParams, cross_convention: str = "conjugate") -> str:
    """Dressed quantities, rate and secular coefficients, validity ratios (units of gamma)."""
    d = derive_dressed(p)
    lines = ["# dressed"]
    for name, value in vars(d).items():
        lines.append(f"{name} {_g(value)}")
    lines.append("# rates (re im)")
    r = coeffs.rate_coefficients(p, d, cross_convention=cross_convention)
    for name, value in r.as_dict().items():
        lines.append(f"{name} {_g(value.real)} {_g(value.imag)}")
    lines.append("# secular")
    try:
        s = coeffs.secular_coefficients(p, d)
        for name in ("eta", "delta_a", "delta_b"):
            lines.append(f"{name} {_g(getattr(s, name))}")
    except CoolingError as exc:
        lines.append(f"error {type(exc).__name__}")
    lines.append("# validity")
    v = coeffs.secular_validity_report(p, d)
    for name, value in v.ratios.items():
        lines.append(f"{name} {_g(value)}")
    lines.append(f"secular {'yes' if v.secular else 'no'}")
    return "\n".join(lines) + "\n"


def _base_config(args, default_models=None) -> SweepConfig:
    cfg = load_config(args.config) if args.config else fig23_preset()
    if getattr(args, "nbar", None) is not None:
        cfg = cfg.replace(base=cfg.base.replace(nbar=args.nbar))
    if getattr(args, "models", None):
        cfg = cfg.replace(models=parse_models(args.models))
    elif default_models:
        cfg = cfg.replace(models=default_models)
    if getattr(args, "format", None):
        cfg = cfg.replace(format=args.format)
    if getattr(args, "out", None):
        cfg = cfg.replace(output_path=args.out)
    na, nb = getattr(args, "n_photon", None), getattr(args, "n_phonon", None)
    if na is not None or nb is not None:
        f = cfg.fock or FockConfig()
        cfg = cfg.replace(fock=FockConfig(na if na is not None else f.n_photon_max,
                                          nb if nb is not None else f.n_phonon_max,
                                          f.tail_tol))
    return cfg


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_coeffs(args):
    cfg = _base_config(args)
    _emit(coeffs_report(cfg.base, cfg.cross_convention), args.out)


def _single(cfg: SweepConfig) -> list[Row]:
    value = getattr(cfg.base, "lam" if cfg.sweep_variable == "lambda" else cfg.sweep_variable)
    return _point((cfg, value))


def cmd_steady(args):
    cfg = _base_config(args, ("moments", "secular"))
    _emit(format_rows(_single(cfg), cfg.format), cfg.output_path)


def cmd_oracle(args):
    cfg = _base_config(args, ("reduced-oracle",))
    _emit(format_rows(_single(cfg), cfg.format), cfg.output_path)


def cmd_sweep(args):
    cfg = _base_config(args)
    rows = run_sweep(cfg, workers=args.workers)
    _emit(format_rows(rows, cfg.format), cfg.output_path)


def cmd_evolve(args):
    """Moment trajectories from the uncoupled thermal state."""
    cfg = _base_config(args, ("moments",))
    p = cfg.base
    times = np.linspace(0.0, args.t_final, args.steps + 1)
    v0 = moments.MomentState(0.0, p.nbar, 0j, 0j)
    model = cfg.models[0]
    if model == "moments":
        r = coeffs.rate_coefficients(p, cross_convention=cfg.cross_convention)
        gm = moments.build_generator(r, p)
    elif model == "secular":
        gm = moments.secular_moment_generator(coeffs.secular_coefficients(p), p)
    else:
        raise ConfigError("evolve supports the moments and secular models")
    traj = moments.evolve(gm, v0, times)
    rows = [Row(float(t), model, s.naa, s.nbb, s.nab.real, s.nab.imag, "ok")
            for t, s in zip(times, traj)]
    text = format_rows(rows, cfg.format)
    if cfg.format == "csv":
        text = text.replace(COLUMNS[0], "t", 1)
    _emit(text, cfg.output_path)


def cmd_preset(args):
    cfg = fig23_preset(args.nbar if args.nbar is not None else 10.0)
    if args.run:
        if args.models:
            cfg = cfg.replace(models=parse_models(args.models))
        rows = run_sweep(cfg, workers=args.workers)
        _emit(format_rows(rows, args.format or "csv"), args.out)
    else:
        _emit(dump_text(cfg), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phonon-cooling",
                                     description="Resonator cooling via a driven quantum dot in a cavity.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, models=True):
        sp.add_argument("--config", help="key = value or .json config file")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--format", choices=FORMATS)
        sp.add_argument("--nbar", type=float, help="override thermal occupation")
        if models:
            sp.add_argument("--models", help="comma-separated model list")
        sp.add_argument("--n-photon", type=int, help="photon truncation for oracles")
        sp.add_argument("--n-phonon", type=int, help="phonon truncation for oracles")

    sp = sub.add_parser("coeffs", help="print dressed and rate coefficients")
    common(sp, models=False)
    sp.set_defaults(func=cmd_coeffs)

    sp = sub.add_parser("steady", help="steady-state moments at the base point")
    common(sp)
    sp.set_defaults(func=cmd_steady)

    sp = sub.add_parser("evolve", help="moment trajectory from the uncoupled thermal state")
    common(sp)
    sp.add_argument("--t-final", type=float, default=1000.0)
    sp.add_argument("--steps", type=int, default=100)
    sp.set_defaults(func=cmd_evolve)

    sp = sub.add_parser("sweep", help="sweep one parameter (default: fig23 preset)")
    common(sp)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("oracle", help="density-matrix oracle at the base point")
    common(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("preset", help="write or run a named preset")
    sp.add_argument("name", choices=["fig23"])
    sp.add_argument("--nbar", type=float)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=FORMATS)
    sp.add_argument("--models")
    sp.add_argument("--run", action="store_true", help="run the sweep instead of printing it")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_preset)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CoolingError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
