"""Evaluate models over a parameter grid and emit deterministic tables."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import coeffs, moments
from .config import SweepConfig
from .errors import CoolingError, DimensionOverflow, NoConvergence
from .liouville import (build_full_liouvillian, build_reduced_liouvillian,
                        build_secular_liouvillian, default_fock, fock_for_moments, moments_of,
                        steady_density, truncation_check)
from .liouville.operators import FockConfig
from .params import SystemParams

COLUMNS = ("sweep_var", "model", "naa", "nbb", "re_nab", "im_nab", "status")
NAN = float("nan")


@dataclass(frozen=True)
class Row:
    sweep_var: float
    model: str
    naa: float
    nbb: float
    re_nab: float
    im_nab: float
    status: str

    def as_tuple(self):
        return tuple(getattr(self, c) for c in COLUMNS)


def _validity_flag(p: SystemParams) -> str:
    try:
        return "secular" if coeffs.secular_validity_report(p).secular else "nonsecular"
    except CoolingError:
        return "nonsecular"


def _oracle_fock(p: SystemParams, fock: FockConfig | None, model: str, convention: str):
    if fock is not None:
        return fock
    if model == "full-oracle":
        return default_fock(p)
    # size the truncation from the moment prediction of the same model
    if model == "reduced-oracle":
        guess = moments.steady_state(moments.build_generator(
            coeffs.rate_coefficients(p, cross_convention=convention), p))
    else:
        s = coeffs.secular_coefficients(p)
        guess = moments.steady_state(moments.secular_moment_generator(s, p))
    return fock_for_moments(guess.naa, guess.nbb)


def evaluate(p: SystemParams, model: str, fock: FockConfig | None = None,
             convention: str = "conjugate") -> tuple[moments.MomentState, list[str]]:
    """Steady-state moments of one model at one parameter point, plus status flags."""
    flags = []
    if model == "moments":
        r = coeffs.rate_coefficients(p, cross_convention=convention)
        state = moments.steady_state(moments.build_generator(r, p))
        flags.append("stable")
    elif model == "secular":
        s = coeffs.secular_coefficients(p)
        state = moments.steady_state(moments.secular_moment_generator(s, p))
        flags.append("stable")
    elif model in ("reduced-oracle", "secular-oracle", "full-oracle"):
        f = _oracle_fock(p, fock, model, convention)
        if model == "full-oracle":
            L = build_full_liouvillian(p, f)
        elif model == "reduced-oracle":
            L = build_reduced_liouvillian(coeffs.rate_coefficients(p, cross_convention=convention),
                                          p, f)
        else:
            L = build_secular_liouvillian(coeffs.secular_coefficients(p), p, f)
        rho = steady_density(L)
        state = moments_of(rho)
        tc = truncation_check(rho, f)
        flags.append("stable")
        flags.append("trunc-pass" if tc.passed else "trunc-fail")
    else:
        raise ValueError(f"unknown model {model!r}")
    flags.append(_validity_flag(p))
    return state, flags


def _point(args) -> list[Row]:
    cfg, value = args
    p = cfg.point(value)
    rows = []
    for model in cfg.models:
        try:
            state, flags = evaluate(p, model, cfg.fock, cfg.cross_convention)
            rows.append(Row(float(value), model, state.naa, state.nbb, state.nab.real,
                            state.nab.imag, ";".join(flags)))
        except (CoolingError, DimensionOverflow, NoConvergence, ValueError) as exc:
            rows.append(Row(float(value), model, NAN, NAN, NAN, NAN, type(exc).__name__))
    return rows


def run_sweep(cfg: SweepConfig, workers: int = 1) -> list[Row]:
    """Rows in grid order, one per (grid point, model)."""
    jobs = [(cfg, v) for v in cfg.grid()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_point, jobs))
    else:
        chunks = [_point(job) for job in jobs]
    return [row for chunk in chunks for row in chunk]


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value + 0.0)
    return str(value)


def format_rows(rows, fmt: str = "csv") -> str:
    if fmt == "json":
        data = [{c: (None if isinstance(v, float) and math.isnan(v) else v)
                 for c, v in zip(COLUMNS, row.as_tuple())} for row in rows]
        return json.dumps(data, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_fmt(v) for v in row.as_tuple()])
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))
