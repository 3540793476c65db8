"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion."""
import time

import numpy as np
import pytest

from phonon_cooling.cli import main
from phonon_cooling.coeffs import SecularCoefficients, rate_coefficients, secular_coefficients
from phonon_cooling.config import fig23_preset
from phonon_cooling.liouville import (DensityOperator, FockConfig, build_full_liouvillian,
                                      build_reduced_liouvillian, build_secular_liouvillian,
                                      evolve_density, fock_for_moments, moments_of,
                                      steady_density, truncation_check)
from phonon_cooling.moments import (MomentState, build_generator, evolve, matched_detuning,
                                    secular_steady_state, steady_state)
from phonon_cooling.params import SystemParams, fig2_params
from phonon_cooling.sweep import run_sweep

import oracles


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} [{number}] {title}: {detail}")
        assert ok, detail
    return emit


def random_secular_inputs(n=1000, seed=2024):
    rng = np.random.default_rng(seed)
    ka = 10 ** rng.uniform(-4, 0, n)
    kb = 10 ** rng.uniform(-4, 0, n)
    eta = rng.choice([-1, 1], n) * 10 ** rng.uniform(-4, 0, n)
    nbar = rng.uniform(0, 100, n)
    # a few single-lossless and exchange-free cases
    ka[:20] = 0.0
    kb[20:40] = 0.0
    eta[40:60] = 0.0
    return ka, kb, eta, nbar


def secular_batch(ka, kb, eta, nbar):
    out = []
    for a, b, e, n in zip(ka, kb, eta, nbar):
        p = fig2_params(nbar=n).replace(kappa_a=a, kappa_b=b)
        out.append(secular_steady_state(SecularCoefficients(e, 0.0, 0.0), p))
    return out


def relative_error(x, ref):
    if ref == 0:
        return 0.0 if x == 0 else np.inf
    return abs(x - ref) / abs(ref)


def test_criterion_1_conservation(report):
    t0 = time.perf_counter()
    ka, kb, eta, nbar = random_secular_inputs()
    states = secular_batch(ka, kb, eta, nbar)
    err = max(relative_error(a * s.naa + b * s.nbb, b * n)
              for a, b, n, s in zip(ka, kb, nbar, states))
    dt = time.perf_counter() - t0
    report(1, "conservation identity", err <= 1e-12 and dt < 1.0,
           f"max rel err {err:.2e} over 1000 sets, {dt:.2f} s")


def test_criterion_2_closed_form_ratio(report):
    t0 = time.perf_counter()
    ka, kb, eta, nbar = random_secular_inputs()
    states = secular_batch(ka, kb, eta, nbar)
    err = max(relative_error(s.nbb, s.naa * (1 + a * (a + b) / e ** 2))
              for a, b, e, s in zip(ka, kb, eta, states) if e != 0)
    dt = time.perf_counter() - t0
    report(2, "closed-form ratio", err <= 1e-12 and dt < 1.0,
           f"max rel err {err:.2e}, {dt:.2f} s")


def test_criterion_3_trivial_limits(report):
    t0 = time.perf_counter()
    p = fig2_params(nbar=10)
    s = secular_steady_state(SecularCoefficients(0.0, 0.0, 0.0), p)
    exact = (s.naa, s.nbb) == (0.0, 10.0)
    q = p.replace(g=0.0, lam=0.0)
    m = steady_state(build_generator(rate_coefficients(q), q))
    err = max(abs(m.naa), abs(m.nbb - 10.0), abs(m.nab), abs(m.nba))
    dt = time.perf_counter() - t0
    report(3, "trivial limits", exact and err <= 1e-12 and dt < 1.0,
           f"eta=0 exact: {exact}; g=lambda=0 max dev {err:.1e}, {dt:.2f} s")


def test_criterion_4_cooling_limit(report):
    t0 = time.perf_counter()
    p = fig2_params(nbar=10).replace(kappa_a=0.01, kappa_b=0.001)
    s = secular_steady_state(SecularCoefficients(0.1, 0.0, 0.0), p)
    target = p.kappa_b / p.kappa_a * p.nbar
    within = abs(s.naa / target - 1) <= 0.05 and abs(s.nbb / target - 1) <= 0.05
    below = all(secular_steady_state(SecularCoefficients(0.1, 0.0, 0.0), p.replace(nbar=n)).nbb
                < 1 for n in np.linspace(0, 9, 91))
    dt = time.perf_counter() - t0
    report(4, "cooling limit", within and below and dt < 1.0,
           f"naa={s.naa:.4f} nbb={s.nbb:.4f} vs {target:.1f} (5% window: {within}); "
           f"nbb<1 for nbar<=9: {below}, {dt:.2f} s")


def test_criterion_5_moment_closure(report):
    t0 = time.perf_counter()
    cfg = fig23_preset(10.0)
    grid = cfg.grid()
    worst, trunc_ok = 0.0, True
    for value in grid[[0, 75, 150, 225, 300]]:
        p = cfg.point(value)
        r = rate_coefficients(p)
        ref = steady_state(build_generator(r, p))
        # a 1e-8 top-level tail still shifts <b^+b> ~ 8e-7 at nbar = 10
        f = fock_for_moments(ref.naa, ref.nbb, tail_tol=1e-9, cap=200)
        rho = steady_density(build_reduced_liouvillian(r, p, f))
        trunc_ok &= truncation_check(rho, f).passed
        m = moments_of(rho)
        worst = max(worst, relative_error(m.naa, ref.naa), relative_error(m.nbb, ref.nbb))
    # time-dependent version from the uncoupled thermal state, nbar = 2
    p = fig23_preset(2.0).point(-50.0)
    r = rate_coefficients(p)
    gm = build_generator(r, p)
    times = np.linspace(0.0, 300.0, 20)
    guess = evolve(gm, MomentState(0.0, 2.0, 0j, 0j), times)
    f = fock_for_moments(max(v.naa for v in guess), max(v.nbb for v in guess))
    na, nb = f.n_photon_max + 1, f.n_phonon_max + 1
    rho0 = np.zeros((na * nb, na * nb))
    rho0[np.arange(nb), np.arange(nb)] = oracles.bose_einstein(2.0, nb - 1)
    traj = evolve_density(build_reduced_liouvillian(r, p, f), DensityOperator((na, nb), rho0),
                          times)
    ref = evolve(gm, MomentState(0.0, moments_of(traj[0]).nbb, 0j, 0j), times)
    worst_t = max(max(relative_error(moments_of(rho).naa, v.naa) if v.naa > 1e-9 else 0.0,
                      relative_error(moments_of(rho).nbb, v.nbb))
                  for rho, v in zip(traj, ref))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-6 and worst_t <= 1e-6 and trunc_ok and dt < 120
    report(5, "moment-closure equivalence", ok,
           f"steady max rel {worst:.1e} (truncation {'pass' if trunc_ok else 'fail'}), "
           f"trajectory max rel {worst_t:.1e}, {dt:.1f} s")


def test_criterion_6_secular_oracle(report):
    t0 = time.perf_counter()
    p0 = fig23_preset(10.0).base
    s = secular_coefficients(p0)
    p = p0.replace(Delta1=matched_detuning(p0, s))
    ref = secular_steady_state(s, p)
    f = fock_for_moments(ref.naa, ref.nbb)
    m = moments_of(steady_density(build_secular_liouvillian(s, p, f)))
    err = max(relative_error(m.naa, ref.naa), relative_error(m.nbb, ref.nbb))
    dt = time.perf_counter() - t0
    report(6, "secular-oracle equivalence", err <= 1e-6 and dt < 30,
           f"max rel {err:.1e}, {dt:.1f} s")


def count_interior_extrema(y):
    inner = y[1:-1]
    maxima = np.sum((inner > y[:-2]) & (inner >= y[2:]))
    minima = np.sum((inner < y[:-2]) & (inner <= y[2:]))
    return int(maxima), int(minima)


def test_criterion_7_figure_shape(report):
    t0 = time.perf_counter()
    lines, ok, peaks = [], True, []
    for nbar in (2.0, 4.0, 10.0):
        cfg = fig23_preset(nbar).replace(models=("moments",))
        rows = run_sweep(cfg)
        x = np.array([r.sweep_var for r in rows])
        naa = np.array([r.naa for r in rows])
        nbb = np.array([r.nbb for r in rows])
        n_max, _ = count_interior_extrema(naa)
        _, n_min = count_interior_extrema(nbb)
        centre = matched_detuning(cfg.base, secular_coefficients(cfg.base))
        x_max, x_min = x[np.argmax(naa)], x[np.argmin(nbb)]
        ok &= n_max == 1 and n_min == 1
        ok &= abs(x_max - centre) <= 5 and abs(x_min - centre) <= 5
        ok &= 0 < nbb.min() < nbar
        peaks.append(naa.max())
        lines.append(f"nbar={nbar:g}: peak naa {naa.max():.4f} at {x_max:.1f}, "
                     f"min nbb {nbb.min():.4f} at {x_min:.1f}, offset {x_max - x_min:+.1f}")
    ok &= bool(np.all(np.diff(peaks) > 0))
    dt = time.perf_counter() - t0
    ok &= dt < 10
    report(7, "figure shape", ok, "; ".join(lines) + f"; {dt:.1f} s")


def test_criterion_8_full_model(report):
    t0 = time.perf_counter()
    p0 = fig23_preset(2.0).base
    p = p0.replace(Delta1=matched_detuning(p0, secular_coefficients(p0)))
    f = FockConfig(6, 40)
    rho = steady_density(build_full_liouvillian(p, f))
    checks = rho.check()
    m = moments_of(rho)
    reduced = steady_state(build_generator(rate_coefficients(p), p))
    tc = truncation_check(rho, f)
    dt = time.perf_counter() - t0
    ok = checks["valid"] and m.nbb < p.nbar and dt < 600
    report(8, "full-model validation", ok,
           f"unique steady state; herm {checks['hermiticity_error']:.1e}, "
           f"trace {checks['trace_error']:.1e}, min eig {checks['min_eigenvalue']:.1e}; "
           f"nbb={m.nbb:.4f} < {p.nbar:g}; naa={m.naa:.4f}; reduced nbb={reduced.nbb:.4f} "
           f"(gap {m.nbb - reduced.nbb:+.4f}); tails photon {tc.photon_tail:.1e} "
           f"phonon {tc.phonon_tail:.1e}; {dt:.0f} s")


def test_criterion_9_detailed_balance(report):
    t0 = time.perf_counter()
    p = SystemParams(gamma=1.0, gamma_c=0.3, kappa_a=0.01, kappa_b=0.001, Omega=0.0,
                     Delta=50.0, Delta1=-50.0, omega=50.0, nbar=2.0)
    f = FockConfig(2, 46)
    rho = steady_density(build_full_liouvillian(p, f))
    _, pb = rho.populations()
    q = 2.0 / 3.0
    err = np.max(np.abs(pb - (1 - q) * q ** np.arange(len(pb))))
    converged = truncation_check(rho, f).passed
    dt = time.perf_counter() - t0
    report(9, "thermal detailed balance", err <= 1e-6 and converged and dt < 10,
           f"max level dev {err:.1e}, truncation {'pass' if converged else 'fail'}, {dt:.1f} s")


def test_criterion_10_determinism(report, tmp_path):
    t0 = time.perf_counter()
    outs = []
    for name in ("first.csv", "second.csv"):
        path = tmp_path / name
        code = main(["sweep", "--out", str(path)])
        outs.append((code, path.read_bytes()))
    dt = time.perf_counter() - t0
    ok = outs[0][0] == outs[1][0] == 0 and outs[0][1] == outs[1][1] and dt < 20
    report(10, "deterministic sweep output", ok,
           f"{len(outs[0][1])} bytes, identical: {outs[0][1] == outs[1][1]}, {dt:.1f} s")
