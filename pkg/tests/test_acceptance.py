"""Acceptance criteria 1-8, one test each, reporting a PASS/FAIL line per criterion.

The lines are printed immediately and collected again in the terminal summary.
"""

import time
import warnings

import numpy as np
import pytest

from casimirlab import (Constant, DrudeParams, Geometry, Layer, LayerStack, MtbParams,
                        Oscillator, QuadratureConfig, RoughnessProfile, SweepPlan, Tabulated,
                        Vacuum, analyze, corrected_force, effective_deltas, force_curve,
                        force_sphere_plate, ideal_metal_force, kk_transform, simulate_dataset)
from casimirlab.dielectric import sample_table
from casimirlab.stack import IntegrandPoint
from conftest import ACCEPTANCE_LINES, AU, IDEAL, PD, POLYSTYRENE, TI, coated_sphere
from oracles import explicit_two_film_deltas, random_layered_instance, transfer_matrix_deltas

R = 100e-6


def report(n, summary, checks):
    """Print and record the verdict, then fail with the broken checks listed."""
    failed = [name for name, ok in checks.items() if not ok]
    verdict = "FAIL" if failed else "PASS"
    line = f"{verdict} criterion {n}: {summary}"
    if failed:
        line += "  [failed: " + "; ".join(failed) + "]"
    print(line)
    ACCEPTANCE_LINES.append((n, line))
    assert not failed, line


def rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_1_ideal_metal_limit():
    sphere = plate = LayerStack(IDEAL)
    start = time.perf_counter()
    single = force_sphere_plate(sphere, plate, Vacuum(), Geometry(R, 100e-9))
    seps = np.geomspace(50e-9, 500e-9, 20)
    curve = force_curve(sphere, plate, Vacuum(), R, seps)
    elapsed = time.perf_counter() - start
    slope = np.polyfit(np.log(seps), np.log([-f for _, f in curve]), 1)[0]
    err = rel(abs(single), 2.723e-10)
    report(1, f"|F(100 nm)| = {abs(single):.4e} N (dev {err:.2%}), slope {slope:.4f}, "
              f"{elapsed:.1f} s", {
                  "force within 0.5% of 2.723e-10 N": err <= 5e-3,
                  "closed form within 0.5%": rel(abs(single), ideal_metal_force(R, 100e-9)) <= 5e-3,
                  "slope -3.00 +- 0.01": abs(slope + 3.0) <= 0.01,
                  "runtime < 10 s": elapsed < 10.0,
              })


def test_criterion_2_film_thickness_limits():
    quad = QuadratureConfig(rel_tol=1e-7)
    vanishing = []
    for bare, coated in [
        (LayerStack(POLYSTYRENE, (Layer(TI, 2.9e-9),)), coated_sphere(1e-18)),
        (LayerStack(POLYSTYRENE), coated_sphere(1e-18, t_adhesion=0)),
    ]:
        for d in (50e-9, 100e-9, 300e-9):
            geo = Geometry(R, d)
            f_bare = force_sphere_plate(bare, LayerStack(AU), Vacuum(), geo, quad)
            f_coat = force_sphere_plate(coated, LayerStack(AU), Vacuum(), geo, quad)
            vanishing.append(rel(f_coat, f_bare))
    seps = [50e-9, 100e-9, 200e-9, 300e-9]
    thick = [f for _, f in force_curve(coated_sphere(5e-7), LayerStack(AU), Vacuum(), R, seps)]
    thinner = [f for _, f in force_curve(coated_sphere(2e-7), LayerStack(AU), Vacuum(), R, seps)]
    saturation = max(rel(a, b) for a, b in zip(thick, thinner))
    report(2, f"1e-18 m coating max dev {max(vanishing):.1e}; 5000 vs 2000 A max dev "
              f"{saturation:.1e}", {
                  "vanishing coating within 1e-6": max(vanishing) <= 1e-6,
                  "5000 vs 2000 A within 0.5%": saturation <= 5e-3,
              })


def test_criterion_3_skin_depth_ordering():
    plate = LayerStack(AU)
    seps = np.linspace(50e-9, 300e-9, 6)
    thin = [abs(f) for _, f in force_curve(coated_sphere(10e-9, t_adhesion=0), plate, Vacuum(), R, seps)]
    thick = [abs(f) for _, f in force_curve(LayerStack(PD), plate, Vacuum(), R, seps)]
    ordered = all(a < b for a, b in zip(thin, thick))
    thicknesses = [0.0, 5e-9, 10e-9, 20e-9, 50e-9, 100e-9, 200e-9, 500e-9]
    monotone = True
    for d in (50e-9, 120e-9, 300e-9):
        geo = Geometry(R, d)
        forces = [abs(force_sphere_plate(coated_sphere(t, t_adhesion=0) if t else LayerStack(POLYSTYRENE),
                                         plate, Vacuum(), geo)) for t in thicknesses]
        monotone &= all(b >= a for a, b in zip(forces, forces[1:]))
    ratio = [a / b for a, b in zip(thin, thick)]
    report(3, f"|F_100A|/|F_bulk| from {min(ratio):.3f} to {max(ratio):.3f} over 50-300 nm", {
        "thin < thick at every d": ordered,
        "|F| non-decreasing in t": monotone,
    })


def test_criterion_4_kk_oracle():
    xi = np.geomspace(1e13, 1e17, 41)
    worst = {}
    drude = DrudeParams(1.371e16, 4.05e13)
    table = sample_table(drude.im_eps, 1e10, 1e20, 10_000, extrapolation="truncate")
    expected = 1.0 + drude.omega_p ** 2 / (xi * (xi + drude.gamma))
    worst["Drude"] = np.max(np.abs(kk_transform(table, xi) / expected - 1))
    for w0 in (1e15, 1e16):
        line = Oscillator(1.0, w0, 0.05 * w0)
        table = sample_table(line.im_eps, 1e10, 1e20, 10_000, extrapolation="truncate")
        expected = 1.0 + w0 ** 2 / (w0 ** 2 + xi ** 2 + 0.05 * w0 * xi)
        worst[f"Lorentz w0={w0:.0e}"] = np.max(np.abs(kk_transform(table, xi) / expected - 1))
    report(4, ", ".join(f"{k} max dev {v:.1e}" for k, v in worst.items()),
           {f"{k} within 0.1%": v <= 1e-3 for k, v in worst.items()})


def test_criterion_5_layered_delta_oracle():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        eps_gap, eps_sub, films, d, xi, p = random_layered_instance(rng)
        stack = LayerStack(Constant(eps_sub), tuple(Layer(Constant(e), t) for e, t in films))
        got = effective_deltas(stack, IntegrandPoint(xi, p, d, eps_gap))
        ref = transfer_matrix_deltas(eps_gap, eps_sub, films, xi, p)
        worst = max(worst, abs(got[0] - ref[0]), abs(got[1] - ref[1]))
    rng = np.random.default_rng(7)
    exact = True
    for _ in range(200):
        eps3 = rng.uniform(1.0, 2.0)
        eps1, eps4, eps5 = 10 ** rng.uniform(0, 5, size=3)
        t4, t5 = 10 ** rng.uniform(-9.5, -7, size=2)
        xi, p, d = 10 ** rng.uniform(12, 17), rng.uniform(1, 10), 10 ** rng.uniform(-8, -6)
        stack = LayerStack(Constant(eps1), (Layer(Constant(eps4), t4), Layer(Constant(eps5), t5)))
        got = effective_deltas(stack, IntegrandPoint(xi, p, d, eps3))
        exact &= tuple(got) == explicit_two_film_deltas(eps3, eps1, eps4, t4, eps5, t5, xi, p, d)
    report(5, f"transfer-matrix max |dDelta| {worst:.1e} over 1000 instances; two-film form "
              f"{'exact' if exact else 'differs'}", {
                  "oracle within 1e-10": worst < 1e-10,
                  "two-film exact": exact,
              })


def test_criterion_6_roughness():
    k = 2.7e-31

    def stub(d):
        return -k / np.asarray(d, dtype=float) ** 3

    flat = RoughnessProfile.flat()
    unchanged = all(corrected_force(stub, flat, flat, d) == stub(d) for d in (5e-8, 1e-7, 3e-7))
    two_bin = RoughnessProfile([-10e-9, 10e-9], [0.5, 0.5])
    factor = corrected_force(stub, two_bin, flat, 100e-9) / stub(100e-9)
    rng = np.random.default_rng(99)
    jensen = 0
    for _ in range(100):
        n = int(rng.integers(1, 5))
        half = rng.uniform(0.5e-9, 15e-9, n)
        w = rng.uniform(0.05, 1.0, n)
        sphere = RoughnessProfile(np.concatenate([-half, half]), np.concatenate([w, w]) / (2 * w.sum()))
        plate = RoughnessProfile([-3e-9, 0.0, 3e-9], [0.25, 0.5, 0.25]) if rng.random() < 0.5 else flat
        d = rng.uniform(60e-9, 300e-9)
        power = rng.uniform(2.0, 4.0)

        def law(x):
            return -k / np.asarray(x) ** power

        jensen += abs(corrected_force(law, sphere, plate, d)) > abs(law(d))
    report(6, f"flat unchanged={unchanged}, two-bin factor {factor:.6f}, Jensen {jensen}/100", {
        "flat profile exact": unchanged,
        "factor 1.0615 +- 1e-4": abs(factor - 1.0615) <= 1e-4,
        "Jensen on 100 profiles": jensen == 100,
    })


def test_criterion_7_pipeline_closure():
    d_pz = np.linspace(100e-9, 400e-9, 7)

    def law(d):
        return -ideal_metal_force(R, d)

    start = time.perf_counter()
    clean = MtbParams(noise_sigma_a=0.0)
    res = analyze(simulate_dataset(clean, SweepPlan(d_pz), law), R)
    force_dev = np.max(np.abs(res.f_c / ideal_metal_force(R, res.d) - 1))
    v0_dev = np.max(np.abs(res.v0_per_sweep - 0.2))

    noisy = MtbParams()  # 10 pN force resolution
    truth = ideal_metal_force(R, noisy.d0_true - d_pz[::-1])
    d0, forces = [], []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for seed in range(100):
            r = analyze(simulate_dataset(noisy, SweepPlan(d_pz, seed=seed), law), R)
            d0.append(r.d0)
            forces.append(r.f_c)
    elapsed = time.perf_counter() - start
    d0_bias = abs(np.mean(d0) - noisy.d0_true)
    d0_sd = np.std(d0)
    forces = np.array(forces)
    bias_in_sd = np.max(np.abs(forces.mean(axis=0) - truth) / forces.std(axis=0))
    report(7, f"noiseless d0/c1 dev {rel(res.d0, clean.d0_true):.0e}/{rel(res.c1, clean.c1_true):.0e}, "
              f"forces {force_dev:.1e}; noisy d0 bias {d0_bias * 1e9:.2f} nm sd {d0_sd * 1e9:.2f} nm, "
              f"force bias <= {bias_in_sd:.2f} sd; {elapsed:.1f} s", {
                  "d0 within 1e-10": rel(res.d0, clean.d0_true) <= 1e-10,
                  "c1 within 1e-10": rel(res.c1, clean.c1_true) <= 1e-10,
                  "V0 = 0.200 V": v0_dev <= 1e-9,
                  "forces within 0.1%": force_dev <= 1e-3,
                  "noisy d0 within 2 nm": d0_bias <= 2e-9 and d0_sd <= 2e-9,
                  "noisy forces unbiased within 1 sd": bias_in_sd <= 1.0,
                  "runtime < 30 s": elapsed < 30.0,
              })


def test_criterion_8_quadrature_robustness():
    rel_tol = 1e-6
    sets = {
        "ideal": (LayerStack(IDEAL), LayerStack(IDEAL), Vacuum()),
        "coated/Au": (coated_sphere(9.2e-9), LayerStack(AU), Vacuum()),
        "dielectric": (LayerStack(POLYSTYRENE), LayerStack(Constant(11.7)), Vacuum()),
    }
    scheme_dev, xmax_dev = 0.0, 0.0
    for stacks in sets.values():
        for d in (50e-9, 300e-9):
            geo = Geometry(R, d)
            a, b = (force_sphere_plate(*stacks, geo, QuadratureConfig(rel_tol, scheme=s))
                    for s in ("gauss_legendre_mapped", "tanh_sinh"))
            scheme_dev = max(scheme_dev, rel(b, a))
            # from the default 50 the shift is exactly zero, so 30 -> 60 is also checked
            c30, c60, c50, c100 = (force_sphere_plate(*stacks, geo, QuadratureConfig(rel_tol, x_max=x))
                                   for x in (30.0, 60.0, 50.0, 100.0))
            xmax_dev = max(xmax_dev, rel(c60, c30), rel(c100, c50))
    drude = DrudeParams(1.371e16, 4.05e13)
    tab = [force_sphere_plate(coated_sphere(9.2e-9), LayerStack(Tabulated(
               sample_table(drude.im_eps, 1e10, 1e20, n, extrapolation="truncate"))),
               Vacuum(), Geometry(R, 100e-9), QuadratureConfig(rel_tol)) for n in (5000, 10_000)]
    table_dev = rel(tab[1], tab[0])
    report(8, f"scheme dev {scheme_dev:.1e}, x_max doubling {xmax_dev:.1e}, table doubling "
              f"{table_dev:.1e} (rel_tol {rel_tol:.0e})", {
                  "schemes within 3 rel_tol": scheme_dev <= 3 * rel_tol,
                  "x_max doubling below rel_tol": xmax_dev < rel_tol,
                  "table doubling below rel_tol": table_dev < rel_tol,
              })
