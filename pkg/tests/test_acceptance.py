"""Acceptance suite: one test per release criterion, one printed line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS lines.
"""

import subprocess
import sys

import numpy as np
import pytest

from kdsim import (
    DiffractionGeometry,
    ElectronDistribution,
    add_noise,
    build_model,
    diffraction_geometry,
    electron_kinematics,
    ensemble_populations,
    extract_populations,
    fit_beta_max,
    phase_grating_oracle,
    photon_params,
    population_sweep,
    rms_width,
    sideband_populations,
    standing_wave,
    symmetric_grid,
    synthesize_pattern,
    truncation_rule,
)

from conftest import SCENARIO_DIR, field_with_beta, make_scenario
from oracles import beta_closed_form, first_j1_zero


def report(criterion, text):
    print(f"ACCEPTANCE {criterion}: PASS - {text}")


def test_criterion_1_geometry_reproduction():
    ek = electron_kinematics(20e3)
    ph = photon_params(1030e-9)
    geom = diffraction_geometry(ek, ph, 12e-3, 70e-9, 20e-9)
    assert geom.order_angle == pytest.approx(1.73e-5, rel=0.04)
    assert geom.order_separation == pytest.approx(208e-9, rel=0.04)
    report(
        1,
        f"delta = {geom.order_angle:.4e} rad vs 1.73e-5 (4%), "
        f"dx = {geom.order_separation * 1e9:.1f} nm vs 208 nm (4%)",
    )


def test_criterion_2_unitarity():
    for beta in (0.0, 0.5, 1.8, 3.83, 9.0, 20.0):
        total = sideband_populations(beta).populations.sum()
        assert abs(total - 1.0) < 1e-12, f"single-beta sum off at beta={beta}"

    rng = np.random.default_rng(20250810)
    worst = 0.0
    for _ in range(10):
        energy = rng.uniform(5e3, 60e3)
        ek = electron_kinematics(energy)
        ph = photon_params(rng.uniform(500e-9, 2000e-9))
        wave = standing_wave(
            ph,
            rng.uniform(5e-6, 20e-6),
            rng.uniform(100e-15, 800e-15),
            rng.uniform(100e-15, 800e-15),
            1e6,
            avg_power=1.0,
        )
        field = field_with_beta(ek, wave, rng.uniform(0.1, 6.0))
        dist = ElectronDistribution(
            sigma_x=rng.uniform(0.5e-6, 30e-6),
            sigma_y=rng.uniform(0.5e-6, 30e-6),
            temporal_fwhm=rng.uniform(50e-15, 1200e-15),
            arrival_offset=rng.uniform(-200e-15, 200e-15),
        )
        total = ensemble_populations(field, dist).populations.sum()
        worst = max(worst, abs(total - 1.0))
    assert worst < 1e-9
    report(2, f"single-beta sums exact to 1e-12; worst ensemble deviation {worst:.2e}")


def test_criterion_3_oracle_equivalence(electron20, wave220):
    worst_pop = 0.0
    for beta in np.linspace(0.0, 10.0, 21):
        n = truncation_rule(beta)
        fft_route = phase_grating_oracle(beta, 2048, n)
        analytic = sideband_populations(beta, n)
        worst_pop = max(
            worst_pop, float(np.max(np.abs(fft_route.populations - analytic.populations)))
        )
    assert worst_pop < 1e-8

    from kdsim import beta_at, coupling_params

    params = coupling_params(electron20, wave220)
    worst_beta = 0.0
    for x in np.linspace(-5e-6, 5e-6, 5):
        for y in np.linspace(-12e-6, 12e-6, 5):
            for tau in np.linspace(-400e-15, 400e-15, 5):
                got = beta_at(x, y, tau, params)
                want = beta_closed_form(y, tau, electron20, wave220)
                worst_beta = max(worst_beta, abs(got - want) / want)
    assert worst_beta < 1e-8
    report(
        3,
        f"FFT vs analytic populations within {worst_pop:.2e}; "
        f"quadrature vs closed form within {worst_beta:.2e} over 5x5x5 grid",
    )


def test_criterion_4_coherent_regime(coherent_setup):
    field, dist = coherent_setup
    betas = np.linspace(0.0, 4.52, 24)
    sweep = population_sweep(field, dist, betas)
    p1 = np.array([s.population(1) for s in sweep])
    rising = np.diff(p1) > 0
    assert rising.any() and (~rising).any(), "P1 should be non-monotone"
    interior_max = [
        i for i in range(1, len(p1) - 1) if p1[i] > p1[i - 1] and p1[i] > p1[i + 1]
    ]
    assert len(interior_max) == 1, f"expected one interior maximum, got {interior_max}"

    # delta-distribution limit: the oscillation minimum sits at the first
    # zero of J_1, located independently on the series oracle
    w0 = field.params.wave.waist
    t_c = field.params.wave.cross_temporal_fwhm
    delta_dist = ElectronDistribution(1e-6 * w0, 1e-6 * w0, 1e-6 * t_c)
    fine = np.arange(3.3, 4.35, 0.01)
    p1_fine = np.array(
        [s.population(1) for s in population_sweep(field, delta_dist, fine)]
    )
    mins = [
        i
        for i in range(1, len(fine) - 1)
        if p1_fine[i] < p1_fine[i - 1] and p1_fine[i] < p1_fine[i + 1]
    ]
    assert len(mins) == 1
    located = fine[mins[0]]
    want = first_j1_zero()
    assert abs(located - want) <= 0.05
    report(
        4,
        f"P1 has a single interior max at beta = {betas[interior_max[0]]:.2f}; "
        f"delta-limit minimum at {located:.3f} vs J1 zero {want:.4f}",
    )


def test_criterion_5_incoherent_regime(incoherent_setup):
    field, dist = incoherent_setup
    assert dist.temporal_fwhm == pytest.approx(
        3.0 * field.params.wave.cross_temporal_fwhm
    )
    betas = np.array([0.0, 1.8, 3.6, 5.4, 7.2, 9.0])
    sweep = population_sweep(field, dist, betas)
    geometry = DiffractionGeometry(
        grating_to_focus=12e-3,
        order_angle=208e-9 / 12e-3,
        order_separation=208e-9,
        slit_width=70e-9,
        spot_fwhm=20e-9,
    )
    grid = symmetric_grid(geometry, sweep[0].max_order)
    widths = [rms_width(synthesize_pattern(s, geometry, grid)) for s in sweep]
    assert all(a <= b + 1e-15 for a, b in zip(widths, widths[1:])), widths

    p1 = [s.population(1) for s in sweep]
    local_min = [
        i for i in range(1, len(p1) - 1) if p1[i] < p1[i - 1] and p1[i] < p1[i + 1]
    ]
    assert local_min == [], f"P1 oscillation minimum at beta={betas[local_min]}"
    report(
        5,
        "RMS widths nondecreasing "
        + " -> ".join(f"{w * 1e9:.0f}nm" for w in widths)
        + "; no P1 minimum",
    )


def test_criterion_6_round_trip_extraction():
    geometry = DiffractionGeometry(
        grating_to_focus=12e-3,
        order_angle=208e-9 / 12e-3,
        order_separation=208e-9,
        slit_width=70e-9,
        spot_fwhm=20e-9,
    )
    worst = 0.0
    for beta in (0.5, 1.8, 3.6, 4.52, 5.0):
        spectrum = sideband_populations(beta)
        pattern = synthesize_pattern(
            spectrum, geometry, symmetric_grid(geometry, spectrum.max_order)
        )
        got = extract_populations(pattern, geometry, 8)
        for n in range(0, 9):
            want = spectrum.population(n)
            tol = 0.01 * max(want, 1e-2)
            assert abs(got[n] - want) <= tol, (beta, n, got[n], want)
            if want > 1e-4:
                worst = max(worst, abs(got[n] - want) / want)
    assert worst < 0.01
    report(6, f"extraction error <= {worst:.2e} relative per order for beta <= 5")


def test_criterion_7_fit_recovery():
    model = build_model(make_scenario(beta_max=4.52))
    results = {}
    for beta in (1.61, 2.58, 3.55, 4.52):
        gen = build_model(make_scenario(beta_max=float(beta)))
        spectrum = ensemble_populations(gen.field, gen.distribution, gen.max_order)
        clean = synthesize_pattern(
            spectrum, gen.geometry, gen.grid_for_beta(model.field.beta_max)
        )
        hits = 0
        for seed in range(20):
            observed = add_noise(clean, 0.01, seed)
            fit = fit_beta_max(observed, model, bounds=(0.0, 6.0))
            if abs(fit.estimates["beta_max"] - beta) <= 0.02 * beta:
                hits += 1
        results[beta] = hits
        assert hits >= 19, f"beta={beta}: only {hits}/20 within 2%"
    report(
        7,
        "recovery within 2%: "
        + ", ".join(f"beta={b}: {h}/20" for b, h in results.items()),
    )


def test_criterion_8_cli_determinism(tmp_path):
    scenario = str(SCENARIO_DIR / "coherent.ini")
    outputs = []
    for tag in ("x", "y"):
        out = tmp_path / tag
        pattern = subprocess.run(
            [
                sys.executable, "-m", "kdsim", "pattern",
                "--scenario", scenario, "--out", str(out),
                "--noise", "0.01", "--seed", "31",
            ],
            capture_output=True, text=True, timeout=300,
        )
        assert pattern.returncode == 0, pattern.stderr
        pops = subprocess.run(
            [
                sys.executable, "-m", "kdsim", "populations",
                "--scenario", scenario, "--betas", "0:4.52:5", "--out", str(out),
            ],
            capture_output=True, text=True, timeout=300,
        )
        assert pops.returncode == 0, pops.stderr
        outputs.append(out)
    compared = []
    for name in ("pattern.csv", "pattern.png", "populations.csv", "populations.png"):
        a = (outputs[0] / name).read_bytes()
        b = (outputs[1] / name).read_bytes()
        assert a == b, f"{name} differs between identical runs"
        compared.append(name)
    report(8, "byte-identical outputs: " + ", ".join(compared))
