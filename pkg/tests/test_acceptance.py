"""Acceptance gate: one test per release criterion, at the stated tolerance.

Each test prints a single pass/fail line under ``pytest -v``. The sweep
covers bits 1..8 and oversampling 1..4 on the benchmark plant unless a
criterion narrows it.
"""

import math
import time

import numpy as np
import pytest

from efq.design import (
    DesignProblem,
    QuantizerSpec,
    db,
    design_for_nu,
    design_mse,
    gamma_from_bits,
    geomean_amplitude,
    optimal_shaper,
    rd_curve,
    solve_min_mse,
    upper_bound,
)
from efq.fitting import (
    FIRFilter,
    as_discrete_tf,
    complete_report,
    evaluate_fit,
    gram_autocorrelations,
    norm_constrained_fir,
    yule_walker_fit,
)
from efq.simulate import (
    MidRiseQuantizer,
    SignalModel,
    discretize_plant,
    gen_input,
    loop_identity_residual,
    predicted_loop_variances,
    run_feedback_loop,
    summarize_run,
)
from efq.spectral import (
    AmplitudeResponse,
    FrequencyGrid,
    amplitude_of_tf,
    constant_response,
    ct_frequency_map,
    oversample_response,
)
from efq.transfer import RationalDiscreteTF

SWEEP_BITS = tuple(range(1, 9))
SWEEP_LAMBDAS = tuple(range(1, 5))
LOADING_FACTOR = 4.0


@pytest.fixture(scope="module")
def sweep(p_base):
    """Solve all 32 (bits, oversampling) cells once; record wall time."""
    start = time.perf_counter()
    cells = {}
    for bits in SWEEP_BITS:
        gamma = gamma_from_bits(bits, LOADING_FACTOR)
        for lam in SWEEP_LAMBDAS:
            prob = DesignProblem(p=oversample_response(p_base, lam), gamma=gamma)
            cells[(bits, lam)] = (prob, solve_min_mse(prob))
    elapsed = time.perf_counter() - start
    return cells, elapsed


def test_01_optimality_root_residual_all_cells_under_ten_seconds(sweep):
    cells, elapsed = sweep
    worst = 0.0
    for (bits, lam), (prob, sol) in cells.items():
        residual = abs(sol.theta_opt**2 / sol.alpha_opt - prob.nu)
        assert residual <= 1e-10 * prob.nu, f"cell ({bits},{lam}): residual {residual:.3e}"
        worst = max(worst, residual / prob.nu)
    assert elapsed < 10.0, f"solve sweep took {elapsed:.2f}s, budget 10s"


def test_02_oversampling_collapse_identity(sweep, p_base):
    cells, _ = sweep
    for (bits, lam), (prob, sol) in cells.items():
        collapsed = design_for_nu(p_base, prob.nu**lam, 1).distortion
        rel = abs(sol.distortion - collapsed) / sol.distortion
        assert rel <= 1e-6, f"cell ({bits},{lam}): identity residual {rel:.3e}"
    for nu in (1.2, 5.0, 17.0):
        for lam in SWEEP_LAMBDAS:
            direct = design_for_nu(p_base, nu, lam).distortion
            collapsed = design_for_nu(p_base, nu**lam, 1).distortion
            rel = abs(direct - collapsed) / direct
            assert rel <= 1e-6, f"nu={nu}, lambda={lam}: identity residual {rel:.3e}"


def test_03_distortion_upper_bound_with_constant_plant_equality(sweep, p_base, grid):
    cells, _ = sweep
    for (bits, lam), (prob, sol) in cells.items():
        bound = upper_bound(prob.nu, lam, p_base)
        assert sol.distortion <= bound * (1 + 1e-12), f"cell ({bits},{lam}) violates the bound"
    flat = constant_response(grid, 0.8)
    sol = solve_min_mse(DesignProblem(p=flat, gamma=1.5))
    bound = upper_bound(2.5, 1, flat)
    assert abs(sol.distortion - bound) <= 1e-9 * bound


def test_04_closed_form_oracles_constant_and_cosine(grid):
    for c, nu in ((0.5, 1.8), (1.0, 2.0), (2.0, 13.0)):
        sol = solve_min_mse(DesignProblem(p=constant_response(grid, c), gamma=nu - 1.0))
        assert abs(sol.alpha_opt - c * c / (nu - 1.0)) <= 1e-10 * sol.alpha_opt
    cosine = AmplitudeResponse(grid, np.sqrt(2.0 + 2.0 * np.cos(grid.omegas)))
    sol = solve_min_mse(DesignProblem(p=cosine, gamma=1.0))
    b = 2.0 + sol.alpha_opt
    theta_closed = math.sqrt((b + math.sqrt(b * b - 4.0)) / 2.0)
    assert abs(sol.theta_opt - theta_closed) <= 1e-8 * theta_closed


def test_05_shaping_gain_between_8_and_12_db_for_all_bit_depths(p_base):
    rows = rd_curve(p_base, list(SWEEP_BITS), [1], LOADING_FACTOR)
    gains = {row.bits: row.gain_db for row in rows}
    bad = {b: g for b, g in gains.items() if not 8.0 <= g <= 12.0}
    assert not bad, (
        f"shaping gain outside [8, 12] dB at base rate: "
        + ", ".join(f"bits={b}: {g:.4f} dB" for b, g in sorted(bad.items()))
    )


def test_06_order4_fits_within_half_db_qcqp_and_two_db_yule_walker(sweep):
    cells, _ = sweep
    failures = []
    for (bits, lam), (prob, sol) in sorted(cells.items()):
        qcqp = complete_report(
            norm_constrained_fir(prob.p, 4, sol.norm_r_sq), prob.p, prob.gamma, ideal_mse=sol.alpha_opt
        )
        assert qcqp.fitted.taps[0] == 1.0
        yw_filter = yule_walker_fit(optimal_shaper(sol.alpha_opt, prob.p), 4)
        yw = evaluate_fit(yw_filter, prob.p, prob.gamma, ideal_mse=sol.alpha_opt)
        assert yw_filter.num[0] == 1.0
        q_loss = db(qcqp.achieved_mse / qcqp.ideal_mse) if qcqp.feasible else math.inf
        y_loss = db(yw.achieved_mse / yw.ideal_mse) if yw.feasible else math.inf
        if not (qcqp.feasible and q_loss <= 0.5):
            failures.append(f"({bits},{lam}) qcqp loss {q_loss:.3f} dB > 0.5")
        if not (yw.feasible and y_loss <= 2.0):
            failures.append(f"({bits},{lam}) yule-walker loss {y_loss:.3f} dB > 2.0")
    assert not failures, "order-4 fit losses out of tolerance:\n" + "\n".join(failures)


def test_07_simulation_within_twenty_percent_in_under_sixty_seconds(plant, p_base, grid):
    start = time.perf_counter()
    bits, lam = 8, 1
    gamma = gamma_from_bits(bits, LOADING_FACTOR)
    prob = DesignProblem(p=p_base, gamma=gamma)
    sol = solve_min_mse(prob)
    report = norm_constrained_fir(p_base, 4, sol.norm_r_sq)
    shaper = as_discrete_tf(report.fitted)
    plant_d = discretize_plant(plant, lam)
    score = evaluate_fit(shaper, amplitude_of_tf(plant_d, grid), gamma, ideal_mse=sol.alpha_opt)
    sigma_u_sq, _ = predicted_loop_variances(score.norm_sq, gamma)
    quant = MidRiseQuantizer.from_spec(
        QuantizerSpec.for_sigma_u(bits, LOADING_FACTOR, math.sqrt(sigma_u_sq))
    )
    for seed in range(5):
        model = SignalModel(kind="colored", seed=seed, length=1_000_000)
        x = gen_input(model, plant.sample_period)
        traces = run_feedback_loop(x, shaper, quant)
        result = summarize_run(traces, plant_d, score.achieved_mse)
        ratio = result.empirical_mse / result.predicted_mse
        assert 0.8 <= ratio <= 1.2, f"seed {seed}: empirical/predicted = {ratio:.4f}"
        assert result.overload_rate < 0.05, f"seed {seed}: overload rate {result.overload_rate}"
        if result.overload_count == 0:
            assert loop_identity_residual(traces, shaper) <= 1e-10
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"simulation run took {elapsed:.1f}s, budget 60s"


def test_08_alpha_map_monotone_and_stationary_on_random_plants():
    rng = np.random.default_rng(20240802)
    grid = FrequencyGrid(2048)
    for trial in range(100):
        order = int(rng.integers(1, 5))
        poles = rng.uniform(-0.9, 0.9, order)
        zeros = rng.uniform(-0.95, 0.95, int(rng.integers(0, order + 1)))
        num = np.atleast_1d(np.poly(zeros)).astype(float)
        den = np.atleast_1d(np.poly(poles)).astype(float)
        gain = float(rng.uniform(0.2, 3.0))
        tf = RationalDiscreteTF((gain * num).tolist(), den.tolist())
        p = amplitude_of_tf(tf, grid)
        gamma = float(rng.uniform(0.2, 100.0))
        prob = DesignProblem(p=p, gamma=gamma)
        sol = solve_min_mse(prob)
        ratios = [sol.theta_opt**2 / sol.alpha_opt]
        for factor in (2.0, 4.0):
            a = factor * sol.alpha_opt
            ratios.append(geomean_amplitude(a, p) ** 2 / a)
        assert ratios[0] > ratios[1] > ratios[2], f"trial {trial}: ratio map not decreasing"
        h = 1e-4 * sol.alpha_opt
        deriv = (design_mse(sol.alpha_opt + h, prob) - design_mse(sol.alpha_opt - h, prob)) / (2 * h)
        normalized = abs(deriv) * sol.alpha_opt / sol.distortion
        assert normalized <= 1e-5, f"trial {trial}: normalized stationarity {normalized:.3e}"


def test_09_kkt_certificates_on_fifty_random_instances():
    rng = np.random.default_rng(20240803)
    for trial in range(50):
        taps = rng.standard_normal(int(rng.integers(2, 6)))
        taps[0] = 1.0 + abs(taps[0])
        plant = FIRFilter(list(taps)).as_tf()
        order = int(rng.integers(1, 7))
        budget = 1.0 + float(rng.uniform(1e-3, 4.0))
        report = norm_constrained_fir(plant, order, budget)
        x = np.array(report.fitted.taps[1:])
        mu = report.kkt_multiplier
        rho = gram_autocorrelations(plant, order)
        idx = np.abs(np.subtract.outer(np.arange(order), np.arange(order)))
        b_vec = rho[1 : order + 1]
        grad = rho[idx] @ x + mu * x + b_vec
        b_norm = float(np.linalg.norm(b_vec))
        assert float(np.linalg.norm(grad)) <= 1e-8 * max(b_norm, 1e-30), f"trial {trial}"
        slack = mu * (float(np.dot(x, x)) - (budget - 1.0))
        assert abs(slack) <= 1e-8, f"trial {trial}: slack {slack:.3e}"


def test_10_grid_convergence_from_8192_to_16384(plant):
    coarse = ct_frequency_map(plant, 1, FrequencyGrid(8192))
    fine = ct_frequency_map(plant, 1, FrequencyGrid(16384))
    for bits in SWEEP_BITS:
        gamma = gamma_from_bits(bits, LOADING_FACTOR)
        for lam in SWEEP_LAMBDAS:
            a1 = solve_min_mse(DesignProblem(p=oversample_response(coarse, lam), gamma=gamma)).alpha_opt
            a2 = solve_min_mse(DesignProblem(p=oversample_response(fine, lam), gamma=gamma)).alpha_opt
            rel = abs(a2 - a1) / a1
            assert rel < 1e-6, f"cell ({bits},{lam}): grid shift {rel:.3e}"
