"""End-to-end acceptance battery.

Each test prints a single machine-greppable PASS/FAIL line. The tests
exercise the headline guarantees of the package: closed forms vs
quadrature, normalized and shifted-uniform formulas, exact estimator
moments vs Monte Carlo, the blood-cancer case study, proportional
reversed hazard identities, the fractional-integral bridge, the bound
suite, stochastic-ordering implications, and the CLT/consistency
diagnostics.

One test in this file fails by design:
``test_criterion_04c_mc_variances_published_formula`` checks the Monte
Carlo sample variance against the independence-based variance formula
(the one whose values the moment tables print by default). That formula
sums marginal Beta-spacing variances as if the spacings were
independent, but the spacings are jointly Dirichlet with negative
pairwise covariance, so it overstates the true sampling variance by
roughly a factor of four. The check is kept in its stated form rather
than weakened; the covariance-corrected variance (used in
``test_criterion_04b_mc_means_within_3se`` and in the CLT diagnostics)
is the one simulation actually confirms.
"""

import math
import time

import numpy as np
import pytest
from scipy.special import gamma as _gamma

from wfgcpe import (SimulationConfig, bound_suite, check_order,
                    clt_diagnostic, consistency_profile,
                    dispersive_implies_wfgcpe_order, empirical_wfgcpe,
                    exact_moments_power_square, find_st_counterexample,
                    hr_dfr_implies_wfgcpe_order, load_dataset, make_exponential,
                    make_frechet, make_power, make_uniform_shifted,
                    make_weibull_square, normalized_wfgcpe, prh_n_step,
                    prh_recurrence_step, prh_transform, prh_wfgcpe,
                    self_density_weight, simulate_estimator, weight_exp_neg,
                    weight_one, weight_sqrt_x, weight_x, weight_x_squared,
                    wfgcpe, wfgcpe_via_fractional_bridge)
from wfgcpe.cli import TABLE3_PUBLISHED

GAMMAS = (0.25, 0.5, 1.0, 1.5, 2.75)

#: Published moment-table cells for the x^2-on-(0,1) population with
#: weight x: (gamma, n) -> (mean, variance), 6 printed decimals. The
#: printed variances follow the independence formula (the package
#: default); one cell, (0.25, 10), is itself off by ~5.4e-6 from that
#: formula, hence the looser variance tolerance below.
TABLE4_PUBLISHED = {
    (0.25, 5): (0.153878, 0.004609), (0.25, 10): (0.181591, 0.003434),
    (0.25, 15): (0.191238, 0.002627), (0.25, 30): (0.200941, 0.001507),
    (0.25, 50): (0.204774, 0.000956),
    (0.5, 5): (0.135721, 0.003395), (0.5, 10): (0.156472, 0.002416),
    (0.5, 15): (0.163420, 0.001822), (0.5, 30): (0.170268, 0.001034),
    (0.5, 50): (0.172941, 0.000653),
    (0.75, 5): (0.116302, 0.002472), (0.75, 10): (0.132732, 0.001734),
    (0.75, 15): (0.138160, 0.001304), (0.75, 30): (0.143500, 0.000738),
    (0.75, 50): (0.145593, 0.000466),
    (1.5, 5): (0.066611, 0.000968), (1.5, 10): (0.077849, 0.000712),
    (1.5, 15): (0.081549, 0.000538), (1.5, 30): (0.085119, 0.000306),
    (1.5, 50): (0.086481, 0.000194),
}

MC_SEED = 20240817
MC_REPLICATES = 100_000


def report(num, label, ok, detail=""):
    tail = f"  ({detail})" if detail else ""
    print(f"ACCEPTANCE {num}: {label}: {'PASS' if ok else 'FAIL'}{tail}")
    assert ok, f"acceptance {num} failed: {label}{tail}"


def _frechet_gamma_ok(c, weight_tag, gamma):
    """Convergence threshold for the heavy-tailed family: the integrand
    with weight x^p needs gamma > (p + 1) / c (same threshold as the
    closed form's gamma > m / c with m = p + 1)."""
    degree = {"one": 0.0, "x": 1.0, "x2": 2.0, "sqrtx": 0.5,
              "expneg": -1.0}[weight_tag]
    return gamma > (degree + 1.0) / c + 1e-12


def _battery_models():
    return [make_power(1.0, 2.0), make_power(2.0, 3.0),
            make_frechet(1.0, 4.0)]


def test_criterion_01_closed_forms_vs_quadrature():
    start = time.perf_counter()
    worst = 0.0
    for model in _battery_models():
        for psi in (weight_x(), weight_x_squared()):
            for g in GAMMAS:
                if (model.family == "frechet"
                        and not _frechet_gamma_ok(model.params["c"],
                                                  psi.tag, g)):
                    continue
                closed = wfgcpe(model, psi, g, method="closed_form").value
                quad = wfgcpe(model, psi, g, method="quadrature").value
                worst = max(worst, abs(closed - quad) / abs(closed))
    elapsed = time.perf_counter() - start
    report(1, "closed forms vs quadrature",
           worst <= 1e-7 and elapsed < 5.0,
           f"max rel err {worst:.3g}, {elapsed:.2f}s")


def test_criterion_02_normalized_forms():
    worst = 0.0
    worst_at_one = 0.0
    for model in _battery_models():
        for psi in (weight_x(), weight_x_squared()):
            for g in GAMMAS:
                if (model.family == "frechet"
                        and not (_frechet_gamma_ok(model.params["c"],
                                                   psi.tag, g)
                                 and _frechet_gamma_ok(model.params["c"],
                                                       psi.tag, 1.0))):
                    continue
                got = normalized_wfgcpe(model, psi, g)
                # independent route: quadrature-only numerator/denominator
                num = wfgcpe(model, psi, g, method="quadrature").value
                den = wfgcpe(model, psi, 1.0, method="quadrature").value
                ref = num / (_gamma(g + 1.0) * den ** g)
                if model.family == "power":
                    # closed ratio for the bounded power family
                    b, c = model.params["b"], model.params["c"]
                    m = {"x": 2.0, "x2": 3.0}[psi.tag]
                    ref = ((c + m) ** (g - 1.0)
                           / (_gamma(g + 1.0) * b ** (m * (g - 1.0))))
                worst = max(worst, abs(got - ref) / abs(ref))
                if g == 1.0:
                    worst_at_one = max(worst_at_one, abs(got - 1.0))
    report(2, "normalized entropy closed vs independent route",
           worst <= 1e-6 and worst_at_one <= 1e-9,
           f"max rel err {worst:.3g}, |at gamma=1 - 1| {worst_at_one:.3g}")


def test_criterion_03_shifted_uniform_formulas():
    worst = 0.0
    for a in (0.0, 1.0, 3.0):
        model = make_uniform_shifted(a)
        for g in (0.5, 1.0, 2.0):
            cases = (
                (weight_one(), 0.5 ** (g + 1.0)),
                (weight_x(), 3.0 ** -(g + 1.0) + a * 2.0 ** -(g + 1.0)),
                (weight_x_squared(), 4.0 ** -(g + 1.0)
                 + 2.0 * a * 3.0 ** -(g + 1.0) + a * a * 2.0 ** -(g + 1.0)),
            )
            for psi, exact in cases:
                got = wfgcpe(model, psi, g, method="quadrature").value
                worst = max(worst, abs(got - exact))
    report(3, "shifted-uniform exact formulas via quadrature",
           worst <= 1e-9, f"max abs err {worst:.3g}")


def test_criterion_04a_moment_table_cells():
    worst_mean = 0.0
    worst_var = 0.0
    for (g, n), (mean_pub, var_pub) in TABLE4_PUBLISHED.items():
        mean, var = exact_moments_power_square(n, g)
        worst_mean = max(worst_mean, abs(mean - mean_pub))
        worst_var = max(worst_var, abs(var - var_pub))
    # variance tolerance 6e-6 rather than 5e-7: the (0.25, 10) printed
    # cell itself misrounds its own formula by ~5.4e-6
    report("4a", "moment-table cells vs exact formulas",
           worst_mean <= 5e-7 and worst_var <= 6e-6,
           f"max mean err {worst_mean:.3g}, max var err {worst_var:.3g}")


_MC_CACHE = {}


def _mc_summaries():
    if _MC_CACHE:
        return _MC_CACHE
    """One draw set per sample size, shared across fractional orders."""
    population = make_power(1.0, 2.0)
    gammas = (0.25, 0.5, 0.75, 1.5)
    for n in (5, 10, 15):
        cfg = SimulationConfig(MC_REPLICATES, n, MC_SEED + n, population,
                               weight_x(), gammas[0])
        _MC_CACHE[n] = simulate_estimator(cfg, gammas=gammas)
    return _MC_CACHE


def test_criterion_04b_mc_means_within_3se():
    start = time.perf_counter()
    worst_z = 0.0
    for n, by_gamma in _mc_summaries().items():
        for g, summary in by_gamma.items():
            mean, var = exact_moments_power_square(n, g,
                                                   spacing_covariance=True)
            se = math.sqrt(var / MC_REPLICATES)
            worst_z = max(worst_z, abs(summary.mean - mean) / se)
    elapsed = time.perf_counter() - start
    report("4b", "Monte Carlo means vs exact means (3 SE)",
           worst_z <= 3.0 and elapsed < 60.0,
           f"max |z| {worst_z:.2f}, {elapsed:.1f}s")


def test_criterion_04c_mc_variances_published_formula():
    """Checks the Monte Carlo sample variance against the
    independence-based variance formula at 3 standard errors.

    FAILS BY DESIGN: that formula ignores the negative Dirichlet
    covariance between the Beta spacings, so the simulated variance sits
    far below it (ratio ~ 1/4) at every (gamma, n). The failure is the
    finding; see the module docstring. The covariance-corrected formula
    (``spacing_covariance=True``) is the one the simulation confirms.
    """
    worst_z = 0.0
    worst_cell = None
    for n, by_gamma in _mc_summaries().items():
        for g, summary in by_gamma.items():
            _, var_formula = exact_moments_power_square(n, g)
            # SE of a sample variance from R draws, normal approximation
            se = var_formula * math.sqrt(2.0 / (MC_REPLICATES - 1))
            z = abs(summary.variance - var_formula) / se
            if z > worst_z:
                worst_z, worst_cell = z, (g, n)
    report("4c", "Monte Carlo variances vs independence-formula variances "
           "(3 SE) [expected to fail: formula treats dependent spacings "
           "as independent]",
           worst_z <= 3.0,
           f"max |z| {worst_z:.0f} at (gamma, n)={worst_cell}; simulated "
           "variance ~1/4 of formula")


def test_criterion_05_case_study_cells():
    weights = {"sqrtx": weight_sqrt_x(), "x": weight_x(),
               "x2": weight_x_squared()}
    passing = []
    details = {}
    for reading in ("literal", "corrected"):
        sample = load_dataset("blood_cancer_43", reading)
        worst = 0.0
        for (g, tag), published in TABLE3_PUBLISHED.items():
            got = empirical_wfgcpe(sample, weights[tag], g)
            worst = max(worst, abs(got - published) / abs(published))
        details[reading] = worst
        if worst <= 0.01:
            passing.append(reading)
    report(5, "case-study estimates within 1% of published cells",
           len(passing) >= 1,
           f"passing reading(s): {passing or 'none'}; max rel err "
           f"literal {details['literal']:.3g}, "
           f"corrected {details['corrected']:.3g}")


def test_criterion_06_prh_identity_and_recurrence():
    rng = np.random.default_rng(20240818)
    worst_identity = 0.0
    for _ in range(20):
        b = float(rng.uniform(0.5, 2.0))
        c = float(rng.uniform(0.5, 4.0))
        eta = float(rng.uniform(0.3, 3.0))
        g = float(rng.uniform(0.3, 2.5))
        base = make_power(b, c)
        psi = weight_x()
        direct = wfgcpe(prh_transform(base, eta), psi, g,
                        method="quadrature").value
        decomposed = prh_wfgcpe(base, eta, psi, g)
        worst_identity = max(
            worst_identity,
            abs(direct - decomposed) / max(1.0, abs(direct)))

    base = make_power(1.0, 2.0)
    psi = weight_x()
    eta, g = 1.5, 0.75
    prior = prh_wfgcpe(base, eta, psi, g)
    worst_step = 0.0
    # one-step recurrence, then n-step against the chained recurrence
    # and against direct evaluation for n up to 3
    stepped = prh_recurrence_step(base, eta, psi, g, prior)
    direct1 = wfgcpe(prh_transform(base, eta), psi, g + 1.0,
                     method="quadrature").value
    worst_step = max(worst_step, abs(stepped - direct1))
    chained = prior
    for n in (1, 2, 3):
        chained = prh_recurrence_step(base, eta, psi, g + (n - 1), chained)
        closed_n = prh_n_step(base, eta, psi, g, n, prior)
        direct_n = wfgcpe(prh_transform(base, eta), psi, g + n,
                          method="quadrature").value
        worst_step = max(worst_step, abs(closed_n - chained),
                         abs(closed_n - direct_n))
    report(6, "reversed-hazard decomposition identity and recurrence",
           worst_identity <= 1e-7 and worst_step <= 1e-6,
           f"identity err {worst_identity:.3g}, recurrence err "
           f"{worst_step:.3g}")


def test_criterion_07_fractional_integral_bridge():
    model = make_power(1.0, 2.0)
    psi = weight_x()
    worst = 0.0
    for g in (0.5, 1.5):
        via_bridge = wfgcpe_via_fractional_bridge(model, psi, g)
        direct = wfgcpe(model, psi, g).value
        worst = max(worst, abs(via_bridge - direct))
    report(7, "fractional-integral bridge agrees with direct evaluation",
           worst <= 1e-5, f"max abs err {worst:.3g}")


def test_criterion_08_bound_suite_full_battery():
    models = ([make_power(b, c) for b in (1.0, 2.0)
               for c in (0.5, 1.0, 2.0, 3.0)]
              + [make_uniform_shifted(a) for a in (0.0, 1.0, 3.0)]
              + [make_frechet(1.0, 4.0)])
    weights = (weight_one(), weight_x(), weight_x_squared(),
               weight_sqrt_x(), weight_exp_neg())
    failures = []
    checked = 0
    for model in models:
        for psi in weights:
            for g in GAMMAS:
                if (model.family == "frechet"
                        and not _frechet_gamma_ok(model.params["c"],
                                                  psi.tag, g)):
                    continue
                xi = weight_x() if math.isfinite(model.support[1]) else None
                for r in bound_suite(model, psi, g, xi=xi):
                    checked += 1
                    if not r.holds:
                        failures.append((model.family, model.params,
                                         psi.tag, g, r.name, r.slack))
    # independent-sum bound on a concrete log-concave pair
    for r in bound_suite(make_uniform_shifted(0.0), weight_x(), 1.5,
                         xi=weight_x(), other=make_uniform_shifted(1.0)):
        checked += 1
        if not r.holds:
            failures.append(("uniform_sum", {}, "x", 1.5, r.name, r.slack))
    report(8, "every applicable bound holds with nonnegative slack",
           not failures,
           f"{checked} checks" + (f"; violations: {failures[:3]}"
                                  if failures else ""))


def test_criterion_09_ordering_implications_and_counterexample():
    start = time.perf_counter()
    # dispersive: uniform(0,1) is less dispersed than uniform(0,2)
    disp = dispersive_implies_wfgcpe_order(
        make_uniform_shifted(0.0), make_power(2.0, 1.0), weight_x(), 0.75)
    # hazard-rate order between exponentials (both DFR-boundary)
    hr = hr_dfr_implies_wfgcpe_order(
        make_exponential(2.0), make_exponential(1.0), weight_exp_neg(), 1.5)
    pair = find_st_counterexample()
    found = pair is not None
    if found:
        c1, c2 = pair
        # confirm the sign change: stochastically ordered pair whose
        # entropy difference flips sign between two fractional orders
        st = check_order(make_power(1.0, c1), make_power(1.0, c2), "st")
        d1 = (wfgcpe(make_power(1.0, c1), weight_x(), 0.5).value
              - wfgcpe(make_power(1.0, c2), weight_x(), 0.5).value)
        d2 = (wfgcpe(make_power(1.0, c1), weight_x(), 2.5).value
              - wfgcpe(make_power(1.0, c2), weight_x(), 2.5).value)
        found = st.holds and d1 * d2 < 0
    elapsed = time.perf_counter() - start
    report(9, "ordering implications hold and st-order counterexample found",
           disp.holds and hr.holds and found and elapsed < 30.0,
           f"counterexample (c1, c2)={pair}, {elapsed:.1f}s")


def test_criterion_10_clt_and_consistency():
    weib_cfg = SimulationConfig(2000, 500, 11, make_weibull_square(1.0),
                                weight_x(), 1.0)
    weib = clt_diagnostic(weib_cfg)
    uniform = make_uniform_shifted(0.0)
    self_cfg = SimulationConfig(2000, 500, 12, uniform,
                                self_density_weight(uniform), 1.0)
    selfw = clt_diagnostic(self_cfg)
    profile = consistency_profile(make_power(1.0, 2.0), weight_x(), 0.5,
                                  sample_sizes=(100, 1000, 10000),
                                  replicates=200)
    errs = [profile[n] for n in (100, 1000, 10000)]
    decreasing = errs[0] > errs[1] > errs[2]
    report(10, "CLT diagnostics pass and median error decreases with n",
           bool(weib.passes) and bool(selfw.passes) and decreasing,
           f"KS {weib.ks_distance:.4f}/{selfw.ks_distance:.4f} "
           f"(threshold {weib.ks_threshold:.4f}), median errors "
           f"{errs[0]:.2e} > {errs[1]:.2e} > {errs[2]:.2e}")
