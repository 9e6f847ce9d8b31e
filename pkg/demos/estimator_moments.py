"""Sampling moments of the plug-in estimator: exact formulas vs Monte
Carlo, and why the spacing covariance matters.

For the population K(x) = x^2 on (0, 1) with weight x, the transformed
spacings are marginally Beta(1, n). Summing their marginal variances as
if they were independent overstates the true sampling variance by about
a factor of four, because the spacings are jointly Dirichlet with
negative pairwise covariance. The simulation below shows which formula
the data actually follow, and the CLT diagnostic standardizes with the
covariance-corrected variance.

Run with: python3 demos/estimator_moments.py
"""

from wfgcpe import (SimulationConfig, clt_diagnostic, consistency_profile,
                    exact_moments_power_square, make_power,
                    make_weibull_square, simulate_estimator, weight_x)

REPLICATES = 20_000
SEED = 7


def main():
    population = make_power(1.0, 2.0)
    print(f"{REPLICATES} Monte Carlo replicates, population K=x^2, psi=x")
    print(f"{'gamma':<7}{'n':<5}{'mc mean':<12}{'exact mean':<12}"
          f"{'mc var':<12}{'indep var':<12}{'corrected var'}")
    for g in (0.25, 0.5, 1.5):
        for n in (5, 15):
            cfg = SimulationConfig(REPLICATES, n, SEED, population,
                                   weight_x(), g)
            s = simulate_estimator(cfg)
            mean, var_indep = exact_moments_power_square(n, g)
            _, var_corr = exact_moments_power_square(
                n, g, spacing_covariance=True)
            print(f"{g:<7g}{n:<5d}{s.mean:<12.6f}{mean:<12.6f}"
                  f"{s.variance:<12.6f}{var_indep:<12.6f}{var_corr:.6f}")
    print("-> the simulated variance tracks the covariance-corrected "
          "column, not the independence one.")

    print()
    print("CLT diagnostic (n=500, 2000 replicates, Weibull shape-2, psi=x)")
    cfg = SimulationConfig(2000, 500, SEED, make_weibull_square(1.0),
                           weight_x(), 1.0)
    r = clt_diagnostic(cfg)
    print(f"  KS distance {r.ks_distance:.4f} vs threshold "
          f"{r.ks_threshold:.4f}; passes={r.passes} "
          f"(moments: {r.moment_source})")

    print()
    print("Consistency: median |error| shrinks with the sample size")
    for n, err in consistency_profile(population, weight_x(), 0.5,
                                      sample_sizes=(100, 1000, 10000),
                                      replicates=100).items():
        print(f"  n={n:<6d} median abs error {err:.3e}")


if __name__ == "__main__":
    main()
