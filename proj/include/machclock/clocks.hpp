#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "machclock/trajectories.hpp"

namespace machclock {

struct ClockEstimate {
    double t_est = std::numeric_limits<double>::quiet_NaN();
    double sigma_t = std::numeric_limits<double>::quiet_NaN();
    std::string estimator_id;
    std::string inputs_digest; // canonical "key=value;..." echo of the inputs
    bool defined = false;
};

/// t = N/gamma, sigma = sqrt(N)/gamma.
ClockEstimate radiocarbon_estimate(std::int64_t count, double gamma);

/// t = 1/(gamma nbar); undefined for nbar = 0. sigma is the single-dwell spread (= t).
ClockEstimate dwell_time_estimate(double gamma, double nbar);
/// Exponential MLE from K complete dwell intervals: mean, sigma = mean/sqrt(K).
ClockEstimate dwell_time_mle(std::span<const double> dwells);
/// T = eps/(gamma k_B t) with k_B = 1.
double temperature_estimate(double t, double eps, double gamma);
/// High-temperature t = eps/(gamma k_B T).
double time_estimate_high_temperature(double T, double eps, double gamma);
/// Relative error of T implied by a relative error of t through t T = const; returns -rel_t.
double temperature_relative_error(double rel_t);

enum class SwapConvention { Derived, Paper };

/// Derived: ln(N0/Nt)/gamma. Paper: ln(1 - N0/Nt)/gamma, undefined for every Nt <= N0.
ClockEstimate ensemble_swap_estimate(std::int64_t N0, std::int64_t Nt, double gamma,
                                     SwapConvention c = SwapConvention::Derived);

double S_statistic(double z1, double z2, double z1_0, double z2_0);
double mu_coefficient(double z1_0, double z2_0);
/// 2 [eps/(2 k_B) (1/T2 - 1/T1)]^{-2}
double mu_high_temperature(double eps, double T1, double T2);
double delta_S(double Gamma, double t, double mu);

/// Qubit distribution (p_g, p_e).
struct QubitDistribution {
    double p_g = 0.5;
    double p_e = 0.5;
    static QubitDistribution thermal(double beta_eps);
};
double kl_divergence(const QubitDistribution& p1, const QubitDistribution& p2);
/// eps/(2 k_B) (1/T2 - 1/T1)
double kl_high_temperature(double eps, double T1, double T2);
/// sqrt(8 Gamma t)/D
double delta_S_from_kl(double Gamma, double t, double D);

enum class SConvention { Derived, Paper };
/// Derived: (1-S)/(2 gamma), Paper: (1-S)/gamma; sigma = Delta S times the same factor.
ClockEstimate t_from_S(double S, double gamma, double delta_S_value, SConvention c = SConvention::Derived);

struct RegimeReport {
    double Gamma = 0.0, gamma = 0.0, D = 0.0;
    std::vector<double> times;
    std::vector<double> signal;    // 2 gamma t
    std::vector<double> noise;     // sqrt(8 Gamma t)/D
    std::vector<double> threshold; // D at which signal = noise: sqrt(2 Gamma/(gamma^2 t))
    double good_fraction = 0.0;    // fraction of grid points with signal > noise
    bool printed_inequality = false; // sqrt(2 Gamma/gamma) >> D
    bool reverse_inequality = false; // D >> sqrt(2 Gamma/gamma)
    bool signal_dominates = false;   // signal > noise on every grid point
    /// Which inequality agrees with signal_dominates: "printed", "reverse" or "neither".
    std::string consistent_with;
};

/// Scans gamma t over [gt_min, gt_max] (points log-spaced); "much greater" means a factor >= 10.
RegimeReport regime_check(double Gamma, double gamma, double D, double gt_min = 0.01, double gt_max = 0.1,
                          std::size_t points = 50);

// ---------------------------------------------------------------- fitting

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rss = 0.0;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// y = y_inf + A exp(-k t) by least squares (k by golden-section on the profiled residual).
struct ExpFit {
    double rate = 0.0;
    double amplitude = 0.0;
    double offset = 0.0;
    double rss = 0.0;
};
ExpFit fit_exponential(std::span<const double> t, std::span<const double> y, bool with_offset, double k_min,
                       double k_max);

} // namespace machclock
