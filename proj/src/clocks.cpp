#include "machclock/clocks.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace machclock {

namespace {

std::string digest(std::initializer_list<std::pair<const char*, double>> kv) {
    std::string out;
    char buf[64];
    for (const auto& [k, v] : kv) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        if (!out.empty()) out += ';';
        out += k;
        out += '=';
        out += buf;
    }
    return out;
}

void require_positive(double x, const char* name) {
    require(x > 0.0 && std::isfinite(x), ErrorCode::InvalidArgument, std::string(name) + " must be > 0");
}

} // namespace

ClockEstimate radiocarbon_estimate(std::int64_t count, double gamma) {
    require_positive(gamma, "gamma");
    require(count >= 0, ErrorCode::InvalidArgument, "count must be >= 0");
    const double n = static_cast<double>(count);
    return {n / gamma, std::sqrt(n) / gamma, "radiocarbon", digest({{"N", n}, {"gamma", gamma}}), true};
}

ClockEstimate dwell_time_estimate(double gamma, double nbar) {
    require_positive(gamma, "gamma");
    require(nbar >= 0.0, ErrorCode::InvalidArgument, "nbar must be >= 0");
    ClockEstimate e;
    e.estimator_id = "dwell-time";
    e.inputs_digest = digest({{"gamma", gamma}, {"nbar", nbar}});
    if (nbar == 0.0) return e; // no upward transitions
    e.t_est = 1.0 / (gamma * nbar);
    e.sigma_t = e.t_est;
    e.defined = true;
    return e;
}

ClockEstimate dwell_time_mle(std::span<const double> dwells) {
    ClockEstimate e;
    e.estimator_id = "dwell-time-mle";
    double sum = 0.0;
    for (double d : dwells) {
        require(d >= 0.0, ErrorCode::InvalidArgument, "dwell times must be >= 0");
        sum += d;
    }
    e.inputs_digest = digest({{"K", static_cast<double>(dwells.size())}, {"sum", sum}});
    if (dwells.empty()) return e;
    const double k = static_cast<double>(dwells.size());
    e.t_est = sum / k;
    e.sigma_t = e.t_est / std::sqrt(k);
    e.defined = true;
    return e;
}

double temperature_estimate(double t, double eps, double gamma) {
    require_positive(t, "t");
    require_positive(gamma, "gamma");
    return eps / (gamma * t);
}

double time_estimate_high_temperature(double T, double eps, double gamma) {
    require_positive(T, "T");
    require_positive(gamma, "gamma");
    return eps / (gamma * T);
}

double temperature_relative_error(double rel_t) { return -rel_t; }

ClockEstimate ensemble_swap_estimate(std::int64_t N0, std::int64_t Nt, double gamma, SwapConvention c) {
    require_positive(gamma, "gamma");
    require(Nt > 0 && Nt <= N0, ErrorCode::InvalidArgument, "need 0 < Nt <= N0");
    ClockEstimate e;
    e.inputs_digest = digest({{"N0", static_cast<double>(N0)}, {"Nt", static_cast<double>(Nt)}, {"gamma", gamma}});
    const double ratio = static_cast<double>(N0) / static_cast<double>(Nt);
    if (c == SwapConvention::Paper) {
        e.estimator_id = "ensemble-swap/paper";
        const double arg = 1.0 - ratio; // <= 0 whenever Nt <= N0
        if (arg <= 0.0) return e;
        e.t_est = std::log(arg) / gamma;
    } else {
        e.estimator_id = "ensemble-swap/derived";
        e.t_est = std::log(ratio) / gamma;
    }
    e.sigma_t = e.t_est > 0.0 ? e.t_est / std::sqrt(gamma * e.t_est) : 0.0;
    e.defined = std::isfinite(e.t_est);
    return e;
}

double S_statistic(double z1, double z2, double z1_0, double z2_0) {
    require(z1_0 != z2_0, ErrorCode::DegenerateInput, "S undefined for z1(0) = z2(0)");
    return (z1 - z2) / (z1_0 - z2_0);
}

double mu_coefficient(double z1_0, double z2_0) {
    require(z1_0 != z2_0, ErrorCode::DegenerateInput, "mu undefined for z1(0) = z2(0)");
    const double a = 1.0 - z1_0 * z1_0, b = 1.0 - z2_0 * z2_0, d = z1_0 - z2_0;
    return (a * a + b * b) / (d * d);
}

double mu_high_temperature(double eps, double T1, double T2) {
    const double x = kl_high_temperature(eps, T1, T2);
    require(x != 0.0, ErrorCode::DegenerateInput, "mu undefined for T1 = T2");
    return 2.0 / (x * x);
}

double delta_S(double Gamma, double t, double mu) {
    require(Gamma >= 0.0 && t >= 0.0 && mu >= 0.0, ErrorCode::InvalidArgument, "Gamma, t, mu must be >= 0");
    return 2.0 * std::sqrt(mu * Gamma * t);
}

QubitDistribution QubitDistribution::thermal(double beta_eps) {
    const double pe = 0.5 * (1.0 + std::tanh(-0.5 * beta_eps));
    return {1.0 - pe, pe};
}

double kl_divergence(const QubitDistribution& p1, const QubitDistribution& p2) {
    require(p2.p_g > 0.0 && p2.p_e > 0.0, ErrorCode::InvalidArgument, "reference distribution needs positive entries");
    require(p1.p_g >= 0.0 && p1.p_e >= 0.0, ErrorCode::InvalidArgument, "probabilities must be >= 0");
    auto term = [](double p, double q) { return p > 0.0 ? p * std::log(p / q) : 0.0; };
    return std::max(0.0, term(p1.p_g, p2.p_g) + term(p1.p_e, p2.p_e));
}

double kl_high_temperature(double eps, double T1, double T2) {
    require_positive(T1, "T1");
    require_positive(T2, "T2");
    return 0.5 * eps * (1.0 / T2 - 1.0 / T1);
}

double delta_S_from_kl(double Gamma, double t, double D) {
    require(D > 0.0, ErrorCode::DegenerateInput, "D must be > 0");
    return std::sqrt(8.0 * Gamma * t) / D;
}

ClockEstimate t_from_S(double S, double gamma, double dS, SConvention c) {
    require_positive(gamma, "gamma");
    const double factor = c == SConvention::Paper ? 1.0 / gamma : 0.5 / gamma;
    return {(1.0 - S) * factor, dS * factor, c == SConvention::Paper ? "t-from-S/paper" : "t-from-S/derived",
            digest({{"S", S}, {"gamma", gamma}, {"delta_S", dS}}), true};
}

RegimeReport regime_check(double Gamma, double gamma, double D, double gt_min, double gt_max, std::size_t points) {
    require_positive(Gamma, "Gamma");
    require_positive(gamma, "gamma");
    require(D >= 0.0, ErrorCode::InvalidArgument, "D must be >= 0");
    require(gt_min > 0.0 && gt_max >= gt_min && points >= 2, ErrorCode::InvalidArgument, "invalid grid");
    RegimeReport r;
    r.Gamma = Gamma;
    r.gamma = gamma;
    r.D = D;
    std::size_t good = 0;
    for (std::size_t i = 0; i < points; ++i) {
        const double gt = gt_min * std::pow(gt_max / gt_min, static_cast<double>(i) / static_cast<double>(points - 1));
        const double t = gt / gamma;
        r.times.push_back(t);
        r.signal.push_back(2.0 * gt);
        r.noise.push_back(D > 0.0 ? std::sqrt(8.0 * Gamma * t) / D : std::numeric_limits<double>::infinity());
        r.threshold.push_back(std::sqrt(2.0 * Gamma / (gamma * gamma * t)));
        if (r.signal.back() > r.noise.back()) ++good;
    }
    r.good_fraction = static_cast<double>(good) / static_cast<double>(points);
    r.signal_dominates = good == points;
    const double ref = std::sqrt(2.0 * Gamma / gamma);
    r.printed_inequality = ref >= 10.0 * D;
    r.reverse_inequality = D >= 10.0 * ref;
    if (r.printed_inequality == r.signal_dominates && r.printed_inequality != r.reverse_inequality)
        r.consistent_with = "printed";
    else if (r.reverse_inequality == r.signal_dominates && r.printed_inequality != r.reverse_inequality)
        r.consistent_with = "reverse";
    else
        r.consistent_with = "neither";
    return r;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorCode::InvalidArgument, "fit needs >= 2 matched points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0.0, ErrorCode::DegenerateInput, "fit abscissae are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        f.rss += r * r;
    }
    return f;
}

namespace {

// linear least squares for (amplitude, offset) at fixed k
ExpFit profile(std::span<const double> t, std::span<const double> y, bool with_offset, double k) {
    ExpFit f;
    f.rate = k;
    double see = 0, se = 0, sey = 0, sy = 0;
    const double n = static_cast<double>(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double e = std::exp(-k * t[i]);
        see += e * e;
        se += e;
        sey += e * y[i];
        sy += y[i];
    }
    if (with_offset) {
        const double det = see * n - se * se;
        f.amplitude = det != 0.0 ? (sey * n - se * sy) / det : 0.0;
        f.offset = det != 0.0 ? (see * sy - se * sey) / det : sy / n;
    } else {
        f.amplitude = see > 0.0 ? sey / see : 0.0;
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - f.offset - f.amplitude * std::exp(-k * t[i]);
        f.rss += r * r;
    }
    return f;
}

} // namespace

ExpFit fit_exponential(std::span<const double> t, std::span<const double> y, bool with_offset, double k_min,
                       double k_max) {
    require(t.size() == y.size() && t.size() >= 3, ErrorCode::InvalidArgument, "fit needs >= 3 matched points");
    require(k_min > 0.0 && k_max > k_min, ErrorCode::InvalidArgument, "invalid rate bracket");
    // coarse log scan, then golden section around the best point
    constexpr int kScan = 200;
    double best_k = k_min, best = std::numeric_limits<double>::infinity();
    const double ratio = std::pow(k_max / k_min, 1.0 / kScan);
    for (int i = 0; i <= kScan; ++i) {
        const double k = k_min * std::pow(ratio, i);
        const double r = profile(t, y, with_offset, k).rss;
        if (r < best) {
            best = r;
            best_k = k;
        }
    }
    double a = std::max(k_min, best_k / ratio), b = std::min(k_max, best_k * ratio);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = profile(t, y, with_offset, c).rss, fd = profile(t, y, with_offset, d).rss;
    for (int it = 0; it < 200 && (b - a) > 1e-14 * b; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = profile(t, y, with_offset, c).rss;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = profile(t, y, with_offset, d).rss;
        }
    }
    return profile(t, y, with_offset, 0.5 * (a + b));
}

} // namespace machclock
