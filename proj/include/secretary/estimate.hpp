#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exact.hpp"
#include "model.hpp"
#include "specfun.hpp"

namespace secretary {

// Limiting cutoff fraction for Best-or-Worst under Uniform counts: -W0(-2/e^2)/2.
inline double theta() {
    static const double value = -0.5 * lambert_w0(-2.0 / (e_const * e_const));
    return value;
}

// Limiting success probability 2(theta - theta^2).
inline double theta_peak_value() {
    const double t = theta();
    return 2.0 * (t - t * t);
}

// Limit of F(x n, n) as n grows: g(x) = -2x ln x - 2x(1 - x).
inline double uniform_limit_shape(double x) { return -2.0 * x * std::log(x) - 2.0 * x * (1.0 - x); }
inline double uniform_limit_shape_slope(double x) { return -2.0 * std::log(x) - 4.0 + 4.0 * x; }

enum class EstimatorId { round_n_theta, affine_theta, lambert_uniform, half_lambda_minus_one, r_star_lambda };

inline std::string_view to_string(EstimatorId id) {
    switch (id) {
        case EstimatorId::round_n_theta: return "round_n_theta";
        case EstimatorId::affine_theta: return "affine_theta";
        case EstimatorId::lambert_uniform: return "lambert_uniform";
        case EstimatorId::half_lambda_minus_one: return "half_lambda_minus_one";
        case EstimatorId::r_star_lambda: return "r_star_lambda";
    }
    return "?";
}

inline EstimatorId parse_estimator(std::string_view s) {
    for (auto id : {EstimatorId::round_n_theta, EstimatorId::affine_theta, EstimatorId::lambert_uniform,
                    EstimatorId::half_lambda_minus_one, EstimatorId::r_star_lambda}) {
        std::string dashed(to_string(id));
        for (auto& ch : dashed)
            if (ch == '_') ch = '-';
        if (s == to_string(id) || s == dashed) return id;
    }
    throw parse_error("unknown estimator '" + std::string(s) + "'", 0);
}

inline bool is_uniform_estimator(EstimatorId id) {
    return id == EstimatorId::round_n_theta || id == EstimatorId::affine_theta || id == EstimatorId::lambert_uniform;
}

// Nearest integer, halves away from zero.
inline std::int64_t round_nearest(double x) { return static_cast<std::int64_t>(std::llround(x)); }

// Integer cutoff an estimator predicts. The half-lambda rule is stated with a floor.
inline std::int64_t estimator_cutoff(EstimatorId id, double value) {
    return id == EstimatorId::half_lambda_minus_one ? static_cast<std::int64_t>(std::floor(value)) : round_nearest(value);
}

inline double uniform_estimate(EstimatorId id, std::int64_t n) {
    if (n < 1) throw domain_error("uniform estimators need n >= 1");
    const double nd = static_cast<double>(n);
    const double t = theta();
    switch (id) {
        case EstimatorId::round_n_theta: return nd * t;
        case EstimatorId::affine_theta: return nd * t + 1.0 / (4.0 - 2.0 * std::exp(2.0 - 2.0 * t));
        case EstimatorId::lambert_uniform: return -0.5 * nd * lambert_w0(-2.0 * std::exp(-2.0 + digamma(n)) / nd);
        default: throw domain_error("not a uniform estimator");
    }
}

inline std::vector<std::pair<EstimatorId, double>> uniform_cutoff_estimates(std::int64_t n) {
    std::vector<std::pair<EstimatorId, double>> out;
    for (auto id : {EstimatorId::round_n_theta, EstimatorId::affine_theta, EstimatorId::lambert_uniform})
        out.emplace_back(id, uniform_estimate(id, n));
    return out;
}

// Stationary point of the smoothed Poisson success curve, S1/(2 S2).
inline double r_star_lambda(double lambda, const TruncationPolicy& tp = {}) {
    if (!(lambda > 0.0)) throw domain_error("poisson rate must be positive");
    if (lambda <= poisson_closed_form_limit) {
        const double e = ein_integral(lambda, tp);
        const double l = std::log(lambda);
        const double num = 1.0 - std::exp(lambda) + lambda - euler_gamma * lambda + lambda * e - lambda * l;
        const double den = 2.0 * (1.0 - std::exp(lambda) + 2.0 * lambda + (euler_gamma - e + l) * (1.0 - lambda));
        return num / den;
    }
    // pmf-weighted sums, free of the e^lambda cancellation
    const auto model = CountModel::poisson(lambda, tp);
    CompensatedSum s1, s2;
    scan_support(model, 2, Weighting::relative, [&](std::int64_t k, double w) {
        const double kd = static_cast<double>(k);
        s1 += w / (kd - 1.0);
        s2 += w / (kd * (kd - 1.0));
    });
    return s1.value() / (2.0 * s2.value());
}

inline double poisson_estimate(EstimatorId id, double lambda, const TruncationPolicy& tp = {}) {
    switch (id) {
        case EstimatorId::half_lambda_minus_one: return lambda / 2.0 - 1.0;
        case EstimatorId::r_star_lambda: return r_star_lambda(lambda, tp);
        default: throw domain_error("not a poisson estimator");
    }
}

inline std::vector<std::pair<EstimatorId, double>> poisson_cutoff_estimates(double lambda,
                                                                            const TruncationPolicy& tp = {}) {
    return {{EstimatorId::half_lambda_minus_one, poisson_estimate(EstimatorId::half_lambda_minus_one, lambda, tp)},
            {EstimatorId::r_star_lambda, poisson_estimate(EstimatorId::r_star_lambda, lambda, tp)}};
}

// Bisection for a sign change of f on [lo, hi], to an argument tolerance.
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-9) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw bracketing_error("no sign change on the given interval");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Poisson rate below which accepting the very first object beats passing on it.
inline double lambda0() {
    auto gap = [](double lambda) {
        const auto m = CountModel::poisson(lambda);
        return step_accept_prob(Variant::best_or_worst, m, 1) - step_reject_prob(Variant::best_or_worst, m, 1);
    };
    return bisect(gap, 0.1, 10.0, 1e-9);
}

struct PoissonPeak {
    double lambda;
    double prob;
    std::int64_t cutoff;
};

// Best rate for Best-or-Worst with Poisson counts, by direct maximisation of P(lambda).
inline PoissonPeak lambda_m() {
    auto P = [](double lambda) { return exact_optimum(Variant::best_or_worst, CountModel::poisson(lambda)); };
    double best_l = 0.05;
    CurveOptimum best = P(best_l);
    for (int i = 6; i <= 1000; ++i) {
        const double l = 0.01 * i;
        const auto o = P(l);
        if (o.prob > best.prob) {
            best = o;
            best_l = l;
        }
    }
    // golden section on the arc where the cutoff stays fixed
    const std::int64_t r = best.cutoff;
    auto F = [r](double lambda) { return success_curve(Variant::best_or_worst, CountModel::poisson(lambda), r, r).values[0]; };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = best_l - 0.01, b = best_l + 0.01;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = F(x1), f2 = F(x2);
    while (b - a > 1e-10) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = F(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = F(x1);
        }
    }
    const double lm = 0.5 * (a + b);
    const auto at = P(lm);
    return {lm, at.prob, at.cutoff};
}

}  // namespace secretary
