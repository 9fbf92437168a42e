#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace secretary {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;
inline constexpr double e_const = 2.71828182845904523536028747135266250;
inline constexpr double inv_e = 0.36787944117144232159552377016146087;

struct TruncationPolicy {
    double rel_tol = 1e-15;
    std::size_t max_terms = 1'000'000;

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol <= 1e-6))
            throw domain_error("truncation rel_tol must lie in (0, 1e-6]");
        if (max_terms < 64) throw domain_error("truncation max_terms must be at least 64");
    }
};

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    CompensatedSum& operator+=(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline constexpr std::int64_t digamma_exact_limit = 10'000;

inline double digamma(std::int64_t m) {
    if (m < 1) throw domain_error("digamma needs a positive integer, got " + std::to_string(m));
    if (m <= digamma_exact_limit) {
        CompensatedSum h;
        for (std::int64_t k = m - 1; k >= 1; --k) h += 1.0 / static_cast<double>(k);
        h += -euler_gamma;
        return h.value();
    }
    const double x = static_cast<double>(m);
    const double x2 = 1.0 / (x * x);
    return std::log(x) - 0.5 / x - x2 * (1.0 / 12.0 - x2 * (1.0 / 120.0 - x2 / 252.0));
}

// H_m for 0 <= m <= n_max, each entry accurate to about one ulp.
class HarmonicTable {
public:
    explicit HarmonicTable(std::int64_t n_max) : h_(static_cast<std::size_t>(n_max < 0 ? 1 : n_max + 1)) {
        if (n_max < 0) throw domain_error("harmonic table size must be non-negative");
        CompensatedSum s;
        h_[0] = 0.0;
        for (std::int64_t k = 1; k <= n_max; ++k) {
            s += 1.0 / static_cast<double>(k);
            h_[static_cast<std::size_t>(k)] = s.value();
        }
    }

    double operator()(std::int64_t m) const { return h_.at(static_cast<std::size_t>(m)); }
    std::int64_t size_limit() const noexcept { return static_cast<std::int64_t>(h_.size()) - 1; }

private:
    std::vector<double> h_;
};

// Principal branch W0 on [-1/e, inf).
inline double lambert_w0(double x) {
    if (std::isnan(x) || x < -inv_e) throw domain_error("lambert_w0 needs x >= -1/e");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return x;
    if (x == -inv_e) return -1.0;

    // refinement runs in extended precision: near the branch point W is ill-conditioned
    using ld = long double;
    const ld xl = x;
    ld w;
    if (x < -0.32) {
        // series about the branch point in p = sqrt(2(e x + 1))
        const ld q = xl + 0.367879441171442321595523770161460867L;
        const ld p = std::sqrt(2.0L * 2.71828182845904523536028747135266250L * q);
        w = -1.0L + p * (1.0L + p * (-1.0L / 3.0L + p * (11.0L / 72.0L)));
    } else if (x <= 3.0) {
        const ld l = std::log1p(xl);
        w = l * (1.0L - std::log1p(l) / (2.0L + l));
    } else {
        const ld l1 = std::log(xl);
        const ld l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    for (int it = 0; it < 64; ++it) {
        const ld ew = std::exp(w);
        const ld f = w * ew - xl;
        const ld wp1 = w + 1.0L;
        if (wp1 == 0.0L) break;
        const ld denom = ew * wp1 - (w + 2.0L) * f / (2.0L * wp1);
        if (denom == 0.0L || !std::isfinite(denom)) break;
        const ld dw = f / denom;
        w -= dw;
        if (std::fabs(dw) <= 4.0L * std::numeric_limits<ld>::epsilon() * (1.0L + std::fabs(w))) break;
    }
    return w < -1.0L ? -1.0 : static_cast<double>(w);
}

namespace detail {

inline constexpr std::size_t log_factorial_table_size = 1024;

inline const std::array<double, log_factorial_table_size>& log_factorial_table() {
    static const auto table = [] {
        std::array<double, log_factorial_table_size> t{};
        long double acc = 0.0L;
        t[0] = 0.0;
        for (std::size_t k = 1; k < t.size(); ++k) {
            acc += std::log(static_cast<long double>(k));
            t[k] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}

}  // namespace detail

inline double log_factorial(std::int64_t k) {
    if (k < 0) throw domain_error("log_factorial needs k >= 0");
    if (static_cast<std::size_t>(k) < detail::log_factorial_table_size)
        return detail::log_factorial_table()[static_cast<std::size_t>(k)];
    const double x = static_cast<double>(k);
    const double x2 = 1.0 / (x * x);
    constexpr double half_log_two_pi = 0.91893853320467274178;
    return x * std::log(x) - x + 0.5 * std::log(x) + half_log_two_pi +
           (1.0 / x) * (1.0 / 12.0 - x2 * (1.0 / 360.0 - x2 / 1260.0));
}

inline double poisson_log_pmf(std::int64_t k, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw domain_error("poisson rate must be positive and finite");
    if (k < 0) throw domain_error("poisson count must be non-negative");
    return static_cast<double>(k) * std::log(lambda) - lambda - log_factorial(k);
}

inline double poisson_pmf(std::int64_t k, double lambda) { return std::exp(poisson_log_pmf(k, lambda)); }

// P(X >= r) for X ~ Poisson(lambda).
inline double poisson_tail(std::int64_t r, double lambda, const TruncationPolicy& tp = {}) {
    tp.validate();
    if (!(lambda > 0.0)) throw domain_error("poisson rate must be positive");
    if (r <= 0) return 1.0;
    CompensatedSum s;
    std::size_t terms = 0;
    for (std::int64_t k = r;; ++k) {
        if (++terms > tp.max_terms) throw truncation_error("poisson_tail exhausted its term budget");
        const double term = poisson_pmf(k, lambda);
        s += term;
        const double kk = static_cast<double>(k + 1);
        if (kk > lambda) {
            const double rho = lambda / kk;
            const double bound = term * rho / (1.0 - rho);
            const double total = s.value();
            if (bound <= tp.rel_tol * total || (term == 0.0 && total == 0.0 && kk > 2.0 * lambda + 10.0)) break;
        }
    }
    const double v = s.value();
    return v > 1.0 ? 1.0 : v;
}

// Ein(x) = sum_{k>=1} x^k / (k k!), the entire part of the exponential integral.
inline double ein_series(double lambda, const TruncationPolicy& tp = {}) {
    tp.validate();
    if (!(lambda > 0.0)) throw domain_error("ein needs a positive argument");
    if (lambda > 700.0) throw domain_error("ein argument above 700 overflows");
    CompensatedSum s;
    double t = 1.0;  // x^k / k!
    for (std::size_t k = 1;; ++k) {
        if (k > tp.max_terms) throw truncation_error("ein series exhausted its term budget");
        const double kd = static_cast<double>(k);
        t *= lambda / kd;
        const double term = t / kd;
        s += term;
        if (kd + 1.0 > lambda) {
            const double rho = lambda / (kd + 1.0);
            if (term * rho / (1.0 - rho) <= tp.rel_tol * s.value()) break;
        }
    }
    return s.value();
}

// E(x) = gamma + ln x + Ein(x), i.e. the exponential integral Ei(x) for x > 0.
inline double ein_integral(double lambda, const TruncationPolicy& tp = {}) {
    return euler_gamma + std::log(lambda) + ein_series(lambda, tp);
}

// Shi(x) = int_0^x sinh(t)/t dt.
inline double sinh_integral(double lambda, const TruncationPolicy& tp = {}) {
    tp.validate();
    if (!(lambda > 0.0)) throw domain_error("sinh integral needs a positive argument");
    if (lambda > 700.0) throw domain_error("sinh integral argument above 700 overflows");
    CompensatedSum s;
    double u = lambda;  // x^m / m!, m odd
    const double l2 = lambda * lambda;
    for (std::size_t j = 0;; ++j) {
        if (j >= tp.max_terms) throw truncation_error("sinh integral series exhausted its term budget");
        const double m = static_cast<double>(2 * j + 1);
        if (j > 0) u *= l2 / ((m - 1.0) * m);
        const double term = u / m;
        s += term;
        const double rho = l2 / ((m + 1.0) * (m + 2.0));
        if (rho < 1.0 && term * rho / (1.0 - rho) <= tp.rel_tol * s.value()) break;
    }
    return s.value();
}

}  // namespace secretary
