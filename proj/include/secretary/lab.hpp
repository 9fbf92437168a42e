#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "estimate.hpp"
#include "exact.hpp"
#include "model.hpp"
#include "specfun.hpp"

namespace secretary {

struct Convergent {
    std::int64_t p;
    std::int64_t q;
    int index;
};

inline constexpr int max_convergent_count = 12;

// Convergents p_k/q_k, k = 0..count-1, of the continued fraction of x in (0, 1).
// The double is expanded exactly; a convergent is accepted only if x can move by
// `uncertainty` (default 4 ulp) without leaving the set of reals that share it.
inline std::vector<Convergent> cf_convergents(double x, int count, double uncertainty = -1.0) {
    if (!(x > 0.0 && x < 1.0)) throw domain_error("continued fraction input must lie in (0, 1)");
    if (count < 1) throw domain_error("convergent count must be positive");
    if (count > max_convergent_count) throw precision_error("more than 12 convergents exceed double precision");
    if (uncertainty < 0.0) uncertainty = 4.0 * std::numeric_limits<double>::epsilon() * x;

    using u128 = unsigned __int128;
    int e2 = 0;
    const double frac = std::frexp(x, &e2);
    const int shift = 53 - e2;
    if (shift > 120) throw precision_error("input too small for exact expansion");
    const u128 N = static_cast<u128>(std::ldexp(frac, 53));
    const u128 D = static_cast<u128>(1) << shift;

    std::vector<Convergent> out;
    u128 num = N, den = D;
    u128 p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
    for (int k = 0; k < count && den != 0; ++k) {
        const u128 a = num / den;
        const u128 rem = num % den;
        num = den;
        den = rem;
        const u128 p = a * p_prev + p_prev2;
        const u128 q = a * q_prev + q_prev2;
        if (q > static_cast<u128>(std::numeric_limits<std::int64_t>::max()))
            throw precision_error("convergent denominator overflow");
        if (k > 0 && rem != 0) {
            // distances from x to the two ends of the cylinder fixed by a_0..a_k
            const auto dist = [&](u128 pp, u128 qq) {
                const u128 lhs = N * qq, rhs = pp * D;
                const u128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
                return static_cast<long double>(diff) / (static_cast<long double>(D) * static_cast<long double>(qq));
            };
            const long double d1 = dist(p, q);
            const long double d2 = dist(p + p_prev, q + q_prev);
            if (static_cast<long double>(uncertainty) >= std::min(d1, d2) / 2.0L)
                throw precision_error("convergent " + std::to_string(k) + " is beyond the reliable depth");
        }
        out.push_back({static_cast<std::int64_t>(p), static_cast<std::int64_t>(q), k});
        p_prev2 = p_prev;
        q_prev2 = q_prev;
        p_prev = p;
        q_prev = q;
    }
    return out;
}

// Tabulated Best-or-Worst cutoff under Uniform[1,n]: at least one object is observed once n >= 3,
// and M = 0 with P = 1 for n <= 2.
class UniformCutoffScanner {
public:
    explicit UniformCutoffScanner(std::int64_t n_max) : h_(std::max<std::int64_t>(n_max, 1)) {}

    double value(std::int64_t r, std::int64_t n) const {
        const double rd = static_cast<double>(r), nd = static_cast<double>(n);
        return 2.0 * rd * (rd - nd + nd * (h_(n - 1) - h_(r - 1))) / (nd * nd);
    }

    CurveOptimum cutoff(std::int64_t n) const {
        if (n < 1 || n > h_.size_limit()) throw domain_error("n outside the scanner range");
        if (n <= 2) return {0, 1.0};
        double best = -1.0;
        for (std::int64_t r = 1; r <= n; ++r) best = std::max(best, value(r, n));
        for (std::int64_t r = 1; r <= n; ++r)
            if (value(r, n) >= best * (1.0 - argmax_rel_tol)) return {r, value(r, n)};
        return {1, value(1, n)};
    }

    bool attains(std::int64_t r, std::int64_t n) const {
        if (n <= 2) return r == 0;
        if (r < 1 || r > n) return false;
        double best = -1.0;
        for (std::int64_t s = 1; s <= n; ++s) best = std::max(best, value(s, n));
        return value(r, n) >= best * (1.0 - argmax_rel_tol);
    }

private:
    HarmonicTable h_;
};

inline CurveOptimum uniform_observing_cutoff(std::int64_t n) { return UniformCutoffScanner(n).cutoff(n); }

enum class ConvergentFamily { classic_known, bw_uniform };

struct ConvergentCheck {
    std::int64_t p;
    std::int64_t q;
    std::int64_t cutoff;  // smallest optimal cutoff at horizon q
    bool match;           // p is an optimal cutoff
    bool tie;             // more than one cutoff is optimal
};

inline std::vector<ConvergentCheck> verify_convergent_cutoffs(ConvergentFamily family,
                                                              const std::vector<Convergent>& convergents) {
    std::vector<ConvergentCheck> out;
    for (const auto& c : convergents) {
        if (c.q < 1) throw domain_error("convergent denominator must be positive");
        ConvergentCheck row{c.p, c.q, 0, false, false};
        // curve over the admissible cutoffs at horizon q, evaluated once
        std::int64_t first = 0;
        std::vector<double> values;
        if (family == ConvergentFamily::classic_known) {
            values = success_curve(Variant::classic, CountModel::known(c.q), c.q).values;
        } else if (c.q <= 2) {
            values = {1.0};
        } else {
            const UniformCutoffScanner scan(c.q);
            first = 1;
            for (std::int64_t r = 1; r <= c.q; ++r) values.push_back(scan.value(r, c.q));
        }
        const double best = *std::max_element(values.begin(), values.end());
        int ties = 0;
        bool found = false;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i] < best * (1.0 - argmax_rel_tol)) continue;
            const auto r = first + static_cast<std::int64_t>(i);
            if (!found) row.cutoff = r;
            found = true;
            ++ties;
            if (r == c.p) row.match = true;
        }
        row.tie = ties > 1;
        out.push_back(row);
    }
    return out;
}

struct FailureScan {
    EstimatorId estimator;
    std::int64_t from;
    std::int64_t to;
    std::vector<std::int64_t> failures;
    std::int64_t max_deviation = 0;
};

// Every n (or integer rate) in [from, to] where the estimator's integer cutoff misses the exact one.
// Uniform estimators use the tabulated cutoff; Poisson estimators use the exact argmax.
inline FailureScan scan_estimator_failures(EstimatorId id, std::int64_t from, std::int64_t to) {
    if (from < 1 || to < from) throw domain_error("scan range must satisfy 1 <= from <= to");
    FailureScan out{id, from, to, {}, 0};
    if (is_uniform_estimator(id)) {
        const UniformCutoffScanner scan(to);
        for (std::int64_t n = from; n <= to; ++n) {
            const auto exact = scan.cutoff(n).cutoff;
            const auto guess = estimator_cutoff(id, uniform_estimate(id, n));
            const auto dev = std::llabs(guess - exact);
            out.max_deviation = std::max<std::int64_t>(out.max_deviation, dev);
            if (dev != 0) out.failures.push_back(n);
        }
    } else {
        for (std::int64_t l = from; l <= to; ++l) {
            const double lambda = static_cast<double>(l);
            const auto exact = exact_optimum(Variant::best_or_worst, CountModel::poisson(lambda)).cutoff;
            const auto guess = estimator_cutoff(id, poisson_estimate(id, lambda));
            const auto dev = std::llabs(guess - exact);
            out.max_deviation = std::max<std::int64_t>(out.max_deviation, dev);
            if (dev != 0) out.failures.push_back(l);
        }
    }
    return out;
}

// Optimal known-count Best-or-Worst probability mixed over Poisson(lambda), by closed form.
inline double bw_mixture_closed_form(double lambda) {
    const double s = sinh_integral(lambda);
    const double em = std::exp(-lambda);
    return 0.5 * lambda * em * s + 0.5 * std::sinh(lambda) * em + 0.5 * s * em;
}

// Same mixture by direct summation over the pmf.
inline double bw_mixture_series(double lambda) {
    CompensatedSum s;
    scan_support(CountModel::poisson(lambda), 1, Weighting::absolute,
                 [&](std::int64_t k, double w) { s += pbw_known(k).p_bw * w; });
    return s.value();
}

// Partial sum over k in [2, r] of the extended per-count success, at r = floor(lambda/2).
inline double half_rate_partial(double lambda) {
    const auto r = static_cast<std::int64_t>(std::floor(lambda / 2.0));
    if (r < 2) return 0.0;
    return poisson_fstar_and_f(r, lambda).f;
}

struct ProbeRow {
    std::string quantity;
    double parameter;
    double value;
    double limit;
    double gap;  // |value - limit|
};

struct AsymptoteProbe {
    std::vector<ProbeRow> rows;
    bool poisson_shrinks = true;
    bool uniform_shrinks = true;
    bool mixture_shrinks = true;
    bool partial_shrinks = true;
    bool uniform_above_limit = true;
};

inline AsymptoteProbe asymptote_probe() {
    AsymptoteProbe out;
    const double rates[] = {25.0, 50.0, 100.0, 200.0};
    const std::int64_t sizes[] = {250, 500, 1000, 2000};
    auto track = [&](const char* name, double param, double value, double limit, double& prev, bool& flag) {
        const double gap = std::fabs(value - limit);
        out.rows.push_back({name, param, value, limit, gap});
        if (prev >= 0.0 && !(gap < prev)) flag = false;
        prev = gap;
    };
    double prev = -1.0;
    for (double l : rates)
        track("poisson_best_prob", l, exact_optimum(Variant::best_or_worst, CountModel::poisson(l)).prob, 0.5, prev,
              out.poisson_shrinks);
    prev = -1.0;
    const UniformCutoffScanner scan(sizes[3]);
    for (auto n : sizes) {
        const double p = scan.cutoff(n).prob;
        if (!(p > theta_peak_value())) out.uniform_above_limit = false;
        track("uniform_best_prob", static_cast<double>(n), p, theta_peak_value(), prev, out.uniform_shrinks);
    }
    prev = -1.0;
    for (double l : rates)
        track("poisson_mixture", l, bw_mixture_closed_form(l), 0.5, prev, out.mixture_shrinks);
    prev = -1.0;
    for (double l : rates)
        track("half_rate_partial", l, half_rate_partial(l), 0.0, prev, out.partial_shrinks);
    return out;
}

}  // namespace secretary
