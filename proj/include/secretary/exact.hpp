#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "specfun.hpp"

namespace secretary {

// Relative tolerance under which two curve values count as tied.
inline constexpr double argmax_rel_tol = 1e-13;

namespace detail {

// Conditional expectation E[g(X) | X >= r] where g is visited in increasing k.
template <class G>
double conditional_expectation(const CountModel& model, std::int64_t r, G&& g) {
    CompensatedSum num;
    const auto scan = scan_support(model, r, Weighting::relative, [&](std::int64_t k, double w) { num += g(k) * w; });
    if (scan.terms == 0 || !(scan.weight_sum > 0.0))
        throw conditioning_error("P(X >= " + std::to_string(r) + ") is zero under " + model.describe());
    return num.value() / scan.weight_sum;
}

inline void require_step(std::int64_t r) {
    if (r < 1) throw domain_error("step index r must be >= 1");
}

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

inline void cross_check(double closed, double summed, const char* what) {
    if (std::fabs(closed - summed) > 1e-10 * std::max(1.0, std::fabs(summed)))
        throw std::logic_error(std::string(what) + ": closed form and direct sum disagree");
}

}  // namespace detail

// r(psi(n+1) - psi(r)) / (n + 1 - r): accept value at step r under Uniform[1,n].
inline double uniform_accept_closed_form(std::int64_t r, std::int64_t n) {
    if (r < 1 || r > n) throw domain_error("uniform closed form needs 1 <= r <= n");
    const double rd = static_cast<double>(r);
    return rd * (digamma(n + 1) - digamma(r)) / static_cast<double>(n + 1 - r);
}

// 2r(r - n + n psi(n) - n psi(r)) / (n(n + 1 - r)): reject-then-threshold value under Uniform[1,n].
inline double uniform_reject_closed_form(std::int64_t r, std::int64_t n) {
    if (r < 1 || r > n) throw domain_error("uniform closed form needs 1 <= r <= n");
    const double rd = static_cast<double>(r);
    const double nd = static_cast<double>(n);
    return 2.0 * rd * (rd - nd + nd * (digamma(n) - digamma(r))) / (nd * static_cast<double>(n + 1 - r));
}

// F(r) for Best-or-Worst under Uniform[1,n], r >= 1.
inline double closed_form_uniform(std::int64_t r, std::int64_t n) {
    if (r < 1 || r > n) throw domain_error("closed_form_uniform needs 1 <= r <= n");
    const double rd = static_cast<double>(r);
    const double nd = static_cast<double>(n);
    return 2.0 * rd * (rd - nd + nd * (digamma(n) - digamma(r))) / (nd * nd);
}

// Success probability when a nice object at step r is accepted, given X >= r.
inline double step_accept_prob(Variant v, const CountModel& model, std::int64_t r) {
    detail::require_step(r);
    const double rd = static_cast<double>(r);
    const double summed = detail::conditional_expectation(model, r, [&](std::int64_t k) {
        const double kd = static_cast<double>(k);
        if (v == Variant::postdoc) return k < 2 ? 0.0 : rd * (rd - 1.0) / (kd * (kd - 1.0));
        return rd / kd;
    });
    if (const auto* u = std::get_if<Uniform>(&model.law()); u && v != Variant::postdoc) {
        const double closed = uniform_accept_closed_form(r, u->n);
        detail::cross_check(closed, summed, "step_accept_prob");
        return detail::clamp01(closed);
    }
    return detail::clamp01(summed);
}

// Success probability of passing on step r and then taking the first nice object, given X >= r.
inline double step_reject_prob(Variant v, const CountModel& model, std::int64_t r) {
    detail::require_step(r);
    const double rd = static_cast<double>(r);
    double summed;
    if (v == Variant::classic) {
        CompensatedSum tail;  // sum_{j=r}^{k-1} 1/j
        std::int64_t upto = r;
        summed = detail::conditional_expectation(model, r, [&](std::int64_t k) {
            while (upto < k) tail += 1.0 / static_cast<double>(upto++);
            return rd / static_cast<double>(k) * tail.value();
        });
    } else {
        const double half = v == Variant::postdoc ? 0.5 : 1.0;
        summed = detail::conditional_expectation(model, r, [&](std::int64_t k) {
            if (k <= r) return 0.0;
            const double kd = static_cast<double>(k);
            return half * 2.0 * rd * (kd - rd) / (kd * (kd - 1.0));
        });
    }
    if (const auto* u = std::get_if<Uniform>(&model.law()); u && v != Variant::classic) {
        double closed = uniform_reject_closed_form(r, u->n);
        if (v == Variant::postdoc) closed *= 0.5;
        detail::cross_check(closed, summed, "step_reject_prob");
        return detail::clamp01(closed);
    }
    return detail::clamp01(summed);
}

struct SuccessCurve {
    Variant variant;
    CountModel model;
    std::int64_t r_min;
    std::int64_t r_max;
    std::vector<double> values;
    std::size_t truncation_terms_used;

    double at(std::int64_t r) const {
        if (r < r_min || r > r_max) throw domain_error("cutoff outside the evaluated curve");
        return values[static_cast<std::size_t>(r - r_min)];
    }
};

namespace detail {

// Per-count success of cutoff r given exactly k objects; harmonic numbers come from h.
inline double count_success(Variant v, std::int64_t k, std::int64_t r, const HarmonicTable& h) {
    if (k < 1) return 0.0;
    const double kd = static_cast<double>(k);
    if (v == Variant::classic) {
        if (r == 0) return 1.0 / kd;
        if (r >= k) return 0.0;
        return static_cast<double>(r) / kd * (h(k - 1) - h(r - 1));
    }
    double bw;
    if (r == 0)
        bw = k == 1 ? 1.0 : 2.0 / kd;
    else if (r >= k)
        bw = 0.0;
    else
        bw = 2.0 * static_cast<double>(r) * (kd - static_cast<double>(r)) / (kd * (kd - 1.0));
    if (v == Variant::best_or_worst) return bw;
    return k == 1 ? 0.0 : 0.5 * bw;
}

inline std::vector<double> uniform_curve(Variant v, std::int64_t n, std::int64_t r_min, std::int64_t r_max) {
    const HarmonicTable h(n);
    const double nd = static_cast<double>(n);
    std::vector<double> g;  // g[m] = sum_{k=1}^{m} H_{k-1}/k, classic only
    if (v == Variant::classic) {
        g.resize(static_cast<std::size_t>(n + 1));
        CompensatedSum acc;
        for (std::int64_t k = 1; k <= n; ++k) {
            acc += h(k - 1) / static_cast<double>(k);
            g[static_cast<std::size_t>(k)] = acc.value();
        }
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(r_max - r_min + 1));
    for (std::int64_t r = r_min; r <= r_max; ++r) {
        double f;
        const double rd = static_cast<double>(r);
        if (r >= n && !(r == 0)) {
            f = 0.0;
        } else if (v == Variant::classic) {
            if (r == 0)
                f = h(n) / nd;
            else
                f = rd / nd *
                    (g[static_cast<std::size_t>(n)] - g[static_cast<std::size_t>(r)] - h(r - 1) * (h(n) - h(r)));
        } else if (r == 0) {
            f = v == Variant::best_or_worst ? (2.0 * h(n) - 1.0) / nd : (h(n) - 1.0) / nd;
        } else {
            f = 2.0 * rd * (rd - nd + nd * (h(n - 1) - h(r - 1))) / (nd * nd);
            if (v == Variant::postdoc) f *= 0.5;
        }
        out.push_back(clamp01(f));
    }
    return out;
}

}  // namespace detail

// F(r) for r in [r_min, r_max]; Poisson X = 0 counts as a failure.
inline SuccessCurve success_curve(Variant v, const CountModel& model, std::int64_t r_max, std::int64_t r_min = 0) {
    if (r_min < 0 || r_max < r_min) throw domain_error("success_curve needs 0 <= r_min <= r_max");
    SuccessCurve c{v, model, r_min, r_max, {}, 0};
    const auto& law = model.law();
    if (const auto* u = std::get_if<Uniform>(&law)) {
        c.values = detail::uniform_curve(v, u->n, r_min, r_max);
        c.truncation_terms_used = static_cast<std::size_t>(u->n);
        return c;
    }
    if (const auto* kn = std::get_if<Known>(&law)) {
        for (std::int64_t r = r_min; r <= r_max; ++r) c.values.push_back(threshold_success_known(v, kn->n, r));
        c.truncation_terms_used = 1;
        return c;
    }
    std::vector<std::pair<std::int64_t, double>> support;
    const auto scan = scan_support(
        model, 0, Weighting::absolute, [&](std::int64_t k, double w) { support.emplace_back(k, w); }, r_max);
    c.truncation_terms_used = scan.terms;
    const HarmonicTable h(v == Variant::classic ? std::max<std::int64_t>(scan.last_k, 0) : 0);
    for (std::int64_t r = r_min; r <= r_max; ++r) {
        CompensatedSum f;
        for (const auto& [k, w] : support)
            if (k > r || r == 0) f += detail::count_success(v, k, r, h) * w;
        c.values.push_back(detail::clamp01(f.value()));
    }
    return c;
}

struct CurveOptimum {
    std::int64_t cutoff;
    double prob;
};

// Argmax over [from, r_max], ties (within argmax_rel_tol) broken toward the smallest cutoff.
inline CurveOptimum curve_argmax(const SuccessCurve& c, std::int64_t from) {
    from = std::max(from, c.r_min);
    if (from > c.r_max) throw domain_error("argmax range is empty");
    double best = -1.0;
    for (std::int64_t r = from; r <= c.r_max; ++r) best = std::max(best, c.at(r));
    for (std::int64_t r = from; r <= c.r_max; ++r)
        if (c.at(r) >= best * (1.0 - argmax_rel_tol)) return {r, c.at(r)};
    return {from, c.at(from)};
}

inline CurveOptimum curve_argmax(const SuccessCurve& c) { return curve_argmax(c, c.r_min); }

// True when cutoff r attains the curve maximum over [from, r_max] up to the tie tolerance.
inline bool attains_maximum(const SuccessCurve& c, std::int64_t r, std::int64_t from = 0) {
    from = std::max(from, c.r_min);
    double best = -1.0;
    for (std::int64_t s = from; s <= c.r_max; ++s) best = std::max(best, c.at(s));
    return r >= from && r <= c.r_max && c.at(r) >= best * (1.0 - argmax_rel_tol);
}

// Optimal cutoff over the full range [0, cutoff_limit].
inline CurveOptimum exact_optimum(Variant v, const CountModel& model) {
    return curve_argmax(success_curve(v, model, model.cutoff_limit()));
}

// Sums over k >= 2 of x^k/k! weighted by 1/(k-1), 1/(k(k-1)), 1/k, via Ein.
inline double poisson_s1(double x) { return 1.0 - std::exp(x) + x + x * ein_series(x); }
inline double poisson_s2(double x) { return 1.0 - std::exp(x) + 2.0 * x - ein_series(x) * (1.0 - x); }
inline double poisson_s3(double x) { return ein_series(x) - x; }

struct PoissonSplit {
    double fstar;  // sum over all k >= 2
    double f;      // the k <= r part (non-positive)
};

inline constexpr double poisson_closed_form_limit = 30.0;

// The all-k sum of the per-count BW success extended to k <= r, by direct log-space series.
inline double poisson_fstar_series(std::int64_t r, double lambda, const TruncationPolicy& tp = {}) {
    const auto model = CountModel::poisson(lambda, tp);
    const double rd = static_cast<double>(r);
    CompensatedSum s;
    scan_support(model, 2, Weighting::absolute, [&](std::int64_t k, double w) {
        const double kd = static_cast<double>(k);
        s += 2.0 * rd * (kd - rd) / (kd * (kd - 1.0)) * w;
    });
    return s.value();
}

inline PoissonSplit poisson_fstar_and_f(std::int64_t r, double lambda, const TruncationPolicy& tp = {}) {
    if (r < 2) throw domain_error("poisson split needs r >= 2");
    if (!(lambda > 0.0)) throw domain_error("poisson rate must be positive");
    const double rd = static_cast<double>(r);
    double fstar;
    if (lambda <= poisson_closed_form_limit) {
        const double em = std::exp(-lambda);
        fstar = 2.0 * rd * em * poisson_s1(lambda) - 2.0 * rd * rd * em * poisson_s2(lambda);
    } else {
        fstar = poisson_fstar_series(r, lambda, tp);
    }
    CompensatedSum f;
    for (std::int64_t k = 2; k <= r; ++k) {
        const double kd = static_cast<double>(k);
        f += 2.0 * rd * (kd - rd) / (kd * (kd - 1.0)) * poisson_pmf(k, lambda);
    }
    return {fstar, f.value()};
}

}  // namespace secretary
