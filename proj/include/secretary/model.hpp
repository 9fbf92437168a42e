#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "specfun.hpp"

namespace secretary {

// Which objects count as "nice" (acceptable) and what counts as success.
//   classic        best so far; success if overall best
//   best_or_worst  best or worst so far; success if overall best or overall worst
//   postdoc        second best so far; success if overall second best
enum class Variant { classic, best_or_worst, postdoc };

inline std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::classic: return "classic";
        case Variant::best_or_worst: return "bw";
        case Variant::postdoc: return "pd";
    }
    return "?";
}

inline Variant parse_variant(std::string_view s) {
    if (s == "classic" || s == "c") return Variant::classic;
    if (s == "bw" || s == "best-or-worst" || s == "best_or_worst") return Variant::best_or_worst;
    if (s == "pd" || s == "postdoc") return Variant::postdoc;
    throw parse_error("unknown variant '" + std::string(s) + "' (expected classic, bw or pd)", 0);
}

struct Known {
    std::int64_t n;
};
struct Uniform {
    std::int64_t n;
};
struct Poisson {
    double lambda;
    TruncationPolicy tp;
};
struct Explicit {
    std::vector<std::pair<std::int64_t, double>> pmf;  // sorted by k, distinct, p > 0
};

// First k at which the Poisson support is allowed to stop, for cutoffs up to r.
inline std::int64_t poisson_horizon(double lambda, std::int64_t r = 0) {
    const auto base = static_cast<std::int64_t>(std::ceil(lambda + 12.0 * std::sqrt(lambda) + 50.0));
    return std::max(r + 2, base);
}

// Law of the number of objects X.
class CountModel {
public:
    using Law = std::variant<Known, Uniform, Poisson, Explicit>;

    static CountModel known(std::int64_t n) {
        if (n < 1) throw domain_error("known count needs n >= 1");
        return CountModel(Known{n});
    }
    static CountModel uniform(std::int64_t n) {
        if (n < 1) throw domain_error("uniform count needs n >= 1");
        return CountModel(Uniform{n});
    }
    static CountModel poisson(double lambda, TruncationPolicy tp = {}) {
        if (!(lambda > 0.0) || !std::isfinite(lambda) || lambda > 700.0)
            throw domain_error("poisson rate must lie in (0, 700]");
        tp.validate();
        return CountModel(Poisson{lambda, tp});
    }
    static CountModel explicit_pmf(std::vector<std::pair<std::int64_t, double>> pmf) {
        if (pmf.empty()) throw domain_error("explicit pmf is empty");
        std::sort(pmf.begin(), pmf.end());
        CompensatedSum total;
        for (std::size_t i = 0; i < pmf.size(); ++i) {
            const auto [k, p] = pmf[i];
            if (k < 0) throw domain_error("explicit pmf has a negative count");
            if (!(p >= 0.0) || p > 1.0) throw domain_error("explicit pmf has a probability outside [0,1]");
            if (i > 0 && pmf[i - 1].first == k) throw domain_error("explicit pmf repeats count " + std::to_string(k));
            total += p;
        }
        if (std::fabs(total.value() - 1.0) > 1e-12) throw domain_error("explicit pmf does not sum to 1");
        std::erase_if(pmf, [](const auto& e) { return e.second == 0.0; });
        return CountModel(Explicit{std::move(pmf)});
    }

    const Law& law() const noexcept { return law_; }

    bool finite_support() const noexcept { return !std::holds_alternative<Poisson>(law_); }

    std::int64_t max_support() const {
        if (const auto* k = std::get_if<Known>(&law_)) return k->n;
        if (const auto* u = std::get_if<Uniform>(&law_)) return u->n;
        if (const auto* e = std::get_if<Explicit>(&law_)) return e->pmf.back().first;
        throw support_error("poisson model has unbounded support");
    }

    // Largest cutoff worth scanning.
    std::int64_t cutoff_limit() const {
        if (const auto* p = std::get_if<Poisson>(&law_)) return poisson_horizon(p->lambda);
        return max_support();
    }

    double probability(std::int64_t k) const {
        return std::visit(
            [k](const auto& m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, Known>) {
                    return k == m.n ? 1.0 : 0.0;
                } else if constexpr (std::is_same_v<T, Uniform>) {
                    return (k >= 1 && k <= m.n) ? 1.0 / static_cast<double>(m.n) : 0.0;
                } else if constexpr (std::is_same_v<T, Poisson>) {
                    return k < 0 ? 0.0 : poisson_pmf(k, m.lambda);
                } else {
                    auto it = std::lower_bound(m.pmf.begin(), m.pmf.end(), std::pair<std::int64_t, double>{k, -1.0});
                    return (it != m.pmf.end() && it->first == k) ? it->second : 0.0;
                }
            },
            law_);
    }

    // P(X >= r).
    double mass_at_least(std::int64_t r) const {
        return std::visit(
            [r](const auto& m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, Known>) {
                    return m.n >= r ? 1.0 : 0.0;
                } else if constexpr (std::is_same_v<T, Uniform>) {
                    const std::int64_t lo = std::max<std::int64_t>(r, 1);
                    return lo > m.n ? 0.0 : static_cast<double>(m.n - lo + 1) / static_cast<double>(m.n);
                } else if constexpr (std::is_same_v<T, Poisson>) {
                    return poisson_tail(r, m.lambda, m.tp);
                } else {
                    CompensatedSum s;
                    for (const auto& [k, p] : m.pmf)
                        if (k >= r) s += p;
                    return s.value();
                }
            },
            law_);
    }

    // Poisson becomes an explicit table on [0, k_max] with the tail folded into k_max.
    CountModel truncated(std::int64_t k_max) const {
        const auto* p = std::get_if<Poisson>(&law_);
        if (!p) return *this;
        if (k_max < 1) throw domain_error("truncation point must be at least 1");
        std::vector<std::pair<std::int64_t, double>> pmf;
        for (std::int64_t k = 0; k < k_max; ++k) pmf.emplace_back(k, poisson_pmf(k, p->lambda));
        pmf.emplace_back(k_max, poisson_tail(k_max, p->lambda, p->tp));
        std::erase_if(pmf, [](const auto& e) { return e.second == 0.0; });
        return CountModel(Explicit{std::move(pmf)});
    }

    std::string describe() const {
        std::ostringstream os;
        os.precision(12);
        std::visit(
            [&os](const auto& m) {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, Known>)
                    os << "known:n=" << m.n;
                else if constexpr (std::is_same_v<T, Uniform>)
                    os << "uniform:n=" << m.n;
                else if constexpr (std::is_same_v<T, Poisson>)
                    os << "poisson:lambda=" << m.lambda;
                else
                    os << "table:" << m.pmf.size() << " points";
            },
            law_);
        return os.str();
    }

private:
    explicit CountModel(Law law) : law_(std::move(law)) {}
    Law law_;
};

struct SupportScan {
    double weight_sum = 0.0;
    std::int64_t last_k = -1;
    std::size_t terms = 0;
};

enum class Weighting { absolute, relative };

// Visits f(k, w) for each support point k >= k_from in increasing order.
// absolute: w = P(X = k). relative: w = P(X = k) / c for a positive constant c chosen
// so that no weight overflows or underflows (useful for conditional expectations).
// Poisson support stops once past the horizon (and past `reach`) and the geometric tail
// bound is below rel_tol.
template <class F>
SupportScan scan_support(const CountModel& model, std::int64_t k_from, Weighting weighting, F&& f,
                         std::int64_t reach = 0) {
    SupportScan out;
    CompensatedSum total;
    auto emit = [&](std::int64_t k, double w) {
        f(k, w);
        total += w;
        out.last_k = k;
        ++out.terms;
    };
    const auto& law = model.law();
    if (const auto* kn = std::get_if<Known>(&law)) {
        if (kn->n >= k_from) emit(kn->n, 1.0);
    } else if (const auto* u = std::get_if<Uniform>(&law)) {
        const double w = weighting == Weighting::absolute ? 1.0 / static_cast<double>(u->n) : 1.0;
        for (std::int64_t k = std::max<std::int64_t>(k_from, 1); k <= u->n; ++k) emit(k, w);
    } else if (const auto* e = std::get_if<Explicit>(&law)) {
        for (const auto& [k, p] : e->pmf)
            if (k >= k_from) emit(k, p);
    } else {
        const auto& po = std::get<Poisson>(law);
        const std::int64_t start = std::max<std::int64_t>(k_from, 0);
        double anchor = 0.0;
        if (weighting == Weighting::relative) {
            const auto mode = std::max<std::int64_t>(start, static_cast<std::int64_t>(std::floor(po.lambda)));
            anchor = poisson_log_pmf(mode, po.lambda);
        }
        const std::int64_t horizon = std::max(poisson_horizon(po.lambda, start), reach + 2);
        for (std::int64_t k = start;; ++k) {
            if (out.terms >= po.tp.max_terms) throw truncation_error("poisson support scan exhausted its term budget");
            const double w = std::exp(poisson_log_pmf(k, po.lambda) - anchor);
            emit(k, w);
            if (k >= horizon) {
                const double rho = po.lambda / static_cast<double>(k + 1);
                if (w * rho / (1.0 - rho) <= po.tp.rel_tol * total.value()) break;
            }
        }
    }
    out.weight_sum = total.value();
    return out;
}

// Threshold policy: reject the first `cutoff` objects, then take the first nice one.
struct ThresholdPolicy {
    std::int64_t cutoff = 0;
};

inline double nice_probability(Variant v, std::int64_t t) {
    if (t < 1) throw domain_error("step index must be >= 1");
    const double td = static_cast<double>(t);
    switch (v) {
        case Variant::classic: return 1.0 / td;
        case Variant::best_or_worst: return t == 1 ? 1.0 : 2.0 / td;
        case Variant::postdoc: return t == 1 ? 0.0 : 1.0 / td;
    }
    return 0.0;
}

// Success probability when a nice object at step r is accepted and n objects exist.
inline double accept_success_known(Variant v, std::int64_t n, std::int64_t r) {
    if (n < 1 || r < 1 || r > n) throw domain_error("accept_success_known needs 1 <= r <= n");
    const double rd = static_cast<double>(r);
    const double nd = static_cast<double>(n);
    if (v == Variant::postdoc) return n == 1 ? 0.0 : rd * (rd - 1.0) / (nd * (nd - 1.0));
    return rd / nd;
}

// Success probability of the cutoff-r threshold policy with exactly n objects.
inline double threshold_success_known(Variant v, std::int64_t n, std::int64_t r) {
    if (n < 1 || r < 0) throw domain_error("threshold_success_known needs n >= 1 and r >= 0");
    const double nd = static_cast<double>(n);
    if (v == Variant::classic) {
        if (r == 0) return 1.0 / nd;
        if (r >= n) return 0.0;
        return static_cast<double>(r) / nd * (digamma(n) - digamma(r));
    }
    double bw;
    if (r == 0) {
        bw = n == 1 ? 1.0 : 2.0 / nd;
    } else if (r >= n) {
        bw = 0.0;
    } else {
        const double rd = static_cast<double>(r);
        bw = 2.0 * rd * (nd - rd) / (nd * (nd - 1.0));
    }
    if (v == Variant::best_or_worst) return bw;
    return n == 1 ? 0.0 : 0.5 * bw;
}

struct KnownOptimum {
    std::int64_t cutoff;
    double p_bw;
    double p_pd;
};

inline KnownOptimum pbw_known(std::int64_t n) {
    if (n < 1) throw domain_error("pbw_known needs n >= 1");
    const double nd = static_cast<double>(n);
    const double p = (n % 2 == 0) ? nd / (2.0 * (nd - 1.0)) : (nd + 1.0) / (2.0 * nd);
    return {n / 2, p, n == 1 ? 0.0 : 0.5 * p};
}

struct EstimatorResult {
    std::string name;
    double value;
    std::int64_t rounded;
    bool agrees;
};

struct CutoffReport {
    CountModel model;
    Variant variant;
    std::int64_t exact_cutoff;
    double exact_prob;
    std::vector<EstimatorResult> estimators;
};

}  // namespace secretary
