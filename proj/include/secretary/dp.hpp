#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "specfun.hpp"

namespace secretary {

// accept when P_A >= P~_R - dp_tie_tol
inline constexpr double dp_tie_tol = 1e-12;
inline constexpr std::int64_t dp_horizon_limit = 20'000'000;

struct DPPolicy {
    Variant variant;
    CountModel model;
    std::int64_t horizon;
    // Indexed by step t in [0, horizon]; entry 0 is the state before any object is seen.
    std::vector<bool> accept_at;
    std::vector<bool> actionable;      // a nice object can occur at step t
    std::vector<double> value_reject;  // P~_R(t): pass on step t, then play optimally
    std::vector<double> value_accept;  // P_A(t): accept a nice object at step t
    bool is_threshold = false;
    std::optional<std::int64_t> threshold;
    std::optional<std::pair<std::int64_t, std::int64_t>> witness;  // (accepting step, later rejecting step)
    double reference_recursion_gap = 0.0;  // max |recursion weighting the max term by 1/(t+1) - first-principles value|

    double value() const { return value_reject[0]; }
};

struct ThresholdCheck {
    bool is_threshold;
    std::optional<std::int64_t> threshold;
    std::optional<std::pair<std::int64_t, std::int64_t>> witness;
};

namespace detail {

inline void classify(DPPolicy& p) {
    const auto T = p.horizon;
    std::optional<std::int64_t> first_accept;
    std::int64_t prev = -1;
    bool monotone = true;
    for (std::int64_t t = 1; t <= T; ++t) {
        const auto i = static_cast<std::size_t>(t);
        if (!p.actionable[i]) continue;
        if (p.accept_at[i] && !first_accept) first_accept = t;
        if (prev >= 0 && p.accept_at[static_cast<std::size_t>(prev)] && !p.accept_at[i]) {
            monotone = false;
            if (!p.witness) p.witness = std::make_pair(prev, t);
        }
        prev = t;
        // a certain nice object that is accepted ends the process; later steps are unreachable
        if (p.accept_at[i] && nice_probability(p.variant, t) == 1.0) break;
    }
    p.is_threshold = monotone;
    if (monotone) {
        // rejecting every object is the threshold policy with cutoff T
        std::int64_t r = first_accept ? *first_accept - 1 : T;
        while (r >= 1 && !p.actionable[static_cast<std::size_t>(r)]) --r;
        p.threshold = r;
    }
}

}  // namespace detail

// Backward induction over steps 1..T for a finite-support count model.
inline DPPolicy backward_induction(Variant v, const CountModel& model) {
    if (!model.finite_support()) throw support_error("backward induction needs finite support; truncate the model first");
    const std::int64_t T = model.max_support();
    if (T < 1) throw domain_error("count model has no positive support");
    if (T > dp_horizon_limit) throw size_error("backward induction horizon exceeds 20000000 steps");
    const auto N = static_cast<std::size_t>(T);

    std::vector<double> pk(N + 1, 0.0);
    scan_support(model, 0, Weighting::absolute, [&](std::int64_t k, double w) { pk[static_cast<std::size_t>(k)] = w; });

    // suffix sums: S(t) = P(X >= t), A1(t) = sum p_k / k, A2(t) = sum p_k / (k(k-1))
    std::vector<double> S(N + 2, 0.0), A1(N + 2, 0.0), A2(N + 2, 0.0);
    {
        CompensatedSum s, a1, a2;
        for (std::size_t k = N + 1; k-- > 0;) {
            const double kd = static_cast<double>(k);
            s += pk[k];
            if (k >= 1) a1 += pk[k] / kd;
            if (k >= 2) a2 += pk[k] / (kd * (kd - 1.0));
            S[k] = s.value();
            A1[k] = a1.value();
            A2[k] = a2.value();
        }
    }

    DPPolicy p{v, model, T, std::vector<bool>(N + 1, false), std::vector<bool>(N + 1, false),
               std::vector<double>(N + 1, 0.0), std::vector<double>(N + 1, 0.0), false, std::nullopt, std::nullopt, 0.0};

    for (std::size_t t = 1; t <= N; ++t) {
        const double td = static_cast<double>(t);
        double a = 0.0;
        if (S[t] > 0.0) {
            switch (v) {
                case Variant::classic: a = td * A1[t] / S[t]; break;
                case Variant::best_or_worst:
                    a = t == 1 ? (pk[1] + 2.0 * A1[2]) / S[1] : td * A1[t] / S[t];
                    break;
                case Variant::postdoc: a = t == 1 ? 0.0 : td * (td - 1.0) * A2[t] / S[t]; break;
            }
        }
        p.value_accept[t] = std::min(1.0, a);
        p.actionable[t] = nice_probability(v, static_cast<std::int64_t>(t)) > 0.0;
    }

    std::vector<double> reference(N + 1, 0.0);
    for (std::size_t t = N; t-- > 0;) {
        const double q = S[t] > 0.0 ? S[t + 1] / S[t] : 0.0;
        const double nu = nice_probability(v, static_cast<std::int64_t>(t + 1));
        const double next = p.value_reject[t + 1];
        p.value_reject[t] = q * (nu * std::max(p.value_accept[t + 1], next) + (1.0 - nu) * next);
        const double w = 1.0 / static_cast<double>(t + 1);
        reference[t] = q * w * std::max(p.value_accept[t + 1], reference[t + 1]) +
                     static_cast<double>(t) * q * w * reference[t + 1];
    }
    for (std::size_t t = 0; t <= N; ++t)
        p.reference_recursion_gap = std::max(p.reference_recursion_gap, std::fabs(reference[t] - p.value_reject[t]));

    for (std::size_t t = 1; t <= N; ++t)
        p.accept_at[t] = p.actionable[t] && p.value_accept[t] >= p.value_reject[t] - dp_tie_tol;

    detail::classify(p);
    return p;
}

// Threshold structure of the optimal policy; Poisson models are truncated at their horizon.
inline ThresholdCheck verify_threshold_structure(Variant v, const CountModel& model) {
    const CountModel finite = model.finite_support() ? model : model.truncated(model.cutoff_limit());
    const auto p = backward_induction(v, finite);
    return {p.is_threshold, p.threshold, p.witness};
}

inline constexpr std::int64_t exhaustive_limit = 9;

struct ExhaustiveCount {
    std::int64_t k;
    std::uint64_t successes;
    std::uint64_t orders;  // k!
};

struct ExhaustiveResult {
    double probability;
    std::vector<ExhaustiveCount> counts;
};

// Successful arrival orders out of k! for the cutoff-r threshold policy with exactly k objects.
inline ExhaustiveCount exhaustive_count(Variant v, std::int64_t k, std::int64_t r) {
    if (k > exhaustive_limit) throw size_error("exhaustive enumeration limited to 9 objects");
    if (k <= 0) return {k, 0, 1};
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);  // larger value = better object
    const int best = static_cast<int>(k) - 1;
    std::uint64_t wins = 0, total = 0;
    do {
        ++total;
        int hi = -1, lo = static_cast<int>(k), second = -1;
        for (std::int64_t t = 1; t <= k; ++t) {
            const int x = perm[static_cast<std::size_t>(t - 1)];
            const bool is_hi = x > hi;
            const bool is_lo = x < lo;
            const bool is_second = !is_hi && x > second;
            if (is_hi) {
                second = hi;
                hi = x;
            } else if (is_second) {
                second = x;
            }
            if (is_lo) lo = x;
            if (t <= r) continue;
            bool nice = false;
            switch (v) {
                case Variant::classic: nice = is_hi; break;
                case Variant::best_or_worst: nice = is_hi || is_lo; break;
                case Variant::postdoc: nice = is_second && t >= 2; break;
            }
            if (!nice) continue;
            bool ok = false;
            switch (v) {
                case Variant::classic: ok = x == best; break;
                case Variant::best_or_worst: ok = x == best || x == 0; break;
                case Variant::postdoc: ok = x == best - 1; break;
            }
            if (ok) ++wins;
            break;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {k, wins, total};
}

// Ground truth by enumerating every count in the support and every arrival order.
inline ExhaustiveResult exhaustive_oracle(Variant v, const CountModel& model, ThresholdPolicy policy) {
    if (!model.finite_support() || model.max_support() > exhaustive_limit)
        throw size_error("exhaustive oracle needs support within [0, 9]");
    ExhaustiveResult out{0.0, {}};
    CompensatedSum prob;
    scan_support(model, 0, Weighting::absolute, [&](std::int64_t k, double w) {
        const auto c = exhaustive_count(v, k, policy.cutoff);
        out.counts.push_back(c);
        prob += w * static_cast<double>(c.successes) / static_cast<double>(c.orders);
    });
    out.probability = prob.value();
    return out;
}

}  // namespace secretary
