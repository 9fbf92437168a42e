#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "specfun.hpp"

namespace secretary {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform in [0, bound), Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t floor = (0 - bound) % bound;
            while (low < floor) {
                m = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Independent stream for one trial, fully determined by (seed, trial index).
inline SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) noexcept {
    return SplitMix64(mix64(seed ^ mix64(trial + 0x632be59bd9b4e019ULL)));
}

// One arrival sequence of k objects under the cutoff-r policy. Only relative ranks are drawn:
// the rank of object t among the first t is uniform on 1..t and independent across t
// (1 = best so far, t = worst so far).
inline bool run_episode(Variant v, std::int64_t k, std::int64_t r, SplitMix64& rng) {
    if (k < 1) return false;
    for (std::int64_t t = std::max<std::int64_t>(r, 0) + 1; t <= k; ++t) {
        const auto rel = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(t))) + 1;
        bool took_best = false, took_worst = false;
        switch (v) {
            case Variant::classic: took_best = rel == 1; break;
            case Variant::best_or_worst:
                took_best = rel == 1;
                took_worst = rel == t;
                break;
            case Variant::postdoc:
                if (rel == 2) {
                    for (std::int64_t s = t + 1; s <= k; ++s)
                        if (rng.below(static_cast<std::uint64_t>(s)) < 2) return false;
                    return true;
                }
                continue;
        }
        if (!took_best && !took_worst) continue;
        // took_best survives while no later object is best so far; likewise for worst
        for (std::int64_t s = t + 1; s <= k && (took_best || took_worst); ++s) {
            const auto later = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(s))) + 1;
            if (later == 1) took_best = false;
            if (later == s) took_worst = false;
        }
        return took_best || took_worst;
    }
    return false;
}

struct SimConfig {
    Variant variant = Variant::best_or_worst;
    CountModel model = CountModel::known(1);
    ThresholdPolicy policy{};
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
};

struct SimTally {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t draws_of_zero = 0;
};

inline SimTally merge(const SimTally& a, const SimTally& b) noexcept {
    return {a.trials + b.trials, a.successes + b.successes, a.draws_of_zero + b.draws_of_zero};
}

struct SimReport {
    SimConfig config;
    std::uint64_t successes;
    double p_hat;
    double std_error;
    std::uint64_t draws_of_zero;
};

// Draws the number of objects. Poisson and explicit laws use inversion on a cumulative table.
class CountSampler {
public:
    explicit CountSampler(const CountModel& model) {
        const auto& law = model.law();
        if (const auto* kn = std::get_if<Known>(&law)) {
            fixed_ = kn->n;
        } else if (const auto* u = std::get_if<Uniform>(&law)) {
            uniform_n_ = u->n;
        } else {
            CompensatedSum c;
            scan_support(model, 0, Weighting::absolute, [&](std::int64_t k, double w) {
                c += w;
                ks_.push_back(k);
                cdf_.push_back(c.value());
            });
        }
    }

    std::int64_t operator()(SplitMix64& rng) const {
        if (fixed_) return fixed_;
        if (uniform_n_) return 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(uniform_n_)));
        const double u = rng.uniform01() * cdf_.back();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), ks_.size() - 1);
        return ks_[i];
    }

private:
    std::int64_t fixed_ = 0;
    std::int64_t uniform_n_ = 0;
    std::vector<std::int64_t> ks_;
    std::vector<double> cdf_;
};

// Trials with indices in [begin, end).
inline SimTally simulate_range(const SimConfig& cfg, const CountSampler& sampler, std::uint64_t begin,
                               std::uint64_t end) {
    SimTally t;
    for (std::uint64_t i = begin; i < end; ++i) {
        auto rng = trial_stream(cfg.seed, i);
        const auto k = sampler(rng);
        ++t.trials;
        if (k == 0) {
            ++t.draws_of_zero;
            continue;
        }
        if (run_episode(cfg.variant, k, cfg.policy.cutoff, rng)) ++t.successes;
    }
    return t;
}

inline SimTally simulate_range(const SimConfig& cfg, std::uint64_t begin, std::uint64_t end) {
    return simulate_range(cfg, CountSampler(cfg.model), begin, end);
}

inline SimReport make_report(const SimConfig& cfg, const SimTally& t) {
    const double p = t.trials ? static_cast<double>(t.successes) / static_cast<double>(t.trials) : 0.0;
    const double se = t.trials ? std::sqrt(p * (1.0 - p) / static_cast<double>(t.trials)) : 0.0;
    return {cfg, t.successes, p, se, t.draws_of_zero};
}

// Splits trials into contiguous index blocks; the result does not depend on `workers`.
inline SimReport simulate(const SimConfig& cfg, unsigned workers = 1) {
    if (cfg.trials < 1) throw domain_error("simulation needs at least one trial");
    if (cfg.policy.cutoff < 0) throw domain_error("cutoff must be non-negative");
    const CountSampler sampler(cfg.model);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(cfg.trials, 1024))));
    std::vector<SimTally> parts(workers);
    const std::uint64_t chunk = cfg.trials / workers, extra = cfg.trials % workers;
    auto bounds = [&](unsigned w) {
        const std::uint64_t b = w * chunk + std::min<std::uint64_t>(w, extra);
        return std::make_pair(b, b + chunk + (w < extra ? 1 : 0));
    };
    if (workers == 1) {
        parts[0] = simulate_range(cfg, sampler, 0, cfg.trials);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                const auto [b, e] = bounds(w);
                parts[w] = simulate_range(cfg, sampler, b, e);
            });
    }
    SimTally total;
    for (const auto& p : parts) total = merge(total, p);
    return make_report(cfg, total);
}

}  // namespace secretary
