#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cutoff.hpp"
#include "dp.hpp"
#include "errors.hpp"
#include "estimate.hpp"
#include "exact.hpp"
#include "lab.hpp"
#include "model.hpp"

namespace secretary {

struct Check {
    std::string name;
    std::string expected;
    std::string observed;
    bool pass;
    bool finding = false;  // reported, never counted as a failure
};

inline constexpr std::string_view verify_suites[] = {"thresholds",  "constants",      "failures",
                                                     "convergents", "counterexample", "conjecture"};

inline std::string join_ints(const std::vector<std::int64_t>& xs) {
    std::string s = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
    return s + "}";
}

inline std::string fixed(double x, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << std::fixed << x;
    return os.str();
}

// Backward induction for BW and PD against the exact argmax, over uniform and truncated poisson counts.
inline std::vector<Check> verify_thresholds(std::int64_t uniform_max = 60,
                                            const std::vector<double>& rates = {2.0, 5.0, 10.0, 20.0}) {
    std::vector<Check> out;
    auto one = [&](Variant v, const CountModel& m) {
        const CountModel finite = m.finite_support() ? m : m.truncated(m.cutoff_limit());
        const auto p = backward_induction(v, finite);
        const auto opt = exact_optimum(v, m);
        std::string observed = p.is_threshold ? "threshold" : "non-threshold";
        if (p.threshold) observed += " M=" + std::to_string(*p.threshold);
        observed += " value=" + fixed(p.value(), 12);
        const bool ok = p.is_threshold && p.threshold && *p.threshold == opt.cutoff &&
                        std::fabs(p.value() - opt.prob) <= 1e-12;
        out.push_back({std::string(to_string(v)) + " " + m.describe(),
                       "threshold M=" + std::to_string(opt.cutoff) + " value=" + fixed(opt.prob, 12), observed, ok});
    };
    for (auto v : {Variant::best_or_worst, Variant::postdoc}) {
        for (std::int64_t n = 1; n <= uniform_max; ++n) one(v, CountModel::uniform(n));
        for (double l : rates) one(v, CountModel::poisson(l));
    }
    return out;
}

inline std::vector<Check> verify_counterexample() {
    const auto m = CountModel::explicit_pmf({{100, 0.99}, {1000, 0.01}});
    const auto p = backward_induction(Variant::classic, m);
    std::string observed = p.is_threshold ? "threshold" : "non-threshold";
    if (p.witness) observed += " witness=(" + std::to_string(p.witness->first) + "," + std::to_string(p.witness->second) + ")";
    const bool ok = !p.is_threshold && p.witness && p.witness->first == 100 && p.witness->second == 101;
    return {{"classic two-point {100:0.99,1000:0.01}", "non-threshold witness=(100,101)", observed, ok}};
}

inline std::vector<Check> verify_constants() {
    std::vector<Check> out;
    auto add = [&](const char* name, double value, double target, double tol, int digits) {
        out.push_back({name, fixed(target, digits) + " +- " + fixed(tol, 10), fixed(value, digits + 4),
                       std::fabs(value - target) <= tol});
    };
    add("theta", theta(), 0.20318786, 1e-8, 8);
    add("theta_peak_value", theta_peak_value(), 0.32380511, 1e-8, 8);
    add("lambda0", lambda0(), 2.2197719, 1e-6, 7);
    const auto peak = lambda_m();
    add("lambda_m", peak.lambda, 2.01771, 1e-3, 5);
    add("lambda_m_prob", peak.prob, 0.72647, 1e-3, 5);
    return out;
}

inline const std::vector<std::int64_t>& expected_round_failures() {
    static const std::vector<std::int64_t> v = {8,  13, 18, 23, 32, 37,  42,  47,  52,  57, 62,
                                                67, 72, 77, 82, 96, 101, 106, 111, 116, 121};
    return v;
}

inline std::vector<Check> verify_failures() {
    std::vector<Check> out;
    const auto rt = scan_estimator_failures(EstimatorId::round_n_theta, 2, 121);
    out.push_back({"round_n_theta failures on [2,121]", join_ints(expected_round_failures()), join_ints(rt.failures),
                   rt.failures == expected_round_failures()});
    const auto rt_all = scan_estimator_failures(EstimatorId::round_n_theta, 2, 3000);
    out.push_back({"round_n_theta max deviation on [2,3000]", "1", std::to_string(rt_all.max_deviation),
                   rt_all.max_deviation == 1});
    const std::vector<std::int64_t> affine_expected = {2, 3, 23, 2971};
    const auto af = scan_estimator_failures(EstimatorId::affine_theta, 2, 3000);
    out.push_back({"affine_theta failures on [2,3000]", join_ints(affine_expected), join_ints(af.failures),
                   af.failures == affine_expected});
    const auto lw = scan_estimator_failures(EstimatorId::lambert_uniform, 5, 3000);
    out.push_back({"lambert_uniform failures on (4,3000]", "{}", join_ints(lw.failures), lw.failures.empty()});
    return out;
}

inline std::vector<Check> verify_convergents(std::int64_t theta_q_limit = 6462) {
    std::vector<Check> out;
    auto run = [&](ConvergentFamily fam, double x, const char* label, std::int64_t q_limit) {
        for (const auto& row : verify_convergent_cutoffs(fam, cf_convergents(x, max_convergent_count))) {
            if (row.q > q_limit) continue;
            std::string observed = "M=" + std::to_string(row.cutoff) + (row.tie ? " (tied)" : "");
            out.push_back({std::string(label) + " " + std::to_string(row.p) + "/" + std::to_string(row.q),
                           "M=" + std::to_string(row.p), observed, row.match});
        }
    };
    run(ConvergentFamily::classic_known, inv_e, "classic known inv-e", 2721);
    run(ConvergentFamily::bw_uniform, theta(), "bw uniform theta", theta_q_limit);
    return out;
}

// Integer rates where floor(lambda/2 - 1) misses the exact cutoff; these are findings, not failures.
inline std::vector<Check> verify_conjecture(std::int64_t from = 2, std::int64_t to = 200) {
    std::vector<Check> out;
    const auto scan = scan_estimator_failures(EstimatorId::half_lambda_minus_one, from, to);
    out.push_back({"half_lambda_minus_one on integer rates [" + std::to_string(from) + "," + std::to_string(to) + "]",
                   "{}", join_ints(scan.failures), scan.failures.empty(), !scan.failures.empty()});
    for (auto l : scan.failures) {
        const double lambda = static_cast<double>(l);
        const auto opt = exact_optimum(Variant::best_or_worst, CountModel::poisson(lambda));
        out.push_back({"rate " + std::to_string(l),
                       "M=" + std::to_string(estimator_cutoff(EstimatorId::half_lambda_minus_one, lambda / 2.0 - 1.0)),
                       "M=" + std::to_string(opt.cutoff), false, true});
    }
    return out;
}

inline std::vector<Check> run_verify_suite(std::string_view suite) {
    if (suite == "thresholds") return verify_thresholds();
    if (suite == "constants") return verify_constants();
    if (suite == "failures") return verify_failures();
    if (suite == "convergents") return verify_convergents();
    if (suite == "counterexample") return verify_counterexample();
    if (suite == "conjecture") return verify_conjecture();
    throw parse_error("unknown verify suite '" + std::string(suite) +
                          "' (expected thresholds, constants, failures, convergents, counterexample or conjecture)",
                      0);
}

}  // namespace secretary
