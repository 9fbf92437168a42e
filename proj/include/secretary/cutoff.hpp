#pragma once

#include <string>
#include <variant>

#include "estimate.hpp"
#include "exact.hpp"
#include "model.hpp"

namespace secretary {

// Exact optimal cutoff M, its probability P, and each applicable estimator scored against M.
inline CutoffReport best_cutoff(Variant v, const CountModel& model) {
    const auto opt = exact_optimum(v, model);
    CutoffReport rep{model, v, opt.cutoff, opt.prob, {}};
    if (v == Variant::classic) return rep;
    auto add = [&](EstimatorId id, double value) {
        const auto rounded = estimator_cutoff(id, value);
        rep.estimators.push_back({std::string(to_string(id)), value, rounded, rounded == opt.cutoff});
    };
    if (const auto* u = std::get_if<Uniform>(&model.law())) {
        for (const auto& [id, value] : uniform_cutoff_estimates(u->n)) add(id, value);
    } else if (const auto* p = std::get_if<Poisson>(&model.law())) {
        for (const auto& [id, value] : poisson_cutoff_estimates(p->lambda, p->tp)) add(id, value);
    }
    return rep;
}

}  // namespace secretary
