#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <secretary/secretary.hpp>

using namespace secretary;

namespace {

struct Common {
    std::string format = "table";
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "Output format: table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
}

void emit(const Common& c, const std::vector<Record>& recs) { write_records(std::cout, recs, parse_format(c.format)); }

std::string fraction_text(std::int64_t p, std::int64_t q) { return std::to_string(p) + "/" + std::to_string(q); }

// ---- cutoff ----

struct CutoffArgs {
    Common common;
    std::string variant = "bw";
    std::string model;
};

int run_cutoff(const CutoffArgs& a) {
    const auto v = parse_variant(a.variant);
    const auto m = parse_model_spec(a.model);
    const auto rep = best_cutoff(v, m);
    Record r;
    r.add("variant", to_string(v)).add("model", m.describe()).add("cutoff", rep.exact_cutoff).add("prob", rep.exact_prob);
    for (const auto& e : rep.estimators)
        r.add(e.name, e.value).add(e.name + "_cutoff", e.rounded).add(e.name + "_agrees", e.agrees);
    emit(a.common, {r});
    return 0;
}

// ---- curve ----

struct CurveArgs {
    Common common;
    std::string variant = "bw";
    std::string model;
    std::int64_t rmin = 0;
    std::optional<std::int64_t> rmax;
    std::string sweep;
    double from = 0.5, to = 6.0, step = 0.05;
};

int run_curve(const CurveArgs& a) {
    const auto v = parse_variant(a.variant);
    std::vector<Record> recs;
    if (!a.sweep.empty()) {
        if (a.sweep != "lambda") throw parse_error("only '--sweep lambda' is supported", 0);
        if (!(a.step > 0.0) || !(a.from > 0.0) || a.to < a.from) throw domain_error("sweep needs 0 < from <= to and step > 0");
        const auto count = static_cast<std::int64_t>(std::floor((a.to - a.from) / a.step + 1e-9));
        for (std::int64_t i = 0; i <= count; ++i) {
            const double lambda = a.from + static_cast<double>(i) * a.step;
            const auto opt = exact_optimum(v, CountModel::poisson(lambda));
            Record r;
            r.add("lambda", lambda).add("cutoff", opt.cutoff).add("prob", opt.prob);
            recs.push_back(std::move(r));
        }
        emit(a.common, recs);
        return 0;
    }
    if (a.model.empty()) throw parse_error("curve needs --model (or --sweep lambda)", 0);
    const auto m = parse_model_spec(a.model);
    const std::int64_t rmax = a.rmax.value_or(m.cutoff_limit());
    const auto c = success_curve(v, m, rmax, a.rmin);
    for (std::int64_t r = c.r_min; r <= c.r_max; ++r) {
        Record rec;
        rec.add("r", r).add("prob", c.at(r)).add("optimal", attains_maximum(c, r));
        recs.push_back(std::move(rec));
    }
    emit(a.common, recs);
    return 0;
}

// ---- simulate ----

struct SimulateArgs {
    Common common;
    std::string variant = "bw";
    std::string model;
    std::int64_t cutoff = 0;
    std::uint64_t trials = 100000;
    unsigned workers = 0;
};

int run_simulate(const SimulateArgs& a) {
    SimConfig cfg;
    cfg.variant = parse_variant(a.variant);
    cfg.model = parse_model_spec(a.model);
    cfg.policy = {a.cutoff};
    cfg.trials = a.trials;
    cfg.seed = a.common.seed;
    const unsigned workers = a.workers ? a.workers : std::max(1u, std::thread::hardware_concurrency());
    const auto rep = simulate(cfg, workers);
    const double exact = success_curve(cfg.variant, cfg.model, a.cutoff, a.cutoff).at(a.cutoff);
    Record r;
    r.add("variant", to_string(cfg.variant))
        .add("model", cfg.model.describe())
        .add("cutoff", a.cutoff)
        .add("trials", a.trials)
        .add("seed", std::to_string(a.common.seed))
        .add("successes", rep.successes)
        .add("p_hat", rep.p_hat)
        .add("stderr", rep.std_error)
        .add("draws_of_zero", rep.draws_of_zero)
        .add("exact", exact);
    if (rep.std_error > 0.0)
        r.add("z", (rep.p_hat - exact) / rep.std_error);
    else
        r.add("z", "n/a");
    emit(a.common, {r});
    return 0;
}

// ---- dp ----

struct DpArgs {
    Common common;
    std::string variant = "bw";
    std::string model;
    bool steps = false;
};

int run_dp(const DpArgs& a) {
    const auto v = parse_variant(a.variant);
    const auto m = parse_model_spec(a.model);
    const bool truncated = !m.finite_support();
    const auto p = backward_induction(v, truncated ? m.truncated(m.cutoff_limit()) : m);
    std::vector<Record> recs;
    if (a.steps) {
        for (std::int64_t t = 1; t <= p.horizon; ++t) {
            const auto i = static_cast<std::size_t>(t);
            Record r;
            r.add("t", t)
                .add("actionable", static_cast<bool>(p.actionable[i]))
                .add("accept", static_cast<bool>(p.accept_at[i]))
                .add("value_accept", p.value_accept[i])
                .add("value_reject", p.value_reject[i]);
            recs.push_back(std::move(r));
        }
    } else {
        Record r;
        r.add("variant", to_string(v)).add("model", m.describe()).add("horizon", p.horizon).add("truncated", truncated);
        r.add("value", p.value()).add("is_threshold", p.is_threshold);
        if (p.threshold)
            r.add("threshold", *p.threshold);
        else
            r.add("threshold", "none");
        r.add("witness", p.witness ? "(" + std::to_string(p.witness->first) + "," + std::to_string(p.witness->second) + ")"
                                   : std::string("none"));
        r.add("reference_recursion_gap", p.reference_recursion_gap);
        recs.push_back(std::move(r));
    }
    emit(a.common, recs);
    return 0;
}

// ---- verify ----

struct VerifyArgs {
    Common common;
    std::string suite;
};

int run_verify(const VerifyArgs& a) {
    std::vector<std::string_view> suites;
    if (a.suite == "all")
        suites.assign(std::begin(verify_suites), std::end(verify_suites));
    else
        suites.push_back(a.suite);
    std::vector<Record> recs;
    bool failed = false;
    for (auto s : suites) {
        for (const auto& c : run_verify_suite(s)) {
            const char* status = c.pass ? "pass" : (c.finding ? "finding" : "FAIL");
            if (!c.pass && !c.finding) failed = true;
            Record r;
            r.add("suite", s).add("check", c.name).add("expected", c.expected).add("observed", c.observed).add("status", status);
            recs.push_back(std::move(r));
        }
    }
    emit(a.common, recs);
    return failed ? 1 : 0;
}

// ---- table ----

int run_table(const Common& common) {
    constexpr std::int64_t n = 1000;
    constexpr double lambda = 100.0;
    const double nd = static_cast<double>(n);
    const double th = theta();
    struct Cell {
        Variant v;
        CountModel m;
        const char* cutoff_form;
        const char* prob_form;
        double cutoff_limit;
        double prob_limit;
    };
    const auto known = CountModel::known(n), uniform = CountModel::uniform(n), poisson = CountModel::poisson(lambda);
    const std::vector<Cell> cells = {
        {Variant::classic, known, "n/e", "1/e", nd * inv_e, inv_e},
        {Variant::best_or_worst, known, "n/2", "1/2", nd / 2.0, 0.5},
        {Variant::postdoc, known, "n/2", "1/4", nd / 2.0, 0.25},
        {Variant::classic, uniform, "n/e^2", "2/e^2", nd * inv_e * inv_e, 2.0 * inv_e * inv_e},
        {Variant::best_or_worst, uniform, "n*theta", "2(theta-theta^2)", nd * th, 2.0 * (th - th * th)},
        {Variant::postdoc, uniform, "n*theta", "theta-theta^2", nd * th, th - th * th},
        {Variant::classic, poisson, "lambda/e", "1/e", lambda * inv_e, inv_e},
        {Variant::best_or_worst, poisson, "lambda/2", "1/2", lambda / 2.0, 0.5},
        {Variant::postdoc, poisson, "lambda/2", "1/4", lambda / 2.0, 0.25},
    };
    std::vector<Record> recs;
    for (const auto& c : cells) {
        const auto opt = exact_optimum(c.v, c.m);
        const double exact_cut = static_cast<double>(opt.cutoff);
        Record r;
        r.add("variant", to_string(c.v))
            .add("model", c.m.describe())
            .add("cutoff_form", c.cutoff_form)
            .add("cutoff_limit", c.cutoff_limit)
            .add("cutoff_exact", opt.cutoff)
            .add("cutoff_gap", std::fabs(exact_cut - c.cutoff_limit) / c.cutoff_limit)
            .add("prob_form", c.prob_form)
            .add("prob_limit", c.prob_limit)
            .add("prob_exact", opt.prob)
            .add("prob_gap", std::fabs(opt.prob - c.prob_limit) / c.prob_limit);
        recs.push_back(std::move(r));
    }
    emit(common, recs);
    return 0;
}

// ---- convergents ----

struct ConvergentArgs {
    Common common;
    std::string constant = "inv-e";
    int count = max_convergent_count;
    std::string verify;
};

int run_convergents(const ConvergentArgs& a) {
    double x;
    if (a.constant == "inv-e") {
        x = inv_e;
    } else if (a.constant == "theta") {
        x = theta();
    } else {
        std::size_t used = 0;
        try {
            x = std::stod(a.constant, &used);
        } catch (const std::exception&) {
            throw parse_error("--constant must be inv-e, theta or a real number", 0);
        }
        if (used != a.constant.size()) throw parse_error("trailing characters in --constant", used);
    }
    const auto cs = cf_convergents(x, a.count);
    std::vector<ConvergentCheck> checks;
    if (!a.verify.empty()) {
        const auto fam = a.verify == "classic" ? ConvergentFamily::classic_known : ConvergentFamily::bw_uniform;
        checks = verify_convergent_cutoffs(fam, cs);
    }
    std::vector<Record> recs;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto& c = cs[i];
        Record r;
        r.add("index", c.index).add("fraction", fraction_text(c.p, c.q)).add("p", c.p).add("q", c.q);
        r.add("error", static_cast<double>(static_cast<long double>(c.p) / c.q - x));
        if (!checks.empty()) r.add("cutoff", checks[i].cutoff).add("match", checks[i].match).add("tie", checks[i].tie);
        recs.push_back(std::move(r));
    }
    emit(a.common, recs);
    return 0;
}

// ---- scan-failures ----

struct ScanArgs {
    Common common;
    std::string estimator = "round_n_theta";
    std::int64_t from = 2;
    std::int64_t to = 121;
    bool rows = false;
};

int run_scan(const ScanArgs& a) {
    const auto id = parse_estimator(a.estimator);
    const auto scan = scan_estimator_failures(id, a.from, a.to);
    std::vector<Record> recs;
    if (a.rows) {
        const bool uniform = is_uniform_estimator(id);
        std::optional<UniformCutoffScanner> table;
        if (uniform) table.emplace(a.to);
        for (auto n : scan.failures) {
            const double value = uniform ? uniform_estimate(id, n) : poisson_estimate(id, static_cast<double>(n));
            const auto exact = uniform ? table->cutoff(n).cutoff
                                       : exact_optimum(Variant::best_or_worst, CountModel::poisson(static_cast<double>(n))).cutoff;
            Record r;
            r.add(uniform ? "n" : "lambda", n).add("estimate", value).add("predicted", estimator_cutoff(id, value)).add("exact", exact);
            recs.push_back(std::move(r));
        }
    } else {
        Record r;
        r.add("estimator", to_string(id))
            .add("from", a.from)
            .add("to", a.to)
            .add("failure_count", static_cast<std::int64_t>(scan.failures.size()))
            .add("failures", join_ints(scan.failures))
            .add("max_deviation", scan.max_deviation);
        recs.push_back(std::move(r));
    }
    emit(a.common, recs);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal cutoffs for secretary-type selection problems with random candidate counts"};
    app.require_subcommand(1);
    std::function<int()> action;

    CutoffArgs cutoff;
    auto* c_cut = app.add_subcommand("cutoff", "Exact optimal cutoff, its success probability and estimators");
    add_common(c_cut, cutoff.common);
    c_cut->add_option("--variant", cutoff.variant, "classic, bw or pd")->capture_default_str();
    c_cut->add_option("--model", cutoff.model, "Count model spec")->required();
    c_cut->callback([&] { action = [&] { return run_cutoff(cutoff); }; });

    CurveArgs curve;
    auto* c_curve = app.add_subcommand("curve", "Success probability per cutoff, or the best cutoff across rates");
    add_common(c_curve, curve.common);
    c_curve->add_option("--variant", curve.variant, "classic, bw or pd")->capture_default_str();
    c_curve->add_option("--model", curve.model, "Count model spec");
    c_curve->add_option("--rmin", curve.rmin, "Smallest cutoff")->capture_default_str();
    c_curve->add_option("--rmax", curve.rmax, "Largest cutoff (default: model limit)");
    c_curve->add_option("--sweep", curve.sweep, "Sweep parameter (lambda)");
    c_curve->add_option("--from", curve.from, "Sweep start")->capture_default_str();
    c_curve->add_option("--to", curve.to, "Sweep end")->capture_default_str();
    c_curve->add_option("--step", curve.step, "Sweep step")->capture_default_str();
    c_curve->callback([&] { action = [&] { return run_curve(curve); }; });

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo estimate of a threshold policy");
    add_common(c_sim, sim.common);
    c_sim->add_option("--variant", sim.variant, "classic, bw or pd")->capture_default_str();
    c_sim->add_option("--model", sim.model, "Count model spec")->required();
    c_sim->add_option("--cutoff", sim.cutoff, "Number of objects rejected outright")->required()->check(CLI::NonNegativeNumber);
    c_sim->add_option("--trials", sim.trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
    c_sim->add_option("--workers", sim.workers, "Worker threads (default: hardware threads)");
    c_sim->callback([&] { action = [&] { return run_simulate(sim); }; });

    DpArgs dp;
    auto* c_dp = app.add_subcommand("dp", "Backward induction over the observation process");
    add_common(c_dp, dp.common);
    c_dp->add_option("--variant", dp.variant, "classic, bw or pd")->capture_default_str();
    c_dp->add_option("--model", dp.model, "Count model spec")->required();
    c_dp->add_flag("--steps", dp.steps, "Print one row per step");
    c_dp->callback([&] { action = [&] { return run_dp(dp); }; });

    VerifyArgs ver;
    auto* c_ver = app.add_subcommand("verify", "Run a verification suite");
    add_common(c_ver, ver.common);
    c_ver->add_option("suite", ver.suite, "thresholds, constants, failures, convergents, counterexample, conjecture or all")
        ->required();
    c_ver->callback([&] { action = [&] { return run_verify(ver); }; });

    Common table;
    auto* c_table = app.add_subcommand("table", "Asymptotic comparison table at n=1000 and lambda=100");
    add_common(c_table, table);
    c_table->callback([&] { action = [&] { return run_table(table); }; });

    ConvergentArgs conv;
    auto* c_conv = app.add_subcommand("convergents", "Continued fraction convergents of a constant");
    add_common(c_conv, conv.common);
    c_conv->add_option("--constant", conv.constant, "inv-e, theta or a real in (0,1)")->capture_default_str();
    c_conv->add_option("--count", conv.count, "Number of convergents")->capture_default_str();
    c_conv->add_option("--verify", conv.verify, "Compare p with the optimal cutoff at horizon q")
        ->check(CLI::IsMember({"classic", "bw"}));
    c_conv->callback([&] { action = [&] { return run_convergents(conv); }; });

    ScanArgs scan;
    auto* c_scan = app.add_subcommand("scan-failures", "Horizons where an estimator misses the exact cutoff");
    add_common(c_scan, scan.common);
    c_scan->add_option("--estimator", scan.estimator, "Estimator id")->capture_default_str();
    c_scan->add_option("--from", scan.from, "First n or rate")->capture_default_str();
    c_scan->add_option("--to", scan.to, "Last n or rate")->capture_default_str();
    c_scan->add_flag("--rows", scan.rows, "Print one row per failure");
    c_scan->callback([&] { action = [&] { return run_scan(scan); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        return action();
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const truncation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const bracketing_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const precision_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
