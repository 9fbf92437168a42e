#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>

#include <secretary/exact.hpp>
#include <secretary/lab.hpp>
#include <secretary/mc.hpp>

using namespace secretary;
using Catch::Approx;

namespace {

constexpr double z999 = 3.29;

bool within(const SimReport& r, double exact) { return std::fabs(r.p_hat - exact) <= z999 * r.std_error + 1e-12; }

SimConfig config(Variant v, CountModel m, std::int64_t r, std::uint64_t trials, std::uint64_t seed) {
    SimConfig c;
    c.variant = v;
    c.model = std::move(m);
    c.policy = {r};
    c.trials = trials;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("generator reference output and bounded draws", "[mc]") {
    SplitMix64 g(0);
    CHECK(g() == 0xe220a8397b1dcdafULL);
    CHECK(g() == 0x6e789e6aa1b965f4ULL);

    SplitMix64 h(12345);
    std::array<std::uint64_t, 6> bins{};
    constexpr int draws = 600000;
    for (int i = 0; i < draws; ++i) ++bins[h.below(6)];
    double chi2 = 0.0;
    for (auto b : bins) chi2 += (b - draws / 6.0) * (b - draws / 6.0) / (draws / 6.0);
    CHECK(chi2 < 20.5);  // 0.999 quantile with 5 degrees of freedom
    for (int i = 0; i < 1000; ++i) {
        const double u = h.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    CHECK(trial_stream(7, 1)() != trial_stream(7, 2)());
    CHECK(trial_stream(7, 1)() != trial_stream(8, 1)());
}

TEST_CASE("single-episode edge cases", "[mc]") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        auto rng = trial_stream(s, 0);
        CHECK(run_episode(Variant::best_or_worst, 1, 0, rng));
        CHECK_FALSE(run_episode(Variant::postdoc, 1, 0, rng));
        CHECK_FALSE(run_episode(Variant::postdoc, 1, 3, rng));
        CHECK(run_episode(Variant::classic, 1, 0, rng));
        CHECK_FALSE(run_episode(Variant::classic, 5, 5, rng));
        CHECK(run_episode(Variant::best_or_worst, 2, 1, rng));
    }
}

TEST_CASE("episode success rates match known-count formulas", "[mc]") {
    const auto r = simulate(config(Variant::best_or_worst, CountModel::known(5), 2, 1'000'000, 1));
    CHECK(std::fabs(r.p_hat - 0.6) <= 3.0 * r.std_error);
    for (auto v : {Variant::classic, Variant::best_or_worst, Variant::postdoc})
        for (std::int64_t k : {2, 3, 6})
            for (std::int64_t cut = 0; cut < k; ++cut) {
                const auto rep = simulate(config(v, CountModel::known(k), cut, 100'000, 99 + static_cast<std::uint64_t>(k)));
                CHECK(within(rep, threshold_success_known(v, k, cut)));
            }
}

TEST_CASE("simulations are deterministic and independent of worker count", "[mc][property]") {
    const auto cfg = config(Variant::postdoc, CountModel::poisson(6.0), 2, 50'001, 42);
    const auto a = simulate(cfg, 1);
    const auto b = simulate(cfg, 1);
    const auto c = simulate(cfg, 4);
    const auto d = simulate(cfg, 7);
    CHECK(a.successes == b.successes);
    CHECK(a.successes == c.successes);
    CHECK(a.successes == d.successes);
    CHECK(a.draws_of_zero == d.draws_of_zero);
    CHECK(a.p_hat == d.p_hat);
    CHECK(a.std_error == d.std_error);
    CHECK(simulate(config(Variant::postdoc, CountModel::poisson(6.0), 2, 50'001, 43)).successes != a.successes);
}

TEST_CASE("tallies of adjacent trial blocks merge into the full run", "[mc][property]") {
    const auto cfg = config(Variant::best_or_worst, CountModel::uniform(30), 6, 30'000, 5);
    const auto whole = simulate_range(cfg, 0, 30'000);
    const auto left = simulate_range(cfg, 0, 12'345);
    const auto mid = simulate_range(cfg, 12'345, 20'000);
    const auto right = simulate_range(cfg, 20'000, 30'000);
    const auto m1 = merge(merge(left, mid), right);
    const auto m2 = merge(left, merge(mid, right));
    CHECK(m1.trials == whole.trials);
    CHECK(m1.successes == whole.successes);
    CHECK(m2.successes == whole.successes);
    CHECK(make_report(cfg, whole).successes == simulate(cfg, 3).successes);
}

TEST_CASE("simulation agrees with exact values", "[mc]") {
    const auto m50 = CountModel::uniform(50);
    const auto cut = exact_optimum(Variant::best_or_worst, m50);
    const auto bw = simulate(config(Variant::best_or_worst, m50, cut.cutoff, 1'000'000, 11));
    CHECK(within(bw, cut.prob));
    const auto pd = simulate(config(Variant::postdoc, m50, cut.cutoff, 1'000'000, 12));
    CHECK(within(pd, 0.5 * cut.prob));
    CHECK(pd.p_hat == Approx(0.5 * bw.p_hat).margin(5.0 * (pd.std_error + 0.5 * bw.std_error)));

    const auto cl = simulate(config(Variant::classic, CountModel::known(100), 37, 1'000'000, 13));
    CHECK(within(cl, threshold_success_known(Variant::classic, 100, 37)));

    const auto po = simulate(config(Variant::best_or_worst, CountModel::poisson(5.0), 1, 400'000, 14));
    CHECK(within(po, success_curve(Variant::best_or_worst, CountModel::poisson(5.0), 1, 1).at(1)));
    const double zero_rate = std::exp(-5.0);
    CHECK(std::fabs(static_cast<double>(po.draws_of_zero) / 400'000.0 - zero_rate) <=
          z999 * std::sqrt(zero_rate * (1 - zero_rate) / 400'000.0));

    const auto ex = CountModel::explicit_pmf({{3, 0.25}, {8, 0.75}});
    const auto er = simulate(config(Variant::classic, ex, 2, 200'000, 15));
    CHECK(within(er, success_curve(Variant::classic, ex, 2, 2).at(2)));
}

TEST_CASE("simulation config validation", "[mc]") {
    CHECK_THROWS_AS(simulate(config(Variant::classic, CountModel::known(3), 1, 0, 0)), domain_error);
    CHECK_THROWS_AS(simulate(config(Variant::classic, CountModel::known(3), -1, 10, 0)), domain_error);
    const auto one = simulate(config(Variant::best_or_worst, CountModel::known(1), 0, 10, 0));
    CHECK(one.p_hat == 1.0);
    CHECK(one.std_error == 0.0);
}
