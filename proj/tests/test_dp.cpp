#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <secretary/dp.hpp>
#include <secretary/exact.hpp>

using namespace secretary;
using Catch::Approx;

namespace {

void check_policy_invariants(const DPPolicy& p) {
    REQUIRE(p.value_reject.size() == static_cast<std::size_t>(p.horizon + 1));
    CHECK(p.value_reject.back() == 0.0);
    for (std::size_t t = 0; t < p.value_reject.size(); ++t) {
        CHECK(p.value_reject[t] >= 0.0);
        CHECK(p.value_reject[t] <= 1.0);
        CHECK(p.value_accept[t] >= 0.0);
        CHECK(p.value_accept[t] <= 1.0);
    }
}

double curve_max(Variant v, const CountModel& m) {
    const auto c = success_curve(v, m, m.cutoff_limit());
    return curve_argmax(c).prob;
}

}  // namespace

TEST_CASE("known counts give threshold policies at the known optimum", "[dp]") {
    for (std::int64_t n = 1; n <= 60; ++n) {
        const auto m = CountModel::known(n);
        const auto p = backward_induction(Variant::best_or_worst, m);
        check_policy_invariants(p);
        REQUIRE(p.is_threshold);
        REQUIRE(p.threshold.has_value());
        CHECK(p.value() == Approx(pbw_known(n).p_bw).margin(1e-12));
        const auto curve = success_curve(Variant::best_or_worst, m, n);
        CHECK(attains_maximum(curve, *p.threshold));
        if (n >= 4) CHECK(*p.threshold == n / 2);
    }
}

TEST_CASE("uniform counts give threshold policies for every variant", "[dp][property]") {
    for (auto v : {Variant::classic, Variant::best_or_worst, Variant::postdoc})
        for (std::int64_t n = 1; n <= 60; ++n) {
            const auto m = CountModel::uniform(n);
            const auto p = backward_induction(v, m);
            check_policy_invariants(p);
            REQUIRE(p.is_threshold);
            CHECK(std::fabs(p.value() - curve_max(v, m)) <= 1e-12);
            if (p.threshold) CHECK(attains_maximum(success_curve(v, m, n), *p.threshold));
        }
    const auto u5 = backward_induction(Variant::best_or_worst, CountModel::uniform(5));
    CHECK(u5.value() == Approx(0.713333333333333).epsilon(1e-12));
}

TEST_CASE("the two-point classic model is not a threshold policy", "[dp]") {
    const auto m = CountModel::explicit_pmf({{100, 0.99}, {1000, 0.01}});
    const auto p = backward_induction(Variant::classic, m);
    CHECK(p.accept_at[100]);
    CHECK_FALSE(p.accept_at[101]);
    CHECK_FALSE(p.is_threshold);
    CHECK_FALSE(p.threshold.has_value());
    REQUIRE(p.witness.has_value());
    CHECK(p.witness->first == 100);
    CHECK(p.witness->second == 101);
    const auto check = verify_threshold_structure(Variant::classic, m);
    CHECK_FALSE(check.is_threshold);
    CHECK(check.witness == p.witness);
}

TEST_CASE("truncated poisson counts give threshold policies", "[dp][property]") {
    for (auto v : {Variant::best_or_worst, Variant::postdoc})
        for (double lambda : {0.5, 2.0, 5.0, 8.0, 15.0, 30.0}) {
            const auto check = verify_threshold_structure(v, CountModel::poisson(lambda));
            CHECK(check.is_threshold);
            CHECK_FALSE(check.witness.has_value());
        }
    CHECK_THROWS_AS(backward_induction(Variant::postdoc, CountModel::poisson(8.0)), support_error);

    const auto m = CountModel::poisson(10.0);
    const auto p = backward_induction(Variant::best_or_worst, m.truncated(m.cutoff_limit()));
    REQUIRE(p.threshold.has_value());
    CHECK(*p.threshold == exact_optimum(Variant::best_or_worst, m).cutoff);
    CHECK(p.value() == Approx(exact_optimum(Variant::best_or_worst, m).prob).margin(1e-12));
}

TEST_CASE("passing then thresholding never beats passing then playing optimally", "[dp][property]") {
    for (auto v : {Variant::classic, Variant::best_or_worst, Variant::postdoc})
        for (std::int64_t n : {5, 17, 40}) {
            const auto m = CountModel::uniform(n);
            const auto p = backward_induction(v, m);
            for (std::int64_t r = 1; r <= n; ++r)
                CHECK(step_reject_prob(v, m, r) <= p.value_reject[static_cast<std::size_t>(r)] + 1e-12);
        }
}

TEST_CASE("reference continuation recursion", "[dp]") {
    for (std::int64_t n = 1; n <= 40; ++n)
        CHECK(backward_induction(Variant::postdoc, CountModel::uniform(n)).reference_recursion_gap <= 1e-12);
    // the reference weight on the max term is the postdoc nice chance, not the best-or-worst one
    const auto bw = backward_induction(Variant::best_or_worst, CountModel::uniform(5));
    CHECK(bw.reference_recursion_gap > 0.1);
}

TEST_CASE("exhaustive oracle", "[dp]") {
    const auto k4 = exhaustive_oracle(Variant::best_or_worst, CountModel::known(4), {2});
    REQUIRE(k4.counts.size() == 1);
    CHECK(k4.counts[0].successes == 16);
    CHECK(k4.counts[0].orders == 24);
    CHECK(k4.probability == Approx(2.0 / 3.0).epsilon(1e-15));
    for (std::int64_t r : {0, 1, 2}) CHECK(exhaustive_oracle(Variant::postdoc, CountModel::known(1), {r}).probability == 0.0);
    const auto u3 = exhaustive_oracle(Variant::best_or_worst, CountModel::uniform(3), {1});
    CHECK(u3.probability == Approx(5.0 / 9.0).epsilon(1e-15));
    CHECK(u3.probability == Approx(success_curve(Variant::best_or_worst, CountModel::uniform(3), 1, 1).at(1)).epsilon(1e-15));
    CHECK_THROWS_AS(exhaustive_oracle(Variant::classic, CountModel::uniform(10), {3}), size_error);
    CHECK_THROWS_AS(exhaustive_oracle(Variant::classic, CountModel::poisson(2.0), {1}), size_error);
    CHECK_THROWS_AS(exhaustive_count(Variant::classic, 10, 3), size_error);

    for (auto v : {Variant::classic, Variant::best_or_worst, Variant::postdoc})
        for (std::int64_t n = 1; n <= 8; ++n) {
            const auto m = CountModel::uniform(n);
            const auto curve = success_curve(v, m, n);
            for (std::int64_t r = 0; r <= n; ++r)
                CHECK(exhaustive_oracle(v, m, {r}).probability == Approx(curve.at(r)).margin(1e-14));
        }
}
